from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: the kernel must not fuse multiply-adds, or its float64
# results would drift from the pure-Python backend's.
extensions = [
    Extension(
        "relcheck._gibbs",
        ["src/relcheck/_gibbs.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    ),
]

setup(
    ext_modules=cythonize(extensions, language_level=3),
)
