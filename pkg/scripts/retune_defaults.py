#!/usr/bin/env python3
"""Rebuild configs/weights.default.toml from the labeled fixture corpus.

Runs the full offline pipeline (ingest -> vocabulary -> topic model ->
thematic labeling -> grid tune) in a temp directory via the CLI and copies
the tuned weights into configs/. Deterministic: same fixtures give the
same file.

Usage: python scripts/retune_defaults.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from relcheck.cli import main  # noqa: E402

# mirror of tests/conftest.py THEMATIC_TOPIC_IDS (the manual judgment of
# the deterministic fixture model)
THEMATIC_TOPIC_IDS = "0,1,2,3,4,5,7,8,9"

FIXTURES = ROOT / "data" / "fixtures"


def run(*argv):
    code = main([str(a) for a in argv])
    if code != 0:
        raise SystemExit(f"command failed: {argv}")


def build(workdir: Path) -> Path:
    fc = workdir / "factchecks.jsonl"
    art = workdir / "articles.jsonl"
    vocab = workdir / "vocab.tsv"
    model = workdir / "topics.model"
    weights = workdir / "weights.toml"
    run("ingest", "--input", FIXTURES / "pages" / "factchecks", "--out", fc)
    run("articles", "--input", FIXTURES / "pages" / "articles", "--out", art)
    run("index", "--factchecks", fc, "--out-vocab", vocab)
    run("train-topics", "--factchecks", fc, "--vocab", vocab,
        "--k", 10, "--iterations", 400, "--seed", 7, "--out", model)
    run("set-thematic", "--model", model, "--vocab", vocab, "--ids", THEMATIC_TOPIC_IDS)
    run("tune", "--factchecks", fc, "--articles", art, "--vocab", vocab,
        "--model", model, "--labels", FIXTURES / "labels.csv", "--out", weights)
    return weights


def main_script() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        weights = build(Path(tmp))
        target = ROOT / "configs" / "weights.default.toml"
        target.parent.mkdir(exist_ok=True)
        shutil.copy(weights, target)
        print(f"wrote {target}:")
        print(target.read_text())


if __name__ == "__main__":
    main_script()
