# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled collapsed Gibbs sampling kernels.

Mirror of ``_gibbs_py.py``: same SplitMix64 stream, same float64 operation
order per token, so both backends produce bit-identical models. The build
disables FP contraction so the compiler cannot fuse the multiply-add in
the weight accumulation. Keep the two files in sync.
"""

import numpy as np

ctypedef unsigned long long u64


cdef inline u64 _next_u64(u64 *state) noexcept nogil:
    cdef u64 z
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _next_double(u64 *state) noexcept nogil:
    # top 53 bits -> [0, 1)
    return <double>(_next_u64(state) >> 11) * (1.0 / 9007199254740992.0)


def train_sweeps(words_in, docs_in, int n_docs, int vocab_size, int k,
                 double alpha, double beta, int iterations, seed):
    """Collapsed Gibbs sampling over the token stream; returns final counts."""
    words_arr = np.ascontiguousarray(words_in, dtype=np.int32)
    docs_arr = np.ascontiguousarray(docs_in, dtype=np.int32)
    cdef int n_tokens = words_arr.shape[0]

    z_arr = np.empty(n_tokens, dtype=np.int32)
    n_dk_arr = np.zeros((n_docs, k), dtype=np.int32)
    n_kt_arr = np.zeros((k, vocab_size), dtype=np.int32)
    n_k_arr = np.zeros(k, dtype=np.int32)
    cum_arr = np.empty(k, dtype=np.float64)

    cdef int[::1] words = words_arr
    cdef int[::1] docs = docs_arr
    cdef int[::1] z = z_arr
    cdef int[:, ::1] n_dk = n_dk_arr
    cdef int[:, ::1] n_kt = n_kt_arr
    cdef int[::1] n_k = n_k_arr
    cdef double[::1] cum = cum_arr

    cdef u64 state = <u64>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int i, it, kk, d, w, t
    cdef double u, total, wt, v_beta

    with nogil:
        for i in range(n_tokens):
            t = <int>(_next_u64(&state) % <u64>k)
            z[i] = t
            n_dk[docs[i], t] += 1
            n_kt[t, words[i]] += 1
            n_k[t] += 1

        v_beta = vocab_size * beta
        for it in range(iterations):
            for i in range(n_tokens):
                w = words[i]
                d = docs[i]
                t = z[i]
                n_dk[d, t] -= 1
                n_kt[t, w] -= 1
                n_k[t] -= 1

                total = 0.0
                for kk in range(k):
                    wt = (n_kt[kk, w] + beta) * (n_dk[d, kk] + alpha) / (n_k[kk] + v_beta)
                    total = total + wt
                    cum[kk] = total
                u = _next_double(&state) * cum[k - 1]
                t = k - 1
                for kk in range(k):
                    if cum[kk] > u:
                        t = kk
                        break

                z[i] = t
                n_dk[d, t] += 1
                n_kt[t, w] += 1
                n_k[t] += 1

    return z_arr, n_dk_arr, n_kt_arr, n_k_arr


def infer_sweeps(words_in, phi_in, double alpha, int iterations, seed):
    """Assignment sampling for one document with fixed topic-word rows."""
    words_arr = np.ascontiguousarray(words_in, dtype=np.int32)
    phi_arr = np.ascontiguousarray(phi_in, dtype=np.float64)
    cdef int n_tokens = words_arr.shape[0]
    cdef int k = phi_arr.shape[0]

    z_arr = np.empty(n_tokens, dtype=np.int32)
    n_d_arr = np.zeros(k, dtype=np.int32)
    cum_arr = np.empty(k, dtype=np.float64)

    cdef int[::1] words = words_arr
    cdef double[:, ::1] phi = phi_arr
    cdef int[::1] z = z_arr
    cdef int[::1] n_d = n_d_arr
    cdef double[::1] cum = cum_arr

    cdef u64 state = <u64>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int i, it, kk, w, t
    cdef double u, total, wt

    with nogil:
        for i in range(n_tokens):
            t = <int>(_next_u64(&state) % <u64>k)
            z[i] = t
            n_d[t] += 1

        for it in range(iterations):
            for i in range(n_tokens):
                w = words[i]
                t = z[i]
                n_d[t] -= 1

                total = 0.0
                for kk in range(k):
                    wt = phi[kk, w] * (n_d[kk] + alpha)
                    total = total + wt
                    cum[kk] = total
                u = _next_double(&state) * cum[k - 1]
                t = k - 1
                for kk in range(k):
                    if cum[kk] > u:
                        t = kk
                        break

                z[i] = t
                n_d[t] += 1

    return n_d_arr
