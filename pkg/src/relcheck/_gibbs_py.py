"""Pure-Python collapsed Gibbs sampling kernels (fallback backend).

Bit-identical to the compiled extension in ``_gibbs.pyx``: both draw from
the same SplitMix64 stream and evaluate the per-topic weights with the
same float64 operation order, so a trained model does not depend on which
backend produced it. Keep the two files in sync.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


class SplitMix64:
    """Deterministic 64-bit generator; doubles take the top 53 bits."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_uint64() >> 11) * _INV_2_53


def train_sweeps(words, docs, n_docs, vocab_size, k, alpha, beta, iterations, seed):
    """Run collapsed Gibbs sampling over the token stream.

    words/docs: int32 arrays, one entry per token occurrence, document-major
    order. Returns (z, n_dk, n_kt, n_k) count arrays after the final sweep.
    """
    words = np.ascontiguousarray(words, dtype=np.int32)
    docs = np.ascontiguousarray(docs, dtype=np.int32)
    n_tokens = words.shape[0]
    rng = SplitMix64(seed)

    z = np.empty(n_tokens, dtype=np.int32)
    n_dk = np.zeros((n_docs, k), dtype=np.int32)
    n_kt = np.zeros((k, vocab_size), dtype=np.int32)
    n_k = np.zeros(k, dtype=np.int32)

    for i in range(n_tokens):
        t = rng.next_uint64() % k
        z[i] = t
        n_dk[docs[i], t] += 1
        n_kt[t, words[i]] += 1
        n_k[t] += 1

    v_beta = vocab_size * beta
    for _ in range(iterations):
        for i in range(n_tokens):
            w = words[i]
            d = docs[i]
            t = z[i]
            n_dk[d, t] -= 1
            n_kt[t, w] -= 1
            n_k[t] -= 1

            weights = (n_kt[:, w] + beta) * (n_dk[d, :] + alpha) / (n_k + v_beta)
            cum = np.cumsum(weights)
            u = rng.next_double() * cum[k - 1]
            t = int(np.searchsorted(cum, u, side="right"))
            if t >= k:
                t = k - 1

            z[i] = t
            n_dk[d, t] += 1
            n_kt[t, w] += 1
            n_k[t] += 1

    return z, n_dk, n_kt, n_k


def infer_sweeps(words, phi, alpha, iterations, seed):
    """Sample topic assignments for one document holding topic-word rows fixed.

    Returns the final per-topic assignment counts (int32 vector of length k).
    """
    words = np.ascontiguousarray(words, dtype=np.int32)
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    n_tokens = words.shape[0]
    k = phi.shape[0]
    rng = SplitMix64(seed)

    z = np.empty(n_tokens, dtype=np.int32)
    n_d = np.zeros(k, dtype=np.int32)
    for i in range(n_tokens):
        t = rng.next_uint64() % k
        z[i] = t
        n_d[t] += 1

    for _ in range(iterations):
        for i in range(n_tokens):
            w = words[i]
            t = z[i]
            n_d[t] -= 1

            weights = phi[:, w] * (n_d + alpha)
            cum = np.cumsum(weights)
            u = rng.next_double() * cum[k - 1]
            t = int(np.searchsorted(cum, u, side="right"))
            if t >= k:
                t = k - 1

            z[i] = t
            n_d[t] += 1

    return n_d
