"""Monomial enumeration and indexing shared by the graded linear systems."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4096)
def _monomials(weights: tuple[int, ...], e: int) -> np.ndarray:
    n = len(weights)
    if e < 0:
        return np.zeros((0, n), dtype=np.int64)
    if n == 0:
        return np.zeros((1 if e == 0 else 0, 0), dtype=np.int64)
    w = weights[-1]
    blocks = []
    for a in range(e // w + 1):
        head = _monomials(weights[:-1], e - a * w)
        if len(head):
            tail = np.full((len(head), 1), a, dtype=np.int64)
            blocks.append(np.hstack([head, tail]))
    if not blocks:
        return np.zeros((0, n), dtype=np.int64)
    return np.vstack(blocks)


def monomials_of_degree(weights, e: int) -> np.ndarray:
    """All exponent vectors ``a >= 0`` with ``sum(a_j * w_j) == e``, one per row."""
    out = _monomials(tuple(int(w) for w in weights), int(e))
    out.flags.writeable = False
    return out


def count_monomials(weights, e: int) -> int:
    """Number of monomials of weighted degree ``e`` (coefficient extraction)."""
    if e < 0:
        return 0
    c = [1] + [0] * e
    for w in weights:
        for s in range(w, e + 1):
            c[s] += c[s - w]
    return c[e]


def compositions(k: int, parts: int) -> np.ndarray:
    """Exponent vectors of total degree ``k`` in ``parts`` variables."""
    return monomials_of_degree((1,) * parts, k)


class MonomialIndex:
    """Column lookup for a fixed set of exponent vectors."""

    def __init__(self, exps: np.ndarray):
        exps = np.asarray(exps, dtype=np.int64)
        self.exps = exps
        nvars = exps.shape[1] if exps.ndim == 2 else 0
        self.nvars = nvars
        if len(exps) and nvars:
            self._base = exps.max(axis=0) + 1
        else:
            self._base = np.ones(nvars, dtype=np.int64)
        stride = np.ones(nvars, dtype=np.int64)
        for j in range(nvars - 2, -1, -1):
            stride[j] = stride[j + 1] * self._base[j + 1]
        self._stride = stride
        codes = exps @ stride if nvars else np.zeros(len(exps), dtype=np.int64)
        self._order = np.argsort(codes, kind="stable")
        self._codes = codes[self._order]

    def __len__(self):
        return len(self.exps)

    def lookup(self, vectors: np.ndarray) -> np.ndarray:
        """Column index of each row of ``vectors`` (any leading shape), -1 if absent."""
        V = np.asarray(vectors, dtype=np.int64)
        shape = V.shape[:-1]
        V = V.reshape(-1, self.nvars)
        if len(self.exps) == 0:
            return np.full(shape, -1, dtype=np.int64)
        inside = np.all((V >= 0) & (V < self._base), axis=1)
        codes = V @ self._stride if self.nvars else np.zeros(len(V), dtype=np.int64)
        pos = np.searchsorted(self._codes, codes)
        pos = np.minimum(pos, len(self._codes) - 1)
        hit = inside & (self._codes[pos] == codes)
        out = np.where(hit, self._order[pos], -1)
        return out.reshape(shape)


def product_rows(index: MonomialIndex, mults: np.ndarray, term_exps: np.ndarray):
    """Column indices of ``m * g`` for every multiplier row ``m``.

    Returns an int array ``(len(mults), len(term_exps))`` restricted to the
    multipliers whose products land entirely inside the index.
    """
    if len(mults) == 0 or len(term_exps) == 0:
        return np.zeros((0, len(term_exps)), dtype=np.int64)
    P = mults[:, None, :] + term_exps[None, :, :]
    cols = index.lookup(P)
    full = np.all(cols >= 0, axis=1)
    return cols[full]
