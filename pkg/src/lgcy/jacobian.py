"""Equivariant graded dimensions of the Jacobian ring of ``W~ = sum_i p_i W_i``.

For a sector model with fixed variables ``x_F`` (weights ``w_F``) and kept
fibre variables ``p_K`` (degrees ``d_K``), a basis element ``x^a p^b dx dp`` is
torus invariant iff ``sum (a_j+1) w_j == sum (b_i+1) d_i``, and invariant under
a pure generator ``g`` iff ``sum (a_j+1) g_j`` is an integer.  The piece of
p-degree ``k`` of the invariant quotient has dimension

    #invariant monomials - rank(ideal piece),

and the ideal piece is spanned by products of monomials with the partials of
``W~``.  All partials are eigenvectors of the diagonal group, so the systems
split along the classes of exponents modulo the lattice of differences of the
monomials of ``W~``; each class is ranked separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import _monomials as mono
from .exact import LatticeClasses, PrimeCollisionError, RankEngine, frac_part
from .model import Monomial
from .symmetry import SectorModel

RETRIES = 3


@dataclass(frozen=True)
class PrimitiveBlock:
    """``dims[k]`` is the invariant part of the Jacobian ring in p-degree ``k``."""

    key: tuple
    d_tilde: int
    dims: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def empty(self) -> bool:
        return self.d_tilde < 0

    def bidegrees(self):
        """Untwisted bidegrees ``(D~ - k, k)`` with their dimensions."""
        return [((self.d_tilde - k, k), dim) for k, dim in enumerate(self.dims)]


def _generator_matrix(sm: SectorModel):
    dens = [x.denominator for g in sm.generators for x in g]
    N = lcm(*dens) if dens else 1
    G = np.array([[int(x * N) for x in g] for g in sm.generators],
                 dtype=np.int64).reshape(len(sm.generators), sm.n_gamma)
    return G.T, N


def _invariant_x_part(sm: SectorModel, e: int, G, N) -> np.ndarray:
    xs = mono.monomials_of_degree(sm.weights, e)
    if len(xs) == 0 or G.shape[1] == 0:
        return xs
    ok = np.all(((xs + 1) @ G) % N == 0, axis=1)
    return xs[ok]


def _fibre_parts(sm: SectorModel, k: int) -> np.ndarray:
    return mono.compositions(k, sm.r_gamma)


def _x_degree(sm: SectorModel, beta) -> int:
    return int(sum((b + 1) * d for b, d in zip(beta, sm.degrees)) - sum(sm.weights))


def invariant_exponents(sm: SectorModel, k: int) -> np.ndarray:
    """Exponent vectors ``(a | b)`` of the invariant monomials in p-degree ``k``."""
    width = sm.n_gamma + sm.r_gamma
    if k < 0 or (sm.r_gamma == 0 and k > 0):
        return np.zeros((0, width), dtype=np.int64)
    G, N = _generator_matrix(sm)
    blocks = []
    for beta in _fibre_parts(sm, k):
        xs = _invariant_x_part(sm, _x_degree(sm, beta), G, N)
        if len(xs):
            blocks.append(np.hstack([xs, np.tile(beta, (len(xs), 1))]))
    if not blocks:
        return np.zeros((0, width), dtype=np.int64)
    out = np.vstack(blocks)
    return out[np.lexsort(out.T[::-1])]


def enumerate_invariant_monomials(sm: SectorModel, k: int) -> list[Monomial]:
    n = sm.n_gamma
    return [Monomial(tuple(int(v) for v in row[:n]), tuple(int(v) for v in row[n:]))
            for row in invariant_exponents(sm, k)]


def _potential_terms(sm: SectorModel) -> dict:
    """Terms of ``W~`` in combined ``(x_F | p_K)`` exponents."""
    out = {}
    for ii, poly in enumerate(sm.polynomials):
        for a, c in poly.items():
            b = [0] * sm.r_gamma
            b[ii] = 1
            out[tuple(a) + tuple(b)] = c
    return out


def _derivatives(sm: SectorModel):
    """Partials of ``W~`` as ``(kind, index, {exponent: coef})``."""
    terms = _potential_terms(sm)
    n = sm.n_gamma
    out = []
    for u in range(n):
        d = {}
        for e, c in terms.items():
            if e[u]:
                f = list(e)
                f[u] -= 1
                d[tuple(f)] = c * e[u]
        if d:
            out.append(("x", u, d))
    for ii in range(sm.r_gamma):
        d = {}
        for e, c in terms.items():
            if e[n + ii]:
                f = list(e)
                f[n + ii] -= 1
                d[tuple(f)] = c
        if d:
            out.append(("p", ii, d))
    return out


def _multipliers(sm: SectorModel, kind: str, idx: int, k: int) -> np.ndarray:
    width = sm.n_gamma + sm.r_gamma
    pk = k - 1 if kind == "x" else k
    if pk < 0:
        return np.zeros((0, width), dtype=np.int64)
    blocks = []
    for beta in _fibre_parts(sm, pk):
        e = _x_degree(sm, beta)
        e += sm.weights[idx] if kind == "x" else -sm.degrees[idx]
        xs = mono.monomials_of_degree(sm.weights, e)
        if len(xs):
            blocks.append(np.hstack([xs, np.tile(beta, (len(xs), 1))]))
    if not blocks:
        return np.zeros((0, width), dtype=np.int64)
    return np.vstack(blocks)


def _lattice(sm: SectorModel) -> LatticeClasses:
    exps = sorted(_potential_terms(sm))
    width = sm.n_gamma + sm.r_gamma
    diffs = [tuple(a - b for a, b in zip(e, exps[0])) for e in exps[1:]]
    return LatticeClasses(diffs, width)


def _ideal_blocks(sm: SectorModel, k: int, cols: np.ndarray, classes: LatticeClasses):
    """Ideal rows grouped by lattice class: ``{class: (column ids, rows)}``."""
    index = mono.MonomialIndex(cols)
    if len(cols) == 0:
        return {}
    _, col_class = np.unique(classes.key_array(cols), axis=0, return_inverse=True)
    col_class = np.asarray(col_class).ravel()
    groups: dict[int, list] = {}
    for kind, idx, d in _derivatives(sm):
        exps = np.array(list(d), dtype=np.int64)
        vals = tuple(d.values())
        mults = _multipliers(sm, kind, idx, k)
        for c in mono.product_rows(index, mults, exps):
            groups.setdefault(int(col_class[c[0]]), []).append((c, vals))
    blocks = {}
    for cls in range(int(col_class.max()) + 1 if len(col_class) else 0):
        members = np.flatnonzero(col_class == cls)
        blocks[cls] = (members, groups.get(cls, []))
    return blocks


def _block_rank(members: np.ndarray, rows, engine: RankEngine) -> int:
    if not rows:
        return 0
    local = np.full(int(members.max()) + 1, -1, dtype=np.int64)
    local[members] = np.arange(len(members))
    return engine.rank([(local[c], vals) for c, vals in rows], len(members))


def ideal_piece_rank(sm: SectorModel, k: int, engine: RankEngine | None = None) -> int:
    """Rank of the invariant part of the Jacobian ideal in p-degree ``k``."""
    engine = engine or RankEngine()
    cols = invariant_exponents(sm, k)
    if len(cols) == 0 or not sm.polynomials:
        return 0
    blocks = _ideal_blocks(sm, k, cols, _lattice(sm))
    return sum(_block_rank(members, rows, engine) for members, rows in blocks.values())


def _dims(sm: SectorModel, engine: RankEngine) -> tuple[int, ...]:
    dims = []
    for k in range(sm.d_tilde + 1):
        total = len(invariant_exponents(sm, k))
        dims.append(total - ideal_piece_rank(sm, k, engine) if total else 0)
    return tuple(dims)


def primitive_hodge_dims(sm: SectorModel, engine: RankEngine | None = None,
                         cache: dict | None = None) -> PrimitiveBlock:
    """Invariant Jacobian-ring dimensions for ``k = 0..D~`` (empty if ``D~ < 0``).

    ``cache`` maps ``(fix_x, kept)`` to blocks; the result does not depend on
    the component or the torus parameter beyond those index sets.
    """
    if cache is not None and sm.key in cache:
        return cache[sm.key]
    engine = engine or RankEngine()
    for attempt in range(RETRIES):
        try:
            dims = _dims(sm, engine)
            break
        except PrimeCollisionError:
            if attempt == RETRIES - 1:
                raise
            engine = engine.fresh()
    block = PrimitiveBlock(sm.key, sm.d_tilde, dims)
    if cache is not None:
        cache[sm.key] = block
    return block


# ------------------------------------------------------------------ oracles

def milnor_hilbert_series(weights, degree: int) -> list[int]:
    """Coefficients of ``prod_j (1 - t^(d - w_j)) / (1 - t^(w_j))``."""
    num = [1]
    for w in weights:
        if degree <= w:
            raise ValueError(f"weight {w} is not below the degree {degree}")
        num = _poly_mul(num, [1] + [0] * (degree - w - 1) + [-1])
    for w in weights:
        num = _divide_geometric(num, w)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return num


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divide_geometric(a, w):
    # exact division by (1 - t^w)
    q = list(a)
    for i in range(len(q) - w):
        q[i + w] += q[i]
    if any(q[len(q) - w:]):
        raise ValueError("quotient is not a polynomial")
    return q[:len(q) - w]


def equivariant_milnor_series(weights, degree: int, characters) -> dict:
    """Graded character of the Milnor algebra of an invariant isolated singularity.

    ``characters[j]`` is the phase vector of ``x_j`` under the group generators.
    Returns ``{(t_degree, phases): multiplicity}`` from the product
    ``prod_j (1 - t^(d-w_j) u^(-c_j)) / (1 - t^(w_j) u^(c_j))``.
    """
    ngen = len(characters[0]) if characters else 0
    top = sum(degree - 2 * w for w in weights)
    series = {(0, (Fraction(0),) * ngen): 1}
    for w, c in zip(weights, characters):
        factor = {}
        # truncated geometric series times the numerator, degree <= top
        for e in range(0, top // w + 1 if top >= 0 else 0):
            ch = tuple(frac_part(e * x) for x in c)
            factor[(e * w, ch)] = factor.get((e * w, ch), 0) + 1
            sh = e * w + degree - w
            if sh <= top:
                ch2 = tuple(frac_part((e - 1) * x) for x in c)
                factor[(sh, ch2)] = factor.get((sh, ch2), 0) - 1
        nxt: dict = {}
        for (d1, c1), v1 in series.items():
            for (d2, c2), v2 in factor.items():
                if d1 + d2 > top:
                    continue
                key = (d1 + d2, tuple(frac_part(a + b) for a, b in zip(c1, c2)))
                nxt[key] = nxt.get(key, 0) + v1 * v2
        series = {k: v for k, v in nxt.items() if v}
    if any(v < 0 for v in series.values()):
        raise ValueError("not the series of an isolated singularity")
    return series


def milnor_oracle_dims(sm: SectorModel) -> tuple[int, ...]:
    """Block dimensions of a hypersurface sector from the Milnor series alone."""
    if sm.r_gamma != 1:
        raise ValueError("oracle applies to sectors with one kept equation")
    d = sm.degrees[0]
    chars = [tuple(g[j] for g in sm.generators) for j in range(sm.n_gamma)]
    series = equivariant_milnor_series(sm.weights, d, chars)
    # invariance of x^a dx: sum (a_j + 1) g_j integral
    target = tuple(frac_part(-sum(g, Fraction(0))) for g in sm.generators)
    out = []
    for k in range(sm.d_tilde + 1):
        out.append(series.get(((k + 1) * d - sum(sm.weights), target), 0))
    return tuple(out)
