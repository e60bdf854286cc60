"""Exact arithmetic substrate: phases in Q/Z, integer lattices, ranks over F_p.

Rationals are :class:`fractions.Fraction` throughout; phases are fractions in
``[0, 1)``.  Ranks of the graded linear systems are computed modulo two large
primes, with an exact rational path available for certification.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor

import numpy as np

DEFAULT_PRIME = 1_000_003
VERIFY_PRIME = 999_983

# p**2 must fit in int64 for the vectorised elimination
MAX_PRIME = 2**31 - 1

Rational = Fraction
Phase = Fraction


class PrimeCollisionError(ArithmeticError):
    """Two working primes returned different ranks for the same matrix."""


def frac_part(x) -> Fraction:
    """Return ``x - floor(x)`` as a Fraction in ``[0, 1)``."""
    x = Fraction(x)
    return x - floor(x)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for ``n < 3.3e24``."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def previous_prime(n: int) -> int:
    """Largest prime strictly below ``n``."""
    n -= 1
    while n > 2 and not is_prime(n):
        n -= 1
    return n


def to_residue(c: Fraction, p: int) -> int:
    """Image of a rational in F_p; the denominator must be a unit."""
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ZeroDivisionError(f"denominator {c.denominator} vanishes mod {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


# ---------------------------------------------------------------- integers

def integer_rank(M) -> int:
    """Rank over Q of an integer matrix (fraction-free Bareiss elimination)."""
    A = [[int(v) for v in row] for row in M]
    if not A or not A[0]:
        return 0
    rows, cols = len(A), len(A[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][c]
        for i in range(rank + 1, rows):
            a = A[i][c]
            A[i] = [(pv * A[i][k] - a * A[rank][k]) // prev for k in range(cols)]
        prev = pv
        rank += 1
        if rank == rows:
            break
    return rank


def smith_normal_form(M):
    """Smith normal form with the column transform.

    Returns ``(diag, C)`` where ``diag`` lists the nonzero invariant factors
    ``d_1 | d_2 | ...`` and ``C`` is a unimodular ``cols x cols`` matrix (list
    of lists) such that ``R @ M @ C`` is diagonal for some unimodular ``R``.
    The row space of ``M`` is then ``{z @ inv(C) : z_i in d_i Z, z_i = 0 for
    i >= len(diag)}``, so ``v @ C`` reduced coordinatewise gives the class of
    ``v`` modulo the row lattice.
    """
    A = [[int(v) for v in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    C = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def col_op(dst, src, q):
        # column dst -= q * column src
        for row in A:
            row[dst] -= q * row[src]
        for row in C:
            row[dst] -= q * row[src]

    def col_swap(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in C:
            row[a], row[b] = row[b], row[a]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows)
              for j in range(t, cols) if A[i][j] != 0]
        if not nz:
            break
        _, i0, j0 = min(nz)
        A[t], A[i0] = A[i0], A[t]
        col_swap(t, j0)
        while True:
            done = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        done = False
                        col_swap(t, j)
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
                        A[t], A[i] = A[i], A[t]
            if not done:
                continue
            # divisibility d_t | remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
        t += 1
    diag = [A[i][i] for i in range(t)]
    return diag, C


class LatticeClasses:
    """Classes of integer vectors modulo the row lattice of a matrix.

    ``key`` maps exponent vectors (rows of an int array) to hashable class
    labels; two vectors share a label iff their difference lies in the lattice.
    """

    def __init__(self, generators, dim: int):
        gens = [list(g) for g in generators if any(g)]
        if gens:
            diag, C = smith_normal_form(gens)
        else:
            diag, C = [], [[int(i == j) for j in range(dim)] for i in range(dim)]
        self.dim = dim
        self.diag = diag
        self._C = np.array(C, dtype=object).reshape(dim, dim)
        # moduli: d_i for torsion-free part of the lattice, 0 for free coords
        self._mod = [d for d in diag] + [0] * (dim - len(diag))
        self._keep = [i for i, d in enumerate(self._mod) if d != 1]

    def key_array(self, vectors) -> np.ndarray:
        """Class labels as rows of an int array (one row per input vector)."""
        V = np.asarray(vectors).reshape(-1, self.dim)
        C = self._C[:, self._keep]
        bound = int(np.abs(V).max(initial=0)) * max((abs(int(c)) for c in C.ravel()), default=0)
        if bound * max(self.dim, 1) < 2**62:
            Z = V.astype(np.int64) @ C.astype(np.int64)
        else:
            Z = V.astype(object).dot(C)
        mods = np.array([self._mod[i] for i in self._keep], dtype=object)
        for col, d in enumerate(mods):
            if d:
                Z[:, col] %= d
        return Z.astype(np.int64) if Z.dtype == object and Z.size else Z

    def keys(self, vectors) -> list[tuple]:
        return [tuple(int(v) for v in row) for row in self.key_array(vectors)]

    def key(self, vector) -> tuple:
        return self.keys([vector])[0]


# ------------------------------------------------------------ prime fields

def _echelon_mod_p(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Row echelon form over F_p (in place); returns the pivot rows and columns."""
    m, n = A.shape
    rank = 0
    pivots = []
    for c in range(n):
        if rank == m:
            break
        nz = np.flatnonzero(A[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv], c:] = A[[piv, rank], c:]
        inv = pow(int(A[rank, c]), -1, p)
        A[rank, c:] = A[rank, c:] * inv % p
        below = rank + 1 + np.flatnonzero(A[rank + 1:, c])
        if below.size:
            f = A[below, c].reshape(-1, 1)
            A[np.ix_(below, np.arange(c, n))] = (A[below, c:] - f * A[rank, c:]) % p
        pivots.append(c)
        rank += 1
    return A[:rank], pivots


def _dense_rank_mod_p(A: np.ndarray, p: int) -> int:
    return len(_echelon_mod_p(A % p, p)[1])


def fp_rank(M, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p of a dense integer matrix."""
    if not 2 < p <= MAX_PRIME:
        raise ValueError(f"prime {p} outside the supported range (2, {MAX_PRIME}]")
    A = np.array(M, dtype=object) % p
    A = A.astype(np.int64)
    if A.ndim != 2 or A.size == 0:
        return 0
    return _peeled_rank(A, p)


def _peeled_rank(A: np.ndarray, p: int) -> int:
    """Strip singleton rows (each fixes a pivot column), then eliminate."""
    rank = 0
    A = A[np.any(A != 0, axis=1)]
    while A.size:
        nnz = np.count_nonzero(A, axis=1)
        single = nnz == 1
        if not single.any():
            break
        cols = np.unique(np.argmax(A[single] != 0, axis=1))
        rank += cols.size
        keep = np.ones(A.shape[1], dtype=bool)
        keep[cols] = False
        A = A[:, keep]
        A = A[np.any(A != 0, axis=1)]
    if A.size == 0:
        return rank
    return rank + _dense_rank_mod_p(A, p)


def _densify(rows, ncols: int) -> np.ndarray:
    A = np.zeros((len(rows), ncols), dtype=np.int64)
    for r, (cols, vals) in enumerate(rows):
        A[r, cols] = vals
    return A


def fp_rowspace_contains(rows, ncols: int, target, p: int = DEFAULT_PRIME) -> bool:
    """Whether the sparse row ``target`` lies in the F_p span of ``rows``."""
    t = _densify([target], ncols)[0] % p
    if not t.any():
        return True
    if not rows:
        return False
    E, pivots = _echelon_mod_p(_densify(rows, ncols) % p, p)
    for row, c in zip(E, pivots):
        if t[c]:
            t = (t - t[c] * row) % p
    return not t.any()


def sparse_fp_rank(rows, ncols: int, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p of a matrix given as ``[(col_indices, int_values), ...]``.

    Values must already be reduced modulo ``p``.
    """
    if not rows or ncols == 0:
        return 0
    return _peeled_rank(_densify(rows, ncols), p)


def rational_rank(rows, ncols: int) -> int:
    """Exact rank over Q of ``[(col_indices, Fraction_values), ...]``."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for cols, vals in rows:
        vec = {int(c): Fraction(v) for c, v in zip(cols, vals) if v}
        while vec:
            lead = min(vec)
            if lead not in pivots:
                inv = 1 / vec[lead]
                pivots[lead] = {c: v * inv for c, v in vec.items()}
                break
            prow = pivots[lead]
            f = vec[lead]
            for c, v in prow.items():
                nv = vec.get(c, 0) - f * v
                if nv:
                    vec[c] = nv
                else:
                    vec.pop(c, None)
    return len(pivots)


class RankEngine:
    """Ranks checked with a working and a verification prime.

    A disagreement raises :class:`PrimeCollisionError`; callers may retry with
    :meth:`fresh`.  ``exact=True`` additionally recomputes over Q and uses the
    rational rank.
    """

    def __init__(self, prime: int = DEFAULT_PRIME, verify_prime: int = VERIFY_PRIME,
                 exact: bool = False):
        for q in (prime, verify_prime):
            if not is_prime(q) or q > MAX_PRIME:
                raise ValueError(f"{q} is not a usable prime")
        if prime == verify_prime:
            raise ValueError("working and verification primes must differ")
        self.prime = prime
        self.verify_prime = verify_prime
        self.exact = exact
        self.checks = 0
        self.collisions = 0
        self._cache: dict = {}

    def fresh(self) -> "RankEngine":
        low = min(self.prime, self.verify_prime)
        a = previous_prime(low)
        return RankEngine(a, previous_prime(a), self.exact)

    def _residues(self, vals: tuple, p: int) -> np.ndarray:
        key = (vals, p)
        hit = self._cache.get(key)
        if hit is None:
            hit = np.array([to_residue(v, p) for v in vals], dtype=np.int64)
            self._cache[key] = hit
        return hit

    def rank(self, rows, ncols: int) -> int:
        """``rows`` as ``[(col_indices, values), ...]``, values a tuple of rationals.

        Rows built from the same polynomial should share one ``values`` tuple;
        its residues are computed once per prime.
        """
        ranks = []
        for p in (self.prime, self.verify_prime):
            reduced = [(c, self._residues(tuple(vals), p)) for c, vals in rows]
            ranks.append(sparse_fp_rank(reduced, ncols, p))
        self.checks += 1
        if ranks[0] != ranks[1]:
            self.collisions += 1
            raise PrimeCollisionError(
                f"rank {ranks[0]} mod {self.prime} but {ranks[1]} mod {self.verify_prime}")
        if self.exact:
            return rational_rank(rows, ncols)
        return ranks[0]

    def contains(self, rows, ncols: int, target) -> bool:
        """Row-space membership of ``target``, agreed by both primes."""
        verdicts = []
        for p in (self.prime, self.verify_prime):
            reduced = [(c, self._residues(tuple(vals), p)) for c, vals in rows]
            tc, tv = target
            verdicts.append(fp_rowspace_contains(reduced, ncols, (tc, self._residues(tuple(tv), p)), p))
        self.checks += 1
        if verdicts[0] != verdicts[1]:
            self.collisions += 1
            raise PrimeCollisionError(
                f"membership differs between primes {self.prime} and {self.verify_prime}")
        if self.exact:
            return rational_rank(rows + [target], ncols) == rational_rank(rows, ncols)
        return verdicts[0]
