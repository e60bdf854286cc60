"""Seeded corpus of random Fermat-type models with random diagonal groups."""

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import gcd

from lgcy import make_model
from lgcy._monomials import count_monomials
from lgcy.model import check_quasi_smooth
from lgcy.symmetry import enumerate_components

SEED = 20261018
MAX_GROUP = 25
MAX_PIECE = 3000


def _systems(max_total=12, max_n=6):
    """Weight/degree systems with w_j | d_i, d_i >= 2 w_j and sum w = sum d."""
    out = []
    for n in range(2, max_n + 1):
        for w in combinations_with_replacement(range(1, max_total + 1), n):
            if sum(w) > max_total or gcd(*w) != 1:
                continue
            total = sum(w)
            for r in range(1, n):
                for d in combinations_with_replacement(range(2, total + 1), r):
                    if sum(d) != total:
                        continue
                    if all(di % wj == 0 and di >= 2 * wj for di in d for wj in w):
                        out.append((w, d))
    return out


def _piece_size(w, d):
    top = len(w) - len(d) - 1
    return count_monomials(w, top * max(d)) if top >= 0 else 0


def _polys(w, d, rng):
    polys = []
    for di in d:
        terms = [f"{rng.randint(1, 9)}*x{j + 1}^{di // wj}" for j, wj in enumerate(w)]
        polys.append(" + ".join(terms))
    return polys


def _random_generator(w, d, rng):
    out = []
    for wj in w:
        g = 0
        for di in d:
            g = gcd(g, di // wj)
        out.append(Fraction(rng.randrange(g), g))
    return out


@lru_cache(maxsize=None)
def corpus(size=24, seed=SEED):
    rng = random.Random(seed)
    systems = [s for s in _systems() if _piece_size(*s) <= MAX_PIECE]
    models = []
    attempts = 0
    while len(models) < size and attempts < 50 * size:
        attempts += 1
        w, d = rng.choice(systems)
        gens = [_random_generator(w, d, rng) for _ in range(rng.choice((0, 1, 1, 2)))]
        gens = [g for g in gens if any(g)]
        m = make_model(w, d, _polys(w, d, rng), gens)
        if len(enumerate_components(m)) > MAX_GROUP:
            continue
        if not all(s.verified for s in check_quasi_smooth(m).values()):
            continue
        models.append(m)
    return tuple(models)


def describe(m):
    gens = ";".join(",".join(map(str, g)) for g in m.generators) or "-"
    return f"w={m.weights} d={m.degrees} G=[{gens}]"
