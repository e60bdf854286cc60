"""The group acting on the total space, its components, and the twisted sectors.

Elements are diagonal and recorded by phases in ``[0, 1)``: ``n`` x-phases
followed by ``r`` p-phases.  The torus element ``lambda = exp(2 pi i t)`` acts
by ``x_j -> lambda^{-w_j} x_j`` and ``p_i -> lambda^{d_i} p_i``, so an element
of the component of a pure element ``g`` (all p-phases zero) at torus
parameter ``t`` has phases ``<a_j - t w_j>`` and ``<t d_i>``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from .exact import frac_part
from .model import ModelData

COMPONENT_CAP = 100_000


class GroupFiniteError(RuntimeError):
    """The generators do not close up into a finite set of components."""


@dataclass(frozen=True, order=True)
class GroupElement:
    phases: tuple[Fraction, ...]
    n: int

    @classmethod
    def pure(cls, x_phases, r: int) -> "GroupElement":
        xs = tuple(frac_part(a) for a in x_phases)
        return cls(xs + (Fraction(0),) * r, len(xs))

    @property
    def x(self) -> tuple[Fraction, ...]:
        return self.phases[:self.n]

    @property
    def p(self) -> tuple[Fraction, ...]:
        return self.phases[self.n:]

    @property
    def is_pure(self) -> bool:
        return not any(self.p)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(tuple(frac_part(a + b) for a, b in zip(self.phases, other.phases)),
                            self.n)

    def torus_shift(self, t, weights, degrees) -> "GroupElement":
        """Compose with the torus element at parameter ``t``."""
        xs = [frac_part(a - t * w) for a, w in zip(self.x, weights)]
        ps = [frac_part(b + t * d) for b, d in zip(self.p, degrees)]
        return GroupElement(tuple(xs + ps), self.n)

    def preserves(self, m: ModelData) -> bool:
        """Check that every monomial of each ``W_i`` picks up the character of ``p_i``."""
        for poly, pi in zip(m.polynomials, self.p):
            for a in poly.x_terms():
                if frac_part(sum(e * th for e, th in zip(a, self.x)) + pi) != 0:
                    return False
        return True

    def __str__(self):
        return "(" + ",".join(map(str, self.x)) + " | " + ",".join(map(str, self.p)) + ")"


def identity(m: ModelData) -> GroupElement:
    return GroupElement((Fraction(0),) * (m.n + m.r), m.n)


def canonicalize(g: GroupElement, m: ModelData) -> GroupElement:
    """Lexicographically least torus translate of ``g`` with first x-phase zero."""
    w1 = m.weights[0]
    best = None
    for k in range(w1):
        h = g.torus_shift((g.x[0] + k) / Fraction(w1), m.weights, m.degrees)
        if best is None or h.phases < best.phases:
            best = h
    return best


def _pure_representative(g: GroupElement, m: ModelData) -> GroupElement:
    # torus shifts keeping every p-phase zero are t in (1/gcd(d)) Z
    step = 0
    for d in m.degrees:
        step = gcd(step, d)
    options = [g.torus_shift(Fraction(k, step), m.weights, m.degrees) for k in range(step)]
    return min(options, key=lambda h: h.phases)


@dataclass(frozen=True)
class Component:
    index: int
    canonical: GroupElement
    pure: GroupElement

    @property
    def a(self) -> tuple[Fraction, ...]:
        return self.pure.x


@dataclass(frozen=True)
class ComponentSet:
    components: tuple[Component, ...]
    generators: tuple[GroupElement, ...]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i) -> Component:
        return self.components[i]

    @property
    def order(self) -> int:
        return len(self.components)


def enumerate_components(m: ModelData, cap: int = COMPONENT_CAP) -> ComponentSet:
    """Close the generators under multiplication modulo the torus.

    The result is sorted by canonical form, so the identity comes first and the
    numbering does not depend on the listing order of the generators.
    """
    gens = tuple(GroupElement.pure(g, m.r) for g in m.generators)
    e = identity(m)
    seen = {canonicalize(e, m): e}
    queue = deque([e])
    while queue:
        h = queue.popleft()
        for g in gens:
            prod = h * g
            key = canonicalize(prod, m)
            if key not in seen:
                if len(seen) >= cap:
                    raise GroupFiniteError(f"more than {cap} components; the group is not finite")
                seen[key] = prod
                queue.append(prod)
    comps = []
    for idx, key in enumerate(sorted(seen, key=lambda c: c.phases)):
        comps.append(Component(idx, key, _pure_representative(seen[key], m)))
    return ComponentSet(tuple(comps), gens)


@dataclass(frozen=True)
class Sector:
    """A twisted sector: component ``component`` at torus parameter ``t``."""

    component: int
    t: Fraction
    element: GroupElement
    a: tuple[Fraction, ...]
    r_total: int

    @property
    def id(self) -> str:
        return f"{self.component}@{self.t}"

    @property
    def theta(self) -> tuple[Fraction, ...]:
        return self.element.x

    @property
    def pi(self) -> tuple[Fraction, ...]:
        return self.element.p

    @property
    def phi(self) -> tuple[Fraction, ...]:
        return tuple(frac_part(-x) for x in self.pi)

    @cached_property
    def fix_x(self) -> tuple[int, ...]:
        return tuple(j for j, th in enumerate(self.theta) if th == 0)

    @cached_property
    def fix_p(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.pi) if x == 0)

    @property
    def n_gamma(self) -> int:
        return len(self.fix_x)

    @property
    def r_gamma(self) -> int:
        return len(self.fix_p)

    @property
    def d_tilde(self) -> int:
        return self.n_gamma - self.r_gamma - 1

    @property
    def a_tot(self) -> Fraction:
        return sum(self.theta, Fraction(0)) + sum(self.pi, Fraction(0))

    @property
    def a_x(self) -> Fraction:
        return sum(self.theta, Fraction(0)) - sum(self.phi, Fraction(0))

    @property
    def sum_a(self) -> Fraction:
        return sum(self.a, Fraction(0))

    def to_dict(self) -> dict:
        return {"id": self.id, "component": self.component, "t": str(self.t),
                "theta": [str(x) for x in self.theta], "pi": [str(x) for x in self.pi],
                "fix_x": [j + 1 for j in self.fix_x], "fix_p": [i + 1 for i in self.fix_p],
                "n_gamma": self.n_gamma, "r_gamma": self.r_gamma,
                "a_tot": str(self.a_tot), "a_X": str(self.a_x)}


def sector_ages(s: Sector) -> tuple[Fraction, Fraction]:
    return s.a_tot, s.a_x


def sector_parameters(m: ModelData, comp: Component) -> list[Fraction]:
    """Torus parameters in ``[0, 1)`` at which some coordinate is fixed."""
    ts = set()
    for a, w in zip(comp.a, m.weights):
        ts.update((a + k) / Fraction(w) for k in range(w))
    for d in m.degrees:
        ts.update(Fraction(k, d) for k in range(d))
    return sorted(ts)


def make_sector(m: ModelData, comp: Component, t) -> Sector:
    t = frac_part(t)
    return Sector(comp.index, t, comp.pure.torus_shift(t, m.weights, m.degrees), comp.a, m.r)


_SIDES = {
    "cy": lambda s: s.n_gamma >= 1,
    "lg": lambda s: s.r_gamma >= 1,
    "all": lambda s: s.n_gamma + s.r_gamma >= 1,
}


def enumerate_sectors(m: ModelData, comps: ComponentSet, side: str = "all") -> list[Sector]:
    """All sectors with a fixed coordinate, ordered by (component, t)."""
    keep = _SIDES[side.lower()]
    out = []
    for comp in comps:
        for t in sector_parameters(m, comp):
            s = make_sector(m, comp, t)
            if keep(s):
                out.append(s)
    return out


@dataclass(frozen=True)
class SectorModel:
    """The restriction of the model to the fixed locus of a sector."""

    sector: Sector
    fix_x: tuple[int, ...]
    kept: tuple[int, ...]
    weights: tuple[int, ...]
    degrees: tuple[int, ...]
    polynomials: tuple[dict, ...]
    generators: tuple[tuple[Fraction, ...], ...]

    @property
    def n_gamma(self) -> int:
        return len(self.fix_x)

    @property
    def r_gamma(self) -> int:
        return len(self.kept)

    @property
    def d_tilde(self) -> int:
        return self.n_gamma - self.r_gamma - 1

    @property
    def key(self) -> tuple:
        return self.fix_x, self.kept


def restrict_to_sector(m: ModelData, s: Sector, comps: ComponentSet | None = None) -> SectorModel:
    """Keep fixed coordinates and trivial-character equations, set the rest to zero."""
    fix = s.fix_x
    kept = s.fix_p
    polys = []
    for i in kept:
        terms = {}
        for a, c in m.polynomials[i].x_terms().items():
            if all(a[j] == 0 for j in range(m.n) if j not in fix):
                terms[tuple(a[j] for j in fix)] = c
        polys.append(terms)
    gens = comps.generators if comps is not None else tuple(
        GroupElement.pure(g, m.r) for g in m.generators)
    restricted = tuple(tuple(g.x[j] for j in fix) for g in gens)
    return SectorModel(s, fix, kept, tuple(m.weights[j] for j in fix),
                       tuple(m.degrees[i] for i in kept), tuple(polys), restricted)
