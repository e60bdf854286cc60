"""Both sides of the correspondence as bigraded tables, and their comparison.

Per sector ``gamma`` with ``n_g`` fixed base coordinates, ``r_g`` kept
equations, ``D~ = n_g - r_g - 1`` and primitive block ``dims``:

* CY side (``n_g >= 1``, ``r_g < n_g``): ambient classes ``k = 0..D~`` at
  ``(k + a_X, k + a_X)`` and primitive classes ``dims[k]`` at
  ``(D~ - k + a_X, k + a_X)``.
* LG side (``r_g >= 1``): the same primitive classes when ``r_g < n_g``
  (``a_X = a_tot + r_g - r``); ambient classes ``m = 0..r_g - n_g - 1`` at
  ``m + n_g - r + a_tot`` when ``r_g > n_g``.
* Bundles: ``k = 0..n_g - 1`` (CY) or ``k = 0..r_g - 1`` (LG) at ``k + a_tot``.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import dots as dd
from .exact import RankEngine
from .jacobian import PrimitiveBlock, primitive_hodge_dims
from .model import ModelData
from .symmetry import (ComponentSet, Sector, SectorModel, enumerate_components,
                       enumerate_sectors, make_sector, restrict_to_sector)

AMBIENT = "ambient"
PRIMITIVE = "primitive"


@dataclass(frozen=True)
class CRClass:
    sector: str
    kind: str
    k: int
    p: Fraction
    q: Fraction
    multiplicity: int = 1
    narrowness: str | None = None

    def to_dict(self) -> dict:
        out = {"sector": self.sector, "kind": self.kind, "k": self.k,
               "p": str(self.p), "q": str(self.q), "multiplicity": self.multiplicity}
        if self.narrowness:
            out["narrowness"] = self.narrowness
        return out


@dataclass
class BigradedTable:
    entries: Counter = field(default_factory=Counter)
    provenance: list[CRClass] = field(default_factory=list)

    def add(self, c: CRClass):
        if c.multiplicity:
            self.entries[(Fraction(c.p), Fraction(c.q))] += c.multiplicity
            self.provenance.append(c)

    def __getitem__(self, pq) -> int:
        return self.entries.get((Fraction(pq[0]), Fraction(pq[1])), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedTable):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def as_dict(self) -> dict:
        return {pq: v for pq, v in sorted(self.entries.items()) if v}

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def shifted(self, dp, dq) -> "BigradedTable":
        out = BigradedTable()
        for c in self.provenance:
            out.add(CRClass(c.sector, c.kind, c.k, c.p + dp, c.q + dq, c.multiplicity,
                            c.narrowness))
        return out

    def differences(self, other: "BigradedTable") -> list[dict]:
        keys = sorted(set(self.entries) | set(other.entries))
        return [{"p": str(p), "q": str(q), "left": self[(p, q)], "right": other[(p, q)]}
                for p, q in keys if self[(p, q)] != other[(p, q)]]

    def to_list(self) -> list[dict]:
        return [{"p": str(p), "q": str(q), "h": v} for (p, q), v in self.as_dict().items()]


class Analysis:
    """Shared state for one model: components, sectors and cached primitive blocks."""

    def __init__(self, m: ModelData, engine: RankEngine | None = None, jobs: int = 1,
                 exact: bool = False):
        self.model = m
        self.engine = engine or m.engine(exact)
        self.jobs = max(1, int(jobs or 1))
        self._blocks: dict = {}

    @cached_property
    def components(self) -> ComponentSet:
        return enumerate_components(self.model)

    def sectors(self, side: str = "all") -> list[Sector]:
        return enumerate_sectors(self.model, self.components, side)

    def restrict(self, s: Sector) -> SectorModel:
        return restrict_to_sector(self.model, s, self.components)

    def block(self, s: Sector) -> PrimitiveBlock:
        sm = self.restrict(s)
        if sm.key not in self._blocks:
            self._blocks[sm.key] = primitive_hodge_dims(sm, self.engine)
        return self._blocks[sm.key]

    def precompute(self):
        """Compute every distinct primitive block, in parallel when ``jobs > 1``."""
        todo = {}
        for s in self.sectors("all"):
            sm = self.restrict(s)
            if 0 <= sm.r_gamma < sm.n_gamma and sm.key not in self._blocks:
                todo.setdefault(sm.key, sm)
        if self.jobs > 1 and len(todo) > 1:
            e = self.engine
            with ProcessPoolExecutor(self.jobs) as pool:
                futs = {key: pool.submit(_block_task, sm, e.prime, e.verify_prime, e.exact)
                        for key, sm in sorted(todo.items())}
                for key, fut in futs.items():
                    self._blocks[key], checks = fut.result()
                    self.engine.checks += checks
        else:
            for key, sm in sorted(todo.items()):
                self._blocks[key] = primitive_hodge_dims(sm, self.engine)
        return self

    @cached_property
    def diagrams(self) -> list[dd.DotDiagram]:
        return [dd.diagram(self.model, c) for c in self.components]


def _block_task(sm, prime, verify_prime, exact):
    engine = RankEngine(prime, verify_prime, exact)
    return primitive_hodge_dims(sm, engine), engine.checks


def _analysis(x) -> Analysis:
    return x if isinstance(x, Analysis) else Analysis(x)


def _primitive_classes(s: Sector, block: PrimitiveBlock, shift: Fraction):
    for k, dim in enumerate(block.dims):
        yield CRClass(s.id, PRIMITIVE, k, block.d_tilde - k + shift, k + shift, dim)


def assemble_cy(x) -> BigradedTable:
    a = _analysis(x)
    table = BigradedTable()
    for s in a.sectors("cy"):
        if s.r_gamma >= s.n_gamma:
            continue
        for k in range(s.d_tilde + 1):
            table.add(CRClass(s.id, AMBIENT, k, k + s.a_x, k + s.a_x))
        for c in _primitive_classes(s, a.block(s), s.a_x):
            table.add(c)
    return table


def assemble_lg(x) -> BigradedTable:
    a = _analysis(x)
    r = a.model.r
    table = BigradedTable()
    for s in a.sectors("lg"):
        if s.r_gamma < s.n_gamma:
            for c in _primitive_classes(s, a.block(s), s.a_tot + s.r_gamma - r):
                table.add(c)
        elif s.r_gamma > s.n_gamma:
            for mm in range(s.r_gamma - s.n_gamma):
                deg = mm + s.n_gamma - r + s.a_tot
                table.add(CRClass(s.id, AMBIENT, mm, deg, deg))
    return table


def assemble_bundle_cr(x, side: str) -> BigradedTable:
    a = _analysis(x)
    side = side.lower()
    table = BigradedTable()
    for s in a.sectors(side):
        count = s.n_gamma if side == "cy" else s.r_gamma
        for k in range(count):
            table.add(CRClass(s.id, AMBIENT, k, k + s.a_tot, k + s.a_tot))
    return table


@dataclass(frozen=True)
class MilnorFiberDims:
    """Cohomology of the Milnor fibre of a sector, split into ambient and primitive parts."""

    sector: str
    ambient: dict
    primitive: dict

    @property
    def dims(self) -> dict:
        out = Counter(self.ambient)
        out.update(self.primitive)
        return {k: v for k, v in sorted(out.items()) if v}


def milnor_fiber_dims(x, s: Sector) -> MilnorFiberDims:
    a = _analysis(x)
    n, r = s.n_gamma, s.r_gamma
    if r < n:
        ambient = {2 * j: 1 for j in range(r)}
        total = a.block(s).total
        primitive = {n + r - 2: total} if total else {}
    else:
        # fibre retracts onto the projectivised base directions (empty if n = 0)
        ambient = {2 * j: 1 for j in range(n)}
        primitive = {}
    return MilnorFiberDims(s.id, ambient, primitive)


def _relative_classes(a: Analysis, s: Sector):
    """Classes of ``H^*(E_g, F_g)`` from the exact sequence of the pair.

    ``E_g`` retracts to the weighted projective space of the fixed base
    directions, with one class in each even degree ``< 2 n_g``; restriction to
    the fibre is an isomorphism onto its ambient part.
    """
    fib = milnor_fiber_dims(a, s)
    out = []
    for j in range(s.n_gamma):
        # kernel of restriction: classes of E not seen on F
        if 2 * j not in fib.ambient:
            out.append(CRClass(s.id, AMBIENT, j, j + s.a_tot, j + s.a_tot))
    if fib.primitive:
        block = a.block(s)
        # cokernel: primitive classes of F land one degree up
        for c in _primitive_classes(s, block, s.r_gamma + s.a_tot):
            out.append(c)
    return out


@dataclass
class ThomCheck:
    ok: bool
    relative: BigradedTable
    shifted_cy: BigradedTable
    mismatches: list[dict]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "mismatches": self.mismatches}


def thom_shift_check(x) -> ThomCheck:
    """Relative table of the pair (total space, Milnor fibre) versus the CY table moved by (r, r)."""
    a = _analysis(x)
    r = a.model.r
    rel = BigradedTable()
    for s in a.sectors("all"):
        for c in _relative_classes(a, s):
            rel.add(c)
    cy = assemble_cy(a).shifted(r, r)
    bad = rel.differences(cy)
    if bad:
        by_sector = Counter(c.sector for c in rel.provenance)
        for b in bad:
            b["sectors"] = sorted(sid for sid in by_sector
                                  if any(str(c.p) == b["p"] and str(c.q) == b["q"]
                                         for c in rel.provenance if c.sector == sid))
    return ThomCheck(not bad, rel, cy, bad)


def classify_states(table: BigradedTable) -> BigradedTable:
    """Ambient classes are narrow, primitive classes broad."""
    out = BigradedTable()
    for c in table.provenance:
        kind = "narrow" if c.kind == AMBIENT else "broad"
        out.add(CRClass(c.sector, c.kind, c.k, c.p, c.q, c.multiplicity, kind))
    return out


def narrow_broad_counts(table: BigradedTable) -> dict:
    out = Counter()
    for c in classify_states(table).provenance:
        out[c.narrowness] += c.multiplicity
    return {"narrow": out["narrow"], "broad": out["broad"]}


@dataclass
class VerificationReport:
    verdicts: dict
    cy: BigradedTable
    lg: BigradedTable
    bundle_cy: BigradedTable
    bundle_lg: BigradedTable
    certificate: dd.PairingCertificate
    counterexamples: list[dict]
    thom: ThomCheck | None = None
    rank_checks: int = 0

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "verdicts": dict(self.verdicts),
                "cy": self.cy.to_list(), "lg": self.lg.to_list(),
                "bundle_cy": self.bundle_cy.to_list(), "bundle_lg": self.bundle_lg.to_list(),
                "total": self.cy.total,
                "counterexamples": self.counterexamples,
                "rank_checks": self.rank_checks,
                "certificate": self.certificate.to_list()}


def _shared_blocks(a: Analysis, cex: list) -> bool:
    r = a.model.r
    ok = True
    for s in a.sectors("lg"):
        if s.a_x != s.a_tot + s.r_gamma - r:
            ok = False
            cex.append({"check": "grading", "sector": s.id, "a_tot": str(s.a_tot),
                        "a_X": str(s.a_x)})
        if s.r_gamma < s.n_gamma:
            block = a.block(s)
            lg = list(_primitive_classes(s, block, s.a_tot + s.r_gamma - r))
            cy = list(_primitive_classes(s, block, s.a_x))
            if lg != cy:
                ok = False
                cex.append({"check": "primitive", "sector": s.id})
    return ok


def ray_consistency(a: Analysis, cex: list | None = None) -> bool:
    """Per ray, dot labels reproduce the bundle-class degrees of that sector."""
    ok = True
    comps = a.components
    for diag in a.diagrams:
        comp = comps[diag.component.index]
        shift = sum(comp.a, Fraction(0))
        for t, (blacks, whites) in diag.ray_multisets().items():
            s = make_sector(a.model, comp, t)
            want_b = sorted(k + s.a_tot - shift for k in range(s.n_gamma))
            want_w = sorted(k + s.a_tot - shift for k in range(s.r_gamma))
            if blacks != want_b or whites != want_w:
                ok = False
                if cex is not None:
                    cex.append({"check": "ray", "sector": s.id,
                                "black": blacks, "white": whites,
                                "expected_black": [str(v) for v in want_b],
                                "expected_white": [str(v) for v in want_w]})
    return ok


def _certificate(a: Analysis, bundle_cy, bundle_lg, cex: list):
    cert = dd.PairingCertificate()
    for diag in a.diagrams:
        cert.pairs.extend(dd.pair_dots(diag).pairs)
    ok = all(dd.dot_degree(diag, p.f) == p.degree for diag in a.diagrams
             for p in cert.pairs if p.black.component == diag.component.index)
    black = Counter(p.degree for p in cert.pairs)
    cy = Counter()
    for c in bundle_cy.provenance:
        cy[c.p] += c.multiplicity
    lg = Counter()
    for c in bundle_lg.provenance:
        lg[c.p] += c.multiplicity
    if black != cy or black != lg:
        ok = False
        cex.append({"check": "certificate",
                    "pairs": {str(k): v for k, v in sorted(black.items())},
                    "cy": {str(k): v for k, v in sorted(cy.items())},
                    "lg": {str(k): v for k, v in sorted(lg.items())}})
    if not ray_consistency(a, cex):
        ok = False
    return ok, cert


def verify_correspondence(x) -> VerificationReport:
    a = _analysis(x)
    a.precompute()
    cex: list = []
    shared = _shared_blocks(a, cex)
    cy, lg = assemble_cy(a), assemble_lg(a)
    bcy, blg = assemble_bundle_cr(a, "cy"), assemble_bundle_cr(a, "lg")
    paired, cert = _certificate(a, bcy, blg, cex)
    tables = cy == lg
    if not tables:
        cex.append({"check": "tables", "differences": cy.differences(lg)})
    bundles = bcy == blg
    if not bundles:
        cex.append({"check": "bundles", "differences": bcy.differences(blg)})
    thom = thom_shift_check(a)
    if not thom.ok:
        cex.append({"check": "thom", "differences": thom.mismatches})
    verdicts = {"primitive_blocks_shared": shared, "pairing_certificate": paired,
                "tables_equal": tables, "bundles_equal": bundles, "thom_shift": thom.ok}
    return VerificationReport(verdicts, cy, lg, bcy, blg, cert, cex, thom, a.engine.checks)


@dataclass
class HodgeSummary:
    euler: int
    fractional: list
    symmetric: bool
    dual: bool | None
    total: int

    def to_dict(self) -> dict:
        return {"euler_characteristic": self.euler,
                "fractional_bidegrees": self.fractional,
                "symmetric": self.symmetric, "dual": self.dual, "total": self.total}


def hodge_report(table: BigradedTable, dim: int | None = None) -> HodgeSummary:
    """Euler characteristic over integral bidegrees, symmetry verdicts, total dimension.

    ``dim`` enables the duality test ``h^{p,q} = h^{dim-p, dim-q}``.
    """
    ent = table.as_dict()
    euler = 0
    frac = []
    for (p, q), h in ent.items():
        if p.denominator == 1 and q.denominator == 1:
            euler += (-1) ** int(p + q) * h
        else:
            frac.append({"p": str(p), "q": str(q), "h": h})
    sym = all(table[(q, p)] == h for (p, q), h in ent.items())
    dual = None
    if dim is not None:
        dual = all(table[(dim - p, dim - q)] == h for (p, q), h in ent.items())
    return HodgeSummary(euler, frac, sym, dual, table.total)
