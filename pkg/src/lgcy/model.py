"""Problem instances: weights, degrees, defining polynomials, symmetry generators.

A model document is JSON with keys ``weights``, ``degrees``, ``polynomials``,
``group_generators`` and ``options``.  Polynomials use the grammar::

    poly   := term (("+" | "-") term)*
    term   := [coef "*"] factor ("*" factor)*  |  coef
    factor := "x" index ["^" exponent]
    coef   := ["+" | "-"] integer ["/" integer]
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import NamedTuple

import numpy as np

from . import _monomials as mono
from .exact import (DEFAULT_PRIME, MAX_PRIME, VERIFY_PRIME, LatticeClasses,
                    PrimeCollisionError, RankEngine, frac_part, integer_rank, is_prime)


class ParseError(ValueError):
    """Malformed model document; carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class Monomial(NamedTuple):
    x: tuple[int, ...]
    p: tuple[int, ...] = ()


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: ``terms`` maps :class:`Monomial` to a nonzero rational."""

    terms: dict

    def __post_init__(self):
        object.__setattr__(self, "terms", {m: Fraction(c) for m, c in self.terms.items() if c})

    @classmethod
    def from_x_terms(cls, terms: dict, r: int = 0) -> "Polynomial":
        return cls({Monomial(tuple(a), (0,) * r): c for a, c in terms.items()})

    def x_terms(self) -> dict[tuple[int, ...], Fraction]:
        return {m.x: c for m, c in self.terms.items()}

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return format_polynomial(self.x_terms())

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


def format_polynomial(terms: dict) -> str:
    if not terms:
        return "0"
    parts = []
    for a, c in sorted(terms.items(), reverse=True):
        factors = [f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(a) if e]
        if not factors:
            body = str(abs(c))
        elif abs(c) == 1:
            body = "*".join(factors)
        else:
            body = f"{abs(c)}*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class Options:
    prime: int = DEFAULT_PRIME
    verify_prime: int = VERIFY_PRIME
    qs_bound: int | None = None


@dataclass(frozen=True)
class ModelData:
    """Validated-or-not problem instance; all sequences are tuples."""

    weights: tuple[int, ...]
    degrees: tuple[int, ...]
    polynomials: tuple[Polynomial, ...]
    generators: tuple[tuple[Fraction, ...], ...] = ()
    options: Options = field(default_factory=Options)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def qs_bound(self) -> int:
        if self.options.qs_bound is not None:
            return self.options.qs_bound
        return 3 * max(self.degrees, default=1)

    def engine(self, exact: bool = False) -> RankEngine:
        return RankEngine(self.options.prime, self.options.verify_prime, exact)

    def with_options(self, **kw) -> "ModelData":
        opts = {**self.options.__dict__, **{k: v for k, v in kw.items() if v is not None}}
        return ModelData(self.weights, self.degrees, self.polynomials, self.generators,
                         Options(**opts))


def make_model(weights, degrees, polynomials, generators=(), **options) -> ModelData:
    """Build a model from plain Python data; polynomials may be strings."""
    n = len(weights)
    polys = []
    for s in polynomials:
        polys.append(parse_polynomial(s, n) if isinstance(s, str) else s)
    gens = tuple(tuple(Fraction(a) for a in g) for g in generators)
    return ModelData(tuple(int(w) for w in weights), tuple(int(d) for d in degrees),
                     tuple(Polynomial.from_x_terms(p, len(degrees))
                           if not isinstance(p, Polynomial) else p for p in polys),
                     gens, Options(**options))


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d*)|(?P<op>[-+*/^])|(?P<bad>\S))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_polynomial(text: str, n: int, offset: int = 0) -> dict[tuple[int, ...], Fraction]:
    """Parse a polynomial string in ``x1..xn``; returns ``{exponents: coef}``.

    Errors are raised as :class:`ParseError` with a 1-based column counted
    from ``offset``.
    """
    toks = _tokens(text)
    i = 0

    def fail(msg, pos):
        raise ParseError(msg, 1, offset + pos + 1)

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        tok = toks[i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            what = tok[1] or "end of input"
            fail(f"unexpected {what!r}", tok[2])
        i += 1
        return tok

    def integer():
        return int(take("num")[1])

    def coefficient(sign):
        num = integer()
        if peek()[1] == "/":
            take()
            den_tok = peek()
            den = integer()
            if den == 0:
                fail("zero denominator", den_tok[2])
            return sign * Fraction(num, den)
        return Fraction(sign * num)

    def factor(exps):
        kind, val, pos = take("var")
        if len(val) == 1:
            fail("variable without index", pos)
        j = int(val[1:])
        if not 1 <= j <= n:
            fail(f"unknown variable {val}: index must lie in 1..{n}", pos)
        e = 1
        if peek()[1] == "^":
            take()
            e = integer()
        exps[j - 1] += e

    terms: dict[tuple[int, ...], Fraction] = {}
    sign = 1
    if peek()[1] in "+-" and peek()[0] == "op":
        sign = -1 if take()[1] == "-" else 1
    while True:
        exps = [0] * n
        coef = Fraction(sign)
        kind, val, pos = peek()
        if kind == "op" and val in "+-":
            # signed coefficient after a separator, e.g. "x1 + -3*x2"
            take()
            coef *= -1 if val == "-" else 1
            kind, val, pos = peek()
        if kind == "num":
            coef *= coefficient(1)
            if peek()[1] == "*":
                take()
                factor(exps)
        elif kind == "var":
            factor(exps)
        else:
            fail(f"expected a term, found {val or 'end of input'!r}", pos)
        while peek()[1] == "*":
            take()
            factor(exps)
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coef
        if not terms[key]:
            del terms[key]
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
            continue
        fail(f"unexpected {val!r}", pos)
    return terms


def _locate(text: str, s: str) -> tuple[int, int]:
    """Line and 0-based column of the first character of string literal ``s``."""
    idx = text.find(json.dumps(s))
    if idx < 0:
        return 1, 0
    idx += 1
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1)
    return line, col


def _require_int_list(doc, key, text):
    val = doc.get(key)
    if not isinstance(val, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                            for v in val):
        raise ParseError(f"{key!r} must be an array of integers", *_locate_key(text, key))
    return val


def _locate_key(text: str, key: str) -> tuple[int, int]:
    line, col = _locate(text, key)
    return line, col + 1


def _rational(s, where) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ParseError(f"non-rational entry {s!r} in {where}")
    try:
        if isinstance(s, str) and not re.fullmatch(r"\s*[-+]?\d+(\s*/\s*\d+)?\s*", s):
            raise ValueError
        return Fraction(s.replace(" ", "") if isinstance(s, str) else s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"non-rational entry {s!r} in {where}") from None


def parse_input(text: str) -> ModelData:
    """Parse a JSON model document into :class:`ModelData` (no validation)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", 1, 1)
    for key in ("weights", "degrees", "polynomials"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", 1, 1)
    weights = _require_int_list(doc, "weights", text)
    degrees = _require_int_list(doc, "degrees", text)
    polys_src = doc["polynomials"]
    if not isinstance(polys_src, list) or not all(isinstance(s, str) for s in polys_src):
        raise ParseError("'polynomials' must be an array of strings", *_locate_key(text, "polynomials"))
    n = len(weights)
    polys = []
    for s in polys_src:
        line, col = _locate(text, s)
        try:
            terms = parse_polynomial(s, n)
        except ParseError as exc:
            raise ParseError(str(exc).rsplit(" (line", 1)[0], line, col + exc.column) from None
        polys.append(Polynomial.from_x_terms(terms, len(degrees)))
    gens_src = doc.get("group_generators", [])
    if not isinstance(gens_src, list) or not all(isinstance(g, list) for g in gens_src):
        raise ParseError("'group_generators' must be an array of arrays",
                         *_locate_key(text, "group_generators"))
    gens = tuple(tuple(_rational(a, f"group_generators[{k}]") for a in g)
                 for k, g in enumerate(gens_src))
    opts_src = doc.get("options", {}) or {}
    if not isinstance(opts_src, dict):
        raise ParseError("'options' must be an object", *_locate_key(text, "options"))
    unknown = set(opts_src) - {"prime", "verify_prime", "qs_bound"}
    if unknown:
        raise ParseError(f"unknown option(s) {sorted(unknown)}", *_locate_key(text, "options"))
    for k, v in opts_src.items():
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(f"option {k!r} must be an integer", *_locate_key(text, k))
    return ModelData(tuple(weights), tuple(degrees), tuple(polys), gens, Options(**opts_src))


def load_model(path) -> ModelData:
    with open(path, encoding="utf-8") as fh:
        return parse_input(fh.read())


def model_to_document(m: ModelData) -> dict:
    return {
        "weights": list(m.weights),
        "degrees": list(m.degrees),
        "polynomials": [format_polynomial(p.x_terms()).replace(" ", "") for p in m.polynomials],
        "group_generators": [[str(a) for a in g] for g in m.generators],
        "options": {k: v for k, v in m.options.__dict__.items() if v is not None},
    }


# ---------------------------------------------------------------- validation

def weighted_degree(mono_: Monomial, m: ModelData) -> tuple[int, int]:
    """``(sum a_j w_j, sum b_i)`` of a monomial ``x^a p^b``."""
    x = sum(a * w for a, w in zip(mono_.x, m.weights))
    return x, sum(mono_.p)


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail" | "unverified"
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    quasi_smooth: dict[int, "QSStatus"] | None = None

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status != "pass"]

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, "pass" if ok else "fail", detail))

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "checks": [{"name": c.name, "status": c.status, "detail": c.detail}
                           for c in self.checks]}


def exponent_matrix(m: ModelData) -> list[tuple[int, ...]]:
    rows = set()
    for poly in m.polynomials:
        rows.update(poly.x_terms())
    return sorted(rows)


def _max_coefficient(m: ModelData) -> int:
    mags = [max(abs(c.numerator), c.denominator)
            for poly in m.polynomials for c in poly.terms.values()]
    return max(mags, default=1)


def validate(m: ModelData, quasi_smooth: bool = True) -> ValidationReport:
    """Check every standing hypothesis; failures are report entries, never raised."""
    rep = ValidationReport()
    n, r = m.n, m.r
    shape_ok = (0 < r < n and len(m.polynomials) == r
                and all(w > 0 for w in m.weights) and all(d > 0 for d in m.degrees))
    rep.add("shape", shape_ok,
            f"n={n} variables, r={r} degrees, {len(m.polynomials)} polynomials; need 0 < r < n, "
            "one polynomial per degree, positive weights and degrees")
    if not shape_ok:
        return rep
    g = 0
    for w in m.weights:
        g = gcd(g, w)
    rep.add("coprime_weights", g == 1, f"gcd of weights = {g}")

    bad = []
    for i, (poly, d) in enumerate(zip(m.polynomials, m.degrees)):
        if not poly:
            bad.append(f"W{i + 1} is zero")
        for mon in poly.terms:
            deg = weighted_degree(mon, m)[0]
            if deg != d:
                bad.append(f"W{i + 1} term {format_polynomial({mon.x: 1})} has degree {deg} != {d}")
    rep.add("quasi_homogeneous", not bad, "; ".join(bad) or "every term has its stated degree")

    sd, sw = sum(m.degrees), sum(m.weights)
    rep.add("calabi_yau", sd == sw, f"sum of degrees {sd} {'=' if sd == sw else '!='} sum of weights {sw}")

    gen_bad = []
    for k, gen in enumerate(m.generators):
        if len(gen) != n:
            gen_bad.append(f"generator {k + 1} has length {len(gen)} != {n}")
            continue
        if any(not 0 <= a < 1 for a in gen):
            gen_bad.append(f"generator {k + 1} has a phase outside [0,1)")
            continue
        for i, poly in enumerate(m.polynomials):
            for a in poly.x_terms():
                if frac_part(sum(e * t for e, t in zip(a, gen))) != 0:
                    gen_bad.append(f"generator {k + 1} does not fix W{i + 1}")
                    break
    rep.add("generators", not gen_bad, "; ".join(gen_bad) or f"{len(m.generators)} generator(s) fix every W_i")

    emat = exponent_matrix(m)
    rk = integer_rank(emat) if emat else 0
    rep.add("finite_group", rk == n, f"exponent matrix rank {rk} (need {n})")

    opts = m.options
    big = _max_coefficient(m)
    prime_bad = []
    for name, q in (("prime", opts.prime), ("verify_prime", opts.verify_prime)):
        if not is_prime(q) or q > MAX_PRIME:
            prime_bad.append(f"{name} {q} is not a prime <= {MAX_PRIME}")
        elif q <= 2 * big:
            prime_bad.append(f"{name} {q} does not exceed twice the largest coefficient {big}")
    if opts.prime == opts.verify_prime:
        prime_bad.append("prime and verify_prime coincide")
    rep.add("primes", not prime_bad, "; ".join(prime_bad) or f"{opts.prime}, {opts.verify_prime}")

    if quasi_smooth:
        needed = {c.name: c.status for c in rep.checks}
        if all(needed.get(k) == "pass" for k in ("quasi_homogeneous", "primes")):
            status = check_quasi_smooth(m)
            rep.quasi_smooth = status
            unver = [j for j, s in status.items() if not s.verified]
            detail = ", ".join(f"x{j + 1}: {s}" for j, s in status.items())
            rep.checks.append(Check("quasi_smooth", "pass" if not unver else "unverified", detail))
        else:
            rep.checks.append(Check("quasi_smooth", "unverified", "skipped: polynomials or primes invalid"))
    return rep


# ----------------------------------------------------------- quasi-smoothness

@dataclass(frozen=True)
class QSStatus:
    verified: bool
    exponent: int | None
    bound: int

    def __str__(self):
        if self.verified:
            return f"verified (power {self.exponent})"
        return f"unverified at bound {self.bound}"


def _padd(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + sign * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + va * vb
            if s:
                out[k] = s
            else:
                out.pop(k)
    return out


def partial(terms: dict, j: int) -> dict:
    """Partial derivative of ``{exponents: coef}`` in the ``j``-th variable."""
    out = {}
    for a, c in terms.items():
        if a[j]:
            b = list(a)
            b[j] -= 1
            out[tuple(b)] = c * a[j]
    return out


def _det(mat: list[list[dict]], n: int) -> dict:
    size = len(mat)
    total: dict = {}
    for perm in permutations(range(size)):
        inv = sum(1 for x in range(size) for y in range(x + 1, size) if perm[x] > perm[y])
        term = {(0,) * n: Fraction(1)}
        for row, col in enumerate(perm):
            term = _pmul(term, mat[row][col])
            if not term:
                break
        if term:
            total = _padd(total, term, -1 if inv % 2 else 1)
    return total


def jacobian_minors(m: ModelData) -> list[tuple[int, dict]]:
    """All maximal minors of the Jacobian matrix with their weighted degrees."""
    polys = [p.x_terms() for p in m.polynomials]
    jac = [[partial(p, j) for j in range(m.n)] for p in polys]
    out = []
    for cols in combinations(range(m.n), m.r):
        det = _det([[jac[i][j] for j in cols] for i in range(m.r)], m.n)
        if det:
            deg = sum(m.degrees) - sum(m.weights[j] for j in cols)
            out.append((deg, det))
    return out


def _in_ideal(target: tuple[int, ...], gens, weights, classes: LatticeClasses,
              engine: RankEngine) -> bool:
    e = sum(a * w for a, w in zip(target, weights))
    cand = mono.monomials_of_degree(weights, e)
    tkey = classes.key_array([target])[0]
    cols = cand[np.all(classes.key_array(cand) == tkey, axis=1)] if len(cand) else cand
    index = mono.MonomialIndex(cols)
    rows = []
    for deg, terms in gens:
        mults = mono.monomials_of_degree(weights, e - deg)
        exps = np.array(list(terms), dtype=np.int64)
        vals = tuple(terms.values())
        for c in mono.product_rows(index, mults, exps):
            rows.append((c, vals))
    t = index.lookup(np.array([target]))
    return engine.contains(rows, len(index), (t, (Fraction(1),)))


def check_quasi_smooth(m: ModelData, bound: int | None = None,
                       prime: int | None = None) -> dict[int, QSStatus]:
    """Bounded search for pure powers ``x_j^N`` in ``(W_1..W_r, maximal minors)``.

    ``bound`` caps the weighted degree ``N * w_j``.  A variable is verified as
    soon as some power lies in the ideal; beyond the bound it is reported as
    unverified rather than failed.
    """
    bound = m.qs_bound if bound is None else bound
    engine = m.engine() if prime is None else RankEngine(
        prime, m.options.verify_prime if prime != m.options.verify_prime else m.options.prime)
    gens = [(d, p.x_terms()) for d, p in zip(m.degrees, m.polynomials)]
    gens += jacobian_minors(m)
    # each W_i is homogeneous for every diagonal symmetry preserving it up to scalar
    diffs = []
    for poly in m.polynomials:
        exps = list(poly.x_terms())
        diffs += [tuple(a - b for a, b in zip(e, exps[0])) for e in exps[1:]]
    classes = LatticeClasses(diffs, m.n)
    out = {}
    for j in range(m.n):
        found = None
        for N in range(1, bound // m.weights[j] + 1):
            target = tuple(N if k == j else 0 for k in range(m.n))
            for attempt in range(3):
                try:
                    hit = _in_ideal(target, gens, m.weights, classes, engine)
                    break
                except PrimeCollisionError:
                    if attempt == 2:
                        raise
                    engine = engine.fresh()
            if hit:
                found = N
                break
        out[j] = QSStatus(found is not None, found, bound)
    return out
