"""Circular dot diagrams and the black/white pairing certificate.

Each component with pure phases ``a`` carries ``w_j`` black dots at angles
``(a_j + m) / w_j`` and ``d_i`` white dots at ``m / d_i``.  Walking once around
the circle from angle 0, a black dot is labelled with the running counter and
then raises it; a white dot lowers it first.  White dots count as sitting just
before their angle, so the ones at angle 0 close the walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import ModelData
from .symmetry import Component

BLACK = "black"
WHITE = "white"


class PairingError(RuntimeError):
    """No perfect level-preserving matching exists; carries a diagram dump."""


@dataclass(frozen=True)
class Dot:
    color: str
    t: Fraction
    source: int
    component: int

    def sort_key(self):
        # whites at t - eps; the cut at angle 0 sends whites at t = 0 to the end
        if self.color == WHITE:
            return (self.t if self.t else Fraction(1), 0, self.source)
        return (self.t, 1, self.source)

    def to_dict(self) -> dict:
        tag = "j" if self.color == BLACK else "i"
        return {tag: self.source + 1, "t": str(self.t)}


@dataclass
class DotDiagram:
    component: Component
    dots: list[Dot]
    f: list[int] | None = None

    @property
    def size(self) -> int:
        return sum(1 for d in self.dots if d.color == BLACK)

    @property
    def ordered(self) -> bool:
        return self.f is not None

    def labelled(self):
        if self.f is None:
            raise ValueError("diagram is not ordered yet")
        return list(zip(self.dots, self.f))

    def rays(self) -> dict[Fraction, list[tuple[Dot, int]]]:
        out: dict[Fraction, list] = {}
        for dot, f in self.labelled():
            out.setdefault(dot.t, []).append((dot, f))
        return dict(sorted(out.items()))

    def ray_multisets(self) -> dict[Fraction, tuple[list[int], list[int]]]:
        """Per angle: sorted f-values of the black and of the white dots."""
        out = {}
        for t, items in self.rays().items():
            out[t] = (sorted(f for d, f in items if d.color == BLACK),
                      sorted(f for d, f in items if d.color == WHITE))
        return out

    def dump(self) -> str:
        a = ",".join(str(x) for x in self.component.a)
        lines = [f"component {self.component.index}  a = ({a})"]
        for t, items in self.rays().items():
            cells = " ".join(("B" if d.color == BLACK else "W")
                             + f"{'x' if d.color == BLACK else 'd'}{d.source + 1}:{f}"
                             for d, f in items)
            lines.append(f"  t = {t}: {cells}")
        return "\n".join(lines)


def build_diagram(m: ModelData, comp: Component) -> DotDiagram:
    """Place the dots of one component (unordered, no labels)."""
    dots = []
    for j, (a, w) in enumerate(zip(comp.a, m.weights)):
        dots += [Dot(BLACK, (a + k) / Fraction(w), j, comp.index) for k in range(w)]
    for i, d in enumerate(m.degrees):
        dots += [Dot(WHITE, Fraction(k, d), i, comp.index) for k in range(d)]
    return DotDiagram(comp, dots)


def order_and_f(diag: DotDiagram) -> DotDiagram:
    dots = sorted(diag.dots, key=Dot.sort_key)
    v = 0
    f = []
    for dot in dots:
        if dot.color == BLACK:
            f.append(v)
            v += 1
        else:
            v -= 1
            f.append(v)
    if v != 0:
        raise PairingError(f"unbalanced diagram for component {diag.component.index}: "
                           f"counter ends at {v}")
    return DotDiagram(diag.component, dots, f)


def diagram(m: ModelData, comp: Component) -> DotDiagram:
    return order_and_f(build_diagram(m, comp))


def maxima_at_black_white(diag: DotDiagram) -> bool:
    """Every local maximum of the running counter sits between a black and a white dot."""
    dots = diag.dots
    n = len(dots)
    level, v = [], 0
    for d in dots:
        v += 1 if d.color == BLACK else -1
        level.append(v)
    for i in range(n):
        if level[i] > level[i - 1] and level[i] > level[(i + 1) % n]:
            if dots[i].color != BLACK or dots[(i + 1) % n].color != WHITE:
                return False
    return True


def dot_degree(diag: DotDiagram, dot) -> Fraction:
    """``sum_j a_j + f(dot)``; ``dot`` may also be a bare label."""
    f = dot if isinstance(dot, int) else diag.f[diag.dots.index(dot)]
    return sum(diag.component.a, Fraction(0)) + f


@dataclass(frozen=True)
class Pair:
    black: Dot
    white: Dot
    f: int
    degree: Fraction

    def to_dict(self) -> dict:
        return {"component": self.black.component, "black": self.black.to_dict(),
                "white": self.white.to_dict(), "f": self.f, "degree": str(self.degree)}


@dataclass
class PairingCertificate:
    pairs: list[Pair] = field(default_factory=list)

    def __len__(self):
        return len(self.pairs)

    def to_list(self) -> list[dict]:
        return [p.to_dict() for p in self.pairs]


def pair_dots(diag: DotDiagram) -> PairingCertificate:
    """Match each black dot to the next unmatched white dot with the same label."""
    items = diag.labelled()
    n = len(items)
    used = [False] * n
    cert = PairingCertificate()
    for pos, (dot, f) in enumerate(items):
        if dot.color != BLACK:
            continue
        for step in range(1, n + 1):
            q = (pos + step) % n
            other, g = items[q]
            if other.color == WHITE and not used[q] and g == f:
                used[q] = True
                cert.pairs.append(Pair(dot, other, f, dot_degree(diag, f)))
                break
        else:
            raise PairingError(f"no white partner for black dot {dot} at level {f}\n"
                               + diag.dump())
    return cert
