"""Graded pieces of the degeneration ring, its fan, and the central fibre."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, NamedTuple, Sequence

from ._linalg import det, frac, matvec, primitive, solve
from .reports import StructuralError
from .tropical_core import (
    LiftFunction,
    PLFunction,
    Subdivision,
    check_unimodular_regular,
    induced_subdivision,
    lattice_points,
    legendre_transform,
)

# W = -z_1 ... z_{n+1} in every chart; the sign is fixed by convention
W_SIGN = -1


@dataclass(frozen=True, order=True)
class GradedPoint:
    """A basis element v in (1/k) Z^{n+1} of the degree-k piece."""

    degree: int
    v: tuple
    height: Fraction

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(frac(x) for x in self.v))
        object.__setattr__(self, "height", frac(self.height))
        if self.degree <= 0:
            raise ValueError("degree must be positive")
        if any((x * self.degree).denominator != 1 for x in self.v):
            raise ValueError(f"{self.v} is not in (1/{self.degree})Z^{len(self.v)}")
        if self.height < 0:
            raise ValueError("point lies below the graph of psi")

    @property
    def x(self) -> tuple:
        return self.v[:-1]

    @property
    def numerators(self) -> tuple:
        return tuple(int(c * self.degree) for c in self.v)

    def t(self, power: int = 1) -> "GradedPoint":
        """Action of t: raise the last coordinate by power/k."""
        step = Fraction(power, self.degree)
        return GradedPoint(self.degree, self.v[:-1] + (self.v[-1] + step,), self.height + step)


def graded_point(psi: Callable, degree: int, v) -> GradedPoint:
    v = tuple(frac(c) for c in v)
    return GradedPoint(degree, v, v[-1] - frac(psi(v[:-1])))


@dataclass
class RingSlice:
    degree: int
    basis: list

    def t_action(self, p: GradedPoint) -> GradedPoint:
        return p.t()

    def __len__(self) -> int:
        return len(self.basis)


def _grid(lo, hi, k):
    start = -(-frac(lo) * k // 1)
    stop = frac(hi) * k // 1
    return [Fraction(i, k) for i in range(start, stop + 1)]


def ring_basis(psi: Callable, k: int, height_bound, window: Sequence[tuple] | None = None) -> RingSlice:
    """Points of the degree-k piece with height <= height_bound above the window."""
    if window is None:
        if isinstance(psi, PLFunction) and all(c.compact for c in psi.maximal_cells):
            pts = psi.lift.support
            window = [(min(p[i] for p in pts), max(p[i] for p in pts)) for i in range(psi.lift.dim)]
        else:
            raise StructuralError("an explicit window is needed over an unbounded domain")
    hb = frac(height_bound)
    out = []
    for x in itertools.product(*[_grid(lo, hi, k) for lo, hi in window]):
        base = frac(psi(x))
        y = Fraction(-(-base * k // 1), k)
        while y - base <= hb:
            out.append(GradedPoint(k, x + (y,), y - base))
            y += Fraction(1, k)
    out.sort(key=lambda p: p.v)
    return RingSlice(k, out)


def multiply(a: GradedPoint, b: GradedPoint, psi: Callable) -> tuple[GradedPoint, Fraction]:
    """Product point (k v + l w)/(k + l) and the t-exponent above the basis monomial.

    The exponent is K h_ab - k h_a - l h_b, the convexity defect measured in
    units of t (one unit of t is a height step of 1/K in degree K).
    """
    k, l = a.degree, b.degree
    K = k + l
    v = tuple((k * x + l * y) / K for x, y in zip(a.v, b.v))
    p = graded_point(psi, K, v)
    return p, K * p.height - k * a.height - l * b.height


def cstar_weight(p: GradedPoint) -> int:
    w = p.degree * p.v[-1]
    if w.denominator != 1:
        raise ValueError(f"non-integral weight {w} for {p}")
    return int(w)


class FanCone(NamedTuple):
    rays: tuple

    @property
    def dim(self) -> int:
        return len(self.rays[0])


def build_fan(tri: Subdivision) -> list[FanCone]:
    """Cones over {1} x cell; rays (1, p) are primitive automatically."""
    pts = tri.points
    return [FanCone(tuple(primitive((1,) + tuple(pts[i])) for i in cell)) for cell in tri.cells]


def smoothness_check(cone: FanCone | Sequence) -> bool:
    rays = cone.rays if isinstance(cone, FanCone) else tuple(tuple(r) for r in cone)
    if len(rays) != len(rays[0]):
        raise StructuralError(f"cone with rays {list(rays)} is not simplicial and maximal")
    return abs(det(rays)) == 1


def chart_superpotential_check(cone: FanCone | Sequence) -> bool:
    """W pulls back to the product of the chart coordinates iff (1,0,..,0)
    pairs to 1 with every ray."""
    rays = cone.rays if isinstance(cone, FanCone) else tuple(tuple(r) for r in cone)
    if not smoothness_check(rays):
        raise StructuralError("chart check needs a smooth maximal cone")
    return all(r[0] == 1 for r in rays)


SURFACE_TABLE = {
    (1, 1, 1): "P2",
    (0, 0, 0, 0): "P1xP1",
    (-1, -1, -1, -1, -1, -1): "Bl3P2",
}


class ToricSurfaceID(NamedTuple):
    ray_cycle: tuple
    selfint: tuple
    name: str


def _ccw_sort(points):
    n = len(points)
    c = [sum(frac(p[i]) for p in points) / n for i in range(2)]

    def half(p):
        dx, dy = frac(p[0]) - c[0], frac(p[1]) - c[1]
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cr = (frac(p[0]) - c[0]) * (frac(q[1]) - c[1]) - (frac(p[1]) - c[1]) * (frac(q[0]) - c[0])
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    return sorted(points, key=cmp_to_key(cmp))


def _canonical_cycle(a):
    n = len(a)
    variants = []
    for seq in (list(a), list(reversed(a))):
        for i in range(n):
            variants.append(tuple(seq[i:] + seq[:i]))
    return min(variants)


def surface_id(polygon: Sequence) -> ToricSurfaceID:
    """Smooth toric surface of a compact lattice polygon from its normal fan."""
    from .tropical_core import Polytope

    verts = Polytope.from_points(polygon).vertices
    if len(verts) < 3 or len(verts[0]) != 2:
        raise StructuralError("surface_id needs a two-dimensional polygon")
    cyc = _ccw_sort(list(verts))
    m = len(cyc)
    normals = []
    for i in range(m):
        p, q = cyc[i], cyc[(i + 1) % m]
        e = (frac(q[0]) - frac(p[0]), frac(q[1]) - frac(p[1]))
        normals.append(primitive((-e[1], e[0])))  # inward for a ccw boundary
    for i in range(m):
        u, w = normals[i], normals[(i + 1) % m]
        if abs(u[0] * w[1] - u[1] * w[0]) != 1:
            raise StructuralError(f"normal fan is singular between rays {u} and {w}")
    a = []
    for i in range(m):
        prev, cur, nxt = normals[i - 1], normals[i], normals[(i + 1) % m]
        s = (prev[0] + nxt[0], prev[1] + nxt[1])
        sol = solve([[cur[0]], [cur[1]]], [s[0], s[1]])
        a.append(int(-sol[0]))
    a = tuple(a)
    key = _canonical_cycle(a)
    name = None
    for cyc_key, nm in SURFACE_TABLE.items():
        if len(cyc_key) == m and _canonical_cycle(cyc_key) == key:
            name = nm
    if name is None and m == 5:
        name = "Bl1(P1xP1)"
    if name is None:
        name = "unnamed(" + ",".join(str(x) for x in a) + ")"
    return ToricSurfaceID(tuple(normals), a, name)


@dataclass
class Component:
    label: tuple
    compact: bool
    surface: str | None


@dataclass
class ComponentReport:
    components: list
    adjacency: list  # label pairs whose cells share a wall

    def to_dict(self) -> dict:
        return {
            "components": [
                {"label": list(c.label), "compact": c.compact, "surface": c.surface} for c in self.components
            ],
            "adjacency": [[list(a), list(b)] for a, b in self.adjacency],
        }


def central_fiber(psi: PLFunction) -> ComponentReport:
    """Components of the central fibre, one per maximal dual cell.

    Compact cells are identified in gradient coordinates g.Q, where they are
    lattice polygons; a cell with a singular normal fan is reported as such.
    """
    comps = []
    for c in psi.maximal_cells:
        surf = None
        if c.compact and len(c.label) == 2:
            poly = c.vertices if psi.gram is None else [tuple(matvec(psi.gram, v)) for v in c.vertices]
            try:
                surf = surface_id(poly).name
            except StructuralError as exc:
                surf = f"singular: {exc}"
        comps.append(Component(c.label, c.compact, surf))
    return ComponentReport(comps, list(psi.walls))


def genus_and_ends(lift: LiftFunction) -> tuple[int | None, int | None, int]:
    pants = len(induced_subdivision(lift).cells)
    if lift.dim != 2:
        return None, None, pants
    lp = lattice_points(lift.support)
    return len(lp.interior), len(lp.boundary), pants


def degeneration_report(lift: LiftFunction, gram=None) -> dict:
    sub = induced_subdivision(lift)
    fan = build_fan(sub)
    smooth = all(smoothness_check(c) for c in fan)
    chart = smooth and all(chart_superpotential_check(c) for c in fan)
    psi = legendre_transform(lift, gram)
    fib = central_fiber(psi)
    genus, ends, pants = genus_and_ends(lift)
    return {
        "cones": [[list(r) for r in c.rays] for c in fan],
        "smooth": smooth,
        "chart_W": chart,
        "components": fib.to_dict()["components"],
        "genus": genus,
        "ends": ends,
        "pants": pants,
        "regular": check_unimodular_regular(lift, sub).to_dict(),
    }
