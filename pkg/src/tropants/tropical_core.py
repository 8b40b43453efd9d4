"""Lattice polytopes, regular subdivisions and discrete Legendre duality.

Everything is exact: coordinates are ints or Fractions. Convex hulls are
computed from exact hyperplanes through affinely independent subsets; for
large inputs scipy's Qhull only proposes candidate facets, each of which is
re-verified exactly before use.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import NamedTuple, Sequence

from ._linalg import (
    affine_rank,
    det,
    dot,
    frac,
    inverse,
    matvec,
    nullspace,
    primitive,
    rank,
    rref,
    solve,
)
from .reports import CheckResult, StructuralError, ValidationReport

Point = tuple

EXHAUSTIVE_LIMIT = 3000


def _as_point(p) -> tuple:
    return tuple(frac(x) if not isinstance(x, int) else x for x in p)


def _normalize(p):
    return tuple(int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in p)


class Facet(NamedTuple):
    normal: tuple  # primitive outward integer normal
    offset: Fraction  # normal . x <= offset on the polytope
    indices: tuple  # indices of input points lying on the facet


def _hyperplane(points, idx):
    p0 = points[idx[0]]
    diffs = [[frac(a) - frac(b) for a, b in zip(points[i], p0)] for i in idx[1:]]
    ns = nullspace(diffs) if diffs else None
    if ns is None or len(ns) != 1:
        return None
    n = primitive(ns[0])
    return n, frac(dot(n, p0))


def _full_dim_check(points, d):
    if affine_rank(points) != d:
        raise StructuralError(f"points do not span R^{d}")


def _candidate_subsets(points, d):
    m = len(points)
    if comb(m, d) <= EXHAUSTIVE_LIMIT:
        return itertools.combinations(range(m), d), True
    import numpy as np
    from scipy.spatial import ConvexHull

    hull = ConvexHull(np.array([[float(x) for x in p] for p in points]))
    return (tuple(int(i) for i in s) for s in hull.simplices), False


def hull_facets(points: Sequence[Sequence]) -> list[Facet]:
    """Facets of conv(points), which must be full-dimensional."""
    points = [_as_point(p) for p in points]
    d = len(points[0])
    _full_dim_check(points, d)
    if d == 1:
        xs = [frac(p[0]) for p in points]
        hi, lo = max(xs), min(xs)
        return [
            Facet((1,), hi, tuple(i for i, x in enumerate(xs) if x == hi)),
            Facet((-1,), -lo, tuple(i for i, x in enumerate(xs) if x == lo)),
        ]

    def scan(subsets):
        found = {}
        bad = False
        for sub in subsets:
            h = _hyperplane(points, sub)
            if h is None:
                continue
            n, off = h
            if (n, off) in found or (tuple(-x for x in n), -off) in found:
                continue
            vals = [dot(n, p) for p in points]
            if all(v <= off for v in vals):
                found[(n, off)] = tuple(i for i, v in enumerate(vals) if v == off)
            elif all(v >= off for v in vals):
                nn = tuple(-x for x in n)
                found[(nn, -off)] = tuple(i for i, v in enumerate(vals) if v == off)
            else:
                bad = True
        return found, bad

    subsets, exhaustive = _candidate_subsets(points, d)
    found, bad = scan(subsets)
    if bad and not exhaustive:
        # a float candidate failed exact verification; fall back to full search
        found, _ = scan(itertools.combinations(range(len(points)), d))
    return sorted(Facet(n, off, idx) for (n, off), idx in found.items())


def _project_coords(points) -> list[int]:
    p0 = points[0]
    diffs = [[frac(a) - frac(b) for a, b in zip(p, p0)] for p in points[1:]]
    _, piv = rref(diffs)
    return piv


def polytope_vertices(points: Sequence[Sequence]) -> list[int]:
    """Indices of the extreme points of conv(points) (any affine dimension)."""
    points = [_as_point(p) for p in points]
    uniq = {}
    for i, p in enumerate(points):
        uniq.setdefault(p, i)
    pts = list(uniq)
    k = affine_rank(pts)
    if k == 0:
        return [uniq[pts[0]]]
    coords = _project_coords(pts)
    proj = [tuple(p[c] for c in coords) for p in pts]
    facets = hull_facets(proj)
    out = []
    for j, p in enumerate(pts):
        normals = [f.normal for f in facets if j in f.indices]
        if normals and rank(normals) == k:
            out.append(uniq[p])
    return sorted(out)


def pulling_triangulation(points: Sequence[Sequence], idx: Sequence[int] | None = None) -> list[tuple]:
    """Triangulate conv(points[idx]) into full-dimensional simplices.

    The lexicographically smallest point is pulled at every level, which
    makes the faces of the result compatible.
    """
    points = [_as_point(p) for p in points]
    if idx is None:
        idx = list(range(len(points)))
    idx = sorted(set(idx), key=lambda i: points[i])
    sub = [points[i] for i in idx]
    k = affine_rank(sub)
    if k == 0:
        return [(idx[0],)]
    if len(idx) == k + 1:
        return [tuple(sorted(idx))]
    coords = _project_coords(sub)
    proj = [tuple(p[c] for c in coords) for p in sub]
    apex = 0
    out = []
    for f in hull_facets(proj):
        if apex in f.indices:
            continue
        face = [idx[i] for i in f.indices]
        for s in pulling_triangulation(points, face):
            out.append(tuple(sorted((idx[apex],) + s)))
    return sorted(out)


class VolumeResult(NamedTuple):
    volume: int
    degenerate: bool


def normalized_volume(simplex: Sequence[int], points: Sequence[Sequence]) -> VolumeResult:
    """n! times the Euclidean volume of a lattice simplex."""
    verts = [points[i] for i in simplex]
    n = len(verts[0])
    if len(verts) != n + 1:
        raise StructuralError(f"a simplex in dimension {n} needs {n + 1} vertices, got {len(verts)}")
    p0 = verts[0]
    v = abs(det([[frac(a) - frac(b) for a, b in zip(p, p0)] for p in verts[1:]]))
    if v.denominator != 1:
        raise StructuralError("simplex is not a lattice simplex")
    return VolumeResult(int(v), v == 0)


def polytope_volume(points: Sequence[Sequence]) -> Fraction:
    """Normalized volume of conv(points) via a pulling triangulation."""
    points = [_as_point(p) for p in points]
    total = Fraction(0)
    n = len(points[0])
    for s in pulling_triangulation(points):
        if len(s) != n + 1:
            return Fraction(0)
        p0 = points[s[0]]
        total += abs(det([[frac(a) - frac(b) for a, b in zip(points[i], p0)] for i in s[1:]]))
    return total


@dataclass(frozen=True)
class Polytope:
    vertices: tuple
    dim: int

    @classmethod
    def from_points(cls, points) -> "Polytope":
        pts = [_as_point(p) for p in points]
        if not pts:
            raise StructuralError("empty polytope")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise StructuralError("dimension mismatch among vertices")
        keep = polytope_vertices(pts)
        return cls(tuple(sorted(_normalize(pts[i]) for i in keep)), dims.pop())

    @cached_property
    def facets(self) -> list[Facet]:
        return hull_facets(self.vertices)

    def contains(self, x) -> bool:
        return all(dot(f.normal, x) <= f.offset for f in self.facets)

    def in_interior(self, x) -> bool:
        return all(dot(f.normal, x) < f.offset for f in self.facets)


class LatticePoints(NamedTuple):
    points: tuple
    interior: tuple
    boundary: tuple


def lattice_points(polytope: Polytope | Sequence) -> LatticePoints:
    """Integer points of a full-dimensional rational polytope, split by position."""
    if not isinstance(polytope, Polytope):
        polytope = Polytope.from_points(polytope)
    verts = polytope.vertices
    if any(len(v) != polytope.dim for v in verts):
        raise StructuralError("dimension mismatch")
    lo = [min(frac(v[i]) for v in verts) for i in range(polytope.dim)]
    hi = [max(frac(v[i]) for v in verts) for i in range(polytope.dim)]
    ranges = [range(-((-a.numerator) // a.denominator), b.numerator // b.denominator + 1) for a, b in zip(lo, hi)]
    pts, inner, bnd = [], [], []
    for x in itertools.product(*ranges):
        if polytope.contains(x):
            pts.append(x)
            (inner if polytope.in_interior(x) else bnd).append(x)
    return LatticePoints(tuple(pts), tuple(inner), tuple(bnd))


@dataclass(frozen=True)
class LiftFunction:
    """Integer heights on a finite set of lattice points."""

    support: tuple
    values: tuple

    def __post_init__(self):
        sup = tuple(tuple(int(x) for x in p) for p in self.support)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not sup:
            raise StructuralError("lift support is empty")
        if len(sup) != len(self.values):
            raise StructuralError("support and values differ in length")
        if len({len(p) for p in sup}) != 1:
            raise StructuralError("dimension mismatch in support")
        if len(set(sup)) != len(sup):
            raise StructuralError("repeated support point")

    @property
    def dim(self) -> int:
        return len(self.support[0])

    @cached_property
    def as_dict(self) -> dict:
        return dict(zip(self.support, self.values))

    def __call__(self, w) -> int:
        return self.as_dict[tuple(w)]

    def lifted(self) -> list[tuple]:
        return [p + (v,) for p, v in zip(self.support, self.values)]

    def with_value(self, w, value) -> "LiftFunction":
        d = dict(self.as_dict)
        d[tuple(w)] = value
        return LiftFunction(tuple(d), tuple(d.values()))


class AffineForm(NamedTuple):
    gradient: tuple
    constant: Fraction

    def __call__(self, x):
        return dot(self.gradient, x) + self.constant


def fit_affine(points, values) -> AffineForm | None:
    """The affine function through (p_i, v_i), if one exists."""
    rows = [[frac(x) for x in p] + [Fraction(1)] for p in points]
    sol = solve(rows, [frac(v) for v in values])
    if sol is None:
        return None
    return AffineForm(tuple(_normalize(sol[:-1])), sol[-1])


@dataclass(frozen=True)
class Subdivision:
    """A polyhedral subdivision of conv(points); cells are sorted vertex-index tuples."""

    points: tuple
    cells: tuple
    forms: tuple = ()

    @cached_property
    def dim(self) -> int:
        return len(self.points[0])

    @cached_property
    def is_simplicial(self) -> bool:
        return all(len(c) == self.dim + 1 for c in self.cells)

    @cached_property
    def walls(self) -> list[tuple]:
        """(i, j, shared vertex indices) for cells meeting in a codimension-one face."""
        out = []
        for i, j in itertools.combinations(range(len(self.cells)), 2):
            shared = sorted(set(self.cells[i]) & set(self.cells[j]))
            if len(shared) >= self.dim and affine_rank([self.points[k] for k in shared]) == self.dim - 1:
                out.append((i, j, tuple(shared)))
        return out

    @cached_property
    def vertex_ids(self) -> tuple:
        return tuple(sorted({v for c in self.cells for v in c}))

    def cell_points(self, i) -> list:
        return [self.points[k] for k in self.cells[i]]

    def volumes(self) -> list[Fraction]:
        return [polytope_volume(self.cell_points(i)) for i in range(len(self.cells))]

    def edges(self) -> set[tuple]:
        """Pairs of vertex indices spanning an edge of some cell."""
        out = set()
        for c in self.cells:
            pts = [self.points[k] for k in c]
            if len(c) == self.dim + 1:
                out.update(itertools.combinations(c, 2))
                continue
            coords = _project_coords(pts)
            proj = [tuple(p[k] for k in coords) for p in pts]
            facets = hull_facets(proj)
            for a, b in itertools.combinations(range(len(c)), 2):
                normals = [f.normal for f in facets if a in f.indices and b in f.indices]
                if self.dim == 1 or (normals and rank(normals) == self.dim - 1):
                    out.add((c[a], c[b]))
        return out


Triangulation = Subdivision


def induced_subdivision(lift: LiftFunction, triangulate: bool = False) -> Subdivision:
    """Regular subdivision from the lower convex hull of the lifted points.

    By default the honest polyhedral subdivision is returned; with
    ``triangulate`` every non-simplex cell is pulled into simplices.
    """
    pts = list(lift.support)
    n = lift.dim
    if affine_rank(pts) != n:
        raise StructuralError("support is not full-dimensional")
    lifted = lift.lifted()
    cells: list[tuple] = []
    if affine_rank(lifted) < n + 1:
        cells = [tuple(polytope_vertices(pts))]
    else:
        for f in hull_facets(lifted):
            if f.normal[-1] < 0:
                on = list(f.indices)
                cells.append(tuple(sorted(on[i] for i in polytope_vertices([pts[k] for k in on]))))
    if triangulate:
        tri = []
        for c in cells:
            if len(c) == n + 1:
                tri.append(c)
            else:
                tri.extend(pulling_triangulation(pts, c))
        cells = tri
    cells = sorted(set(cells))
    forms = tuple(fit_affine([pts[k] for k in c], [lift.values[k] for k in c]) for c in cells)
    return Subdivision(tuple(pts), tuple(cells), forms)


def _cell_facets(points, cell):
    """Codimension-one faces of a simplex cell as sorted index tuples."""
    return [tuple(x for x in cell if x != v) for v in cell]


def check_triangulation(points, cells) -> list[str]:
    """Structural problems of a claimed triangulation of conv(points)."""
    problems = []
    n = len(points[0])
    hull = Polytope.from_points(points)
    faces: dict[tuple, list] = {}
    for c in cells:
        if len(c) != n + 1:
            problems.append(f"cell {list(c)} is not a simplex")
            continue
        if normalized_volume(c, points).degenerate:
            problems.append(f"cell {list(c)} is degenerate")
            continue
        for face in _cell_facets(points, c):
            apex = next(x for x in c if x not in face)
            faces.setdefault(face, []).append(apex)
    if problems:
        return problems
    for face, apexes in sorted(faces.items()):
        fp = [points[k] for k in face]
        on_boundary = any(all(dot(f.normal, p) == f.offset for p in fp) for f in hull.facets)
        if on_boundary:
            if len(apexes) != 1:
                problems.append(f"boundary facet {list(face)} used {len(apexes)} times")
            continue
        if len(apexes) != 2:
            problems.append(f"interior facet {list(face)} has {len(apexes)} neighbours")
            continue
        h = _hyperplane([_as_point(p) for p in points], face) if len(face) > 1 else None
        if n == 1:
            side = [frac(points[a][0]) - frac(points[face[0]][0]) for a in apexes]
        else:
            nrm, off = h
            side = [dot(nrm, points[a]) - off for a in apexes]
        if side[0] * side[1] >= 0:
            problems.append(f"interior facet {list(face)} has both neighbours on one side")
    total = sum(normalized_volume(c, points).volume for c in cells)
    if total != polytope_volume(points):
        problems.append(f"cells cover volume {total}, hull has {polytope_volume(points)}")
    return problems


def check_unimodular_regular(lift: LiftFunction, tri) -> ValidationReport:
    """Unimodularity, regularity (tri equals the induced subdivision) and strict creases."""
    cells = tri.cells if isinstance(tri, Subdivision) else tuple(tuple(sorted(c)) for c in tri)
    pts = list(lift.support)
    problems = check_triangulation(pts, cells)
    if problems:
        raise StructuralError("; ".join(problems))
    rep = ValidationReport()
    vols = {c: normalized_volume(c, pts).volume for c in cells}
    bad = [list(c) for c, v in vols.items() if v != 1]
    rep.add("unimodular", not bad, f"cells with volume != 1: {bad}")
    induced = induced_subdivision(lift)
    same = sorted(set(cells)) == list(induced.cells)
    rep.add("regular", same, f"induced subdivision has cells {[list(c) for c in induced.cells]}")
    user = Subdivision(tuple(pts), tuple(sorted(set(cells))))
    flat = []
    for i, j, shared in user.walls:
        fi = fit_affine([pts[k] for k in user.cells[i]], [lift.values[k] for k in user.cells[i]])
        fj = fit_affine([pts[k] for k in user.cells[j]], [lift.values[k] for k in user.cells[j]])
        if fi == fj:
            flat.append(list(shared))
    rep.add("strict_creases", not flat, f"no crease across walls {flat}")
    rep.artifacts["cells"] = len(cells)
    return rep


def _gram(gram, n):
    if gram is None:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    g = [[int(x) for x in row] for row in gram]
    if len(g) != n or any(len(r) != n for r in g):
        raise StructuralError("gram matrix has the wrong shape")
    from ._linalg import is_positive_definite

    if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)) or not is_positive_definite(g):
        raise StructuralError("gram matrix must be symmetric positive definite")
    return g


@dataclass(frozen=True)
class DualCell:
    label: tuple
    vertices: tuple
    rays: tuple
    gradient: tuple
    constant: Fraction
    maximal: bool = True

    @property
    def compact(self) -> bool:
        return not self.rays

    def form(self, v):
        return dot(self.gradient, v) + self.constant

    def interior_point(self):
        k = len(self.vertices)
        c = [sum(frac(p[i]) for p in self.vertices) / k for i in range(len(self.gradient))]
        for r in self.rays:
            c = [a + b for a, b in zip(c, r)]
        return tuple(c)


@dataclass
class PLFunction:
    """psi(v) = max_w <v, g w> - phi(w) together with its cells Q_w."""

    lift: LiftFunction
    gram: list
    subdivision: Subdivision
    cells: list

    def __call__(self, v) -> Fraction:
        return self.evaluate(v)

    def evaluate(self, v) -> Fraction:
        g = self.gram
        return max(frac(dot(v, matvec(g, w))) - phi for w, phi in zip(self.lift.support, self.lift.values))

    def cell(self, label) -> DualCell:
        for c in self.cells:
            if c.label == tuple(label):
                return c
        raise KeyError(label)

    @property
    def maximal_cells(self) -> list:
        return [c for c in self.cells if c.maximal]

    @cached_property
    def walls(self) -> list[tuple]:
        """Pairs of labels whose dual cells share a codimension-one face."""
        pts = self.subdivision.points
        labels = {c.label for c in self.maximal_cells}
        out = []
        for a, b in sorted(self.subdivision.edges()):
            wa, wb = pts[a], pts[b]
            if wa in labels and wb in labels:
                out.append(tuple(sorted((wa, wb))))
        return sorted(set(out))

    def verify_convexity(self) -> CheckResult:
        """Exact wall test: both forms agree with psi on the shared face and
        the cell's own form strictly dominates its neighbour inside the cell."""
        fails = []
        for a, b in self.walls:
            ca, cb = self.cell(a), self.cell(b)
            shared = set(ca.vertices) & set(cb.vertices)
            for p in shared:
                if not (ca.form(p) == cb.form(p) == self.evaluate(p)):
                    fails.append((a, b, p))
            pa, pb = ca.interior_point(), cb.interior_point()
            if not (ca.form(pa) > cb.form(pa) and cb.form(pb) > ca.form(pb)):
                fails.append((a, b, "no strict crease"))
        for c in self.maximal_cells:
            for p in c.vertices:
                if c.form(p) != self.evaluate(p):
                    fails.append((c.label, p, "form below psi at a vertex"))
        return CheckResult(not fails, fails)


def legendre_transform(lift: LiftFunction, gram=None) -> PLFunction:
    """Discrete Legendre transform with its full cell decomposition."""
    n = lift.dim
    g = _gram(gram, n)
    ginv = inverse(g)
    sub = induced_subdivision(lift)
    pts = sub.points
    hull = Polytope.from_points(pts)
    cells = []
    for w in lift.support:
        cells.append(_dual_cell(lift, g, ginv, sub, hull, w))
    cells.sort(key=lambda c: c.label)
    return PLFunction(lift, g, sub, cells)


def _dual_cell(lift, g, ginv, sub, hull, w) -> DualCell:
    pts = sub.points
    k = pts.index(tuple(w))
    grad = tuple(int(x) for x in matvec(g, w))
    const = Fraction(-lift(w))
    verts = set()
    for c, form in zip(sub.cells, sub.forms):
        on_cell = k in c or (form is not None and form(w) == lift(w) and Polytope.from_points([pts[i] for i in c]).contains(w))
        if on_cell:
            verts.add(_normalize(matvec(ginv, form.gradient)))
    rays = set()
    for f in hull.facets:
        if dot(f.normal, w) == f.offset:
            rays.add(primitive(matvec(ginv, f.normal)))
    if not verts:
        rays = set()
    return DualCell(tuple(w), tuple(sorted(verts)), tuple(sorted(rays)), grad, const, k in sub.vertex_ids)


def dual_cell(lift: LiftFunction, gram, w) -> DualCell:
    w = tuple(w)
    if w not in lift.as_dict:
        raise KeyError(f"{w} is not in the support")
    n = lift.dim
    g = _gram(gram, n)
    sub = induced_subdivision(lift)
    return _dual_cell(lift, g, inverse(g), sub, Polytope.from_points(sub.points), w)
