"""Quasi-periodic lifts, periodic subdivisions and the quotient graded ring.

The data (Gamma, g) is a lattice Gamma in Z^n with a positive definite
integral Gram matrix g. A lift phi on Z^n is quasi-periodic when

    phi(v + gamma) = phi(v) + v.g.gamma + gamma.g.gamma / 2,

so phi - v.g.v/2 is Gamma-periodic and phi is fixed by its values on one
point per residue class.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Sequence

from ._linalg import (
    det,
    dot,
    frac,
    inertia,
    inverse,
    is_positive_definite,
    matvec,
    nullspace,
    primitive,
    quad,
)
from .reports import CheckResult, StructuralError, ValidationReport
from .toric_degen import surface_id
from .tropical_core import (
    AffineForm,
    LiftFunction,
    fit_affine,
    induced_subdivision,
    polytope_vertices,
    polytope_volume,
)


class EnumerationError(RuntimeError):
    """A bounded enumeration would exceed its safety limit."""


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class PolarizedTropicalAV:
    n: int
    gamma_basis: tuple
    gram: tuple

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in b) for b in self.gamma_basis)
        g = tuple(tuple(int(x) for x in r) for r in self.gram)
        object.__setattr__(self, "gamma_basis", basis)
        object.__setattr__(self, "gram", g)
        n = self.n
        if len(basis) != n or any(len(b) != n for b in basis):
            raise StructuralError("gamma_basis must have n vectors of length n")
        if len(g) != n or any(len(r) != n for r in g):
            raise StructuralError("gram must be n x n")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise StructuralError("gram must be symmetric")
        if not is_positive_definite(g):
            raise StructuralError("gram must be positive definite")
        if det(self.B) == 0:
            raise StructuralError("gamma_basis is not a basis")
        checks = list(basis) + [tuple(a + b for a, b in zip(u, w)) for u, w in itertools.combinations(basis, 2)]
        for c in checks:
            if quad(g, c) % 2:
                raise StructuralError(f"gamma.g.gamma is odd for gamma = {c}")

    @cached_property
    def B(self) -> list:
        """Basis vectors as columns."""
        return [[self.gamma_basis[j][i] for j in range(self.n)] for i in range(self.n)]

    @cached_property
    def Binv(self) -> list:
        return inverse(self.B)

    @cached_property
    def ginv(self) -> list:
        return inverse(self.gram)

    @cached_property
    def index(self) -> int:
        return abs(int(det(self.B)))

    @cached_property
    def lambda_lo(self) -> Fraction:
        """A rational lower bound for the smallest eigenvalue of g, certified exactly."""
        import numpy as np

        lam = float(np.linalg.eigvalsh(np.array(self.gram, dtype=float)).min())
        cand = Fraction(lam * 0.999).limit_denominator(1000)
        while cand > 0:
            shifted = [[frac(self.gram[i][j]) - (cand if i == j else 0) for j in range(self.n)] for i in range(self.n)]
            if inertia(shifted)[0] == self.n:
                return cand
            cand /= 2
        raise ArithmeticError("could not bound the spectrum of g")

    def coords(self, v) -> list[Fraction]:
        return matvec(self.Binv, [frac(x) for x in v])

    def gamma(self, k: Sequence[int]) -> tuple:
        return tuple(int(x) for x in matvec(self.B, k))

    def reduce(self, v) -> tuple[tuple, tuple]:
        """(r, gamma) with v = r + gamma and r in the half-open fundamental cell."""
        k = [_floor(c) for c in self.coords(v)]
        gamma = self.gamma(k)
        r = tuple(frac(a) - b for a, b in zip(v, gamma))
        return _norm(r), gamma

    def in_gamma(self, gamma) -> bool:
        return all(c.denominator == 1 for c in self.coords(gamma))

    def shift(self, x, gamma) -> Fraction:
        """Increment x.g.gamma + gamma.g.gamma/2 of the quasi-periodicity."""
        return frac(quad(self.gram, x, gamma)) + Fraction(quad(self.gram, gamma), 2)

    def half_q(self, x) -> Fraction:
        return Fraction(1, 2) * frac(quad(self.gram, x))

    @cached_property
    def residues(self) -> list[tuple]:
        """Integer points of the half-open fundamental cell, one per class of Z^n / Gamma."""
        corners = [self.gamma(k) for k in itertools.product((0, 1), repeat=self.n)]
        lo = [min(c[i] for c in corners) for i in range(self.n)]
        hi = [max(c[i] for c in corners) for i in range(self.n)]
        out = []
        for p in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
            if self.reduce(p)[0] == p:
                out.append(p)
        assert len(out) == self.index
        return sorted(out)

    def box(self, margin: int) -> list[tuple[int, int]]:
        corners = [self.gamma(k) for k in itertools.product((0, 1), repeat=self.n)]
        return [(min(c[i] for c in corners) - margin, max(c[i] for c in corners) + margin) for i in range(self.n)]

    @classmethod
    def from_json(cls, data: dict) -> "PolarizedTropicalAV":
        return cls(int(data["n"]), tuple(map(tuple, data["gamma_basis"])), tuple(map(tuple, data["gram"])))


def _norm(p):
    return tuple(int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in p)


class QuasiPeriodicLift:
    """Quasi-periodic integer lift given by values on representatives of Z^n / Gamma."""

    def __init__(self, av: PolarizedTropicalAV, base_values: Mapping):
        self.av = av
        self.violations: list[str] = []
        self.base: dict[tuple, int] = {}
        for p, val in sorted((tuple(int(x) for x in p), int(v)) for p, v in dict(base_values).items()):
            r, gamma = av.reduce(p)
            derived = val - av.shift(r, gamma)
            if derived.denominator != 1:
                self.violations.append(f"phi({list(p)}) gives a non-integral value at {list(r)}")
                continue
            derived = int(derived)
            if r in self.base and self.base[r] != derived:
                self.violations.append(
                    f"phi({list(r)} + {list(gamma)}) = phi({list(r)}) + {list(r)}.g.{list(gamma)} "
                    f"+ {list(gamma)}.g.{list(gamma)}/2 fails: {val} != {self.base[r] + av.shift(r, gamma)}"
                )
                continue
            self.base[r] = derived
        missing = [r for r in av.residues if r not in self.base]
        for r in missing:
            self.violations.append(f"no value for the residue class of {list(r)}")

    @property
    def consistent(self) -> bool:
        return not self.violations

    def check(self) -> None:
        if self.violations:
            raise StructuralError("; ".join(self.violations))

    def __call__(self, v) -> int:
        self.check()
        r, gamma = self.av.reduce(v)
        return int(self.base[r] + self.av.shift(r, gamma))

    def correction(self, r) -> Fraction:
        return self.base[r] - self.av.half_q(r)

    @cached_property
    def correction_range(self) -> tuple[Fraction, Fraction]:
        vals = [self.correction(r) for r in self.av.residues]
        return min(vals), max(vals)

    @classmethod
    def from_json(cls, data: dict) -> "QuasiPeriodicLift":
        av = PolarizedTropicalAV.from_json(data)
        return cls(av, {tuple(e["point"]): e["value"] for e in data["base_values"]})


def _window_points(window):
    return itertools.product(*[range(lo, hi + 1) for lo, hi in window])


def _as_window(window, n):
    if isinstance(window, int):
        return [(-window, window)] * n
    return [tuple(w) for w in window]


def extend_lift(lift: QuasiPeriodicLift, window) -> dict:
    lift.check()
    return {p: lift(p) for p in _window_points(_as_window(window, lift.av.n))}


def theta_exponent_check(phi: Callable | Mapping, av: PolarizedTropicalAV, gamma, window) -> CheckResult:
    """Exponent identity behind the theta functional equation on a window."""
    gamma = tuple(int(x) for x in gamma)
    if not av.in_gamma(gamma):
        raise ValueError(f"{gamma} is not in Gamma")
    get = phi.get if isinstance(phi, Mapping) else phi
    fails = []
    for v in _window_points(_as_window(window, av.n)):
        w = tuple(a + b for a, b in zip(v, gamma))
        lhs, rhs = get(w), get(v)
        if lhs is None or rhs is None or lhs != rhs + av.shift(v, gamma):
            fails.append(v)
    return CheckResult(not fails, fails)


def periodic_genus(n_triangles: int) -> int:
    if n_triangles % 2:
        raise ValueError("a closed surface needs an even number of pants")
    return 1 + n_triangles // 2


@dataclass(frozen=True)
class PeriodicCell:
    vertices: tuple  # lattice points, sorted
    form: AffineForm

    @property
    def barycenter(self) -> tuple:
        k = len(self.vertices)
        return tuple(sum(frac(p[i]) for p in self.vertices) / k for i in range(len(self.vertices[0])))

    def translate(self, av: PolarizedTropicalAV, gamma) -> "PeriodicCell":
        a, c = self.form
        ga = matvec(av.gram, gamma)
        grad = tuple(frac(x) + y for x, y in zip(a, ga))
        const = c - frac(dot(a, gamma)) - Fraction(quad(av.gram, gamma), 2)
        verts = tuple(sorted(tuple(x + y for x, y in zip(p, gamma)) for p in self.vertices))
        return PeriodicCell(verts, AffineForm(_norm(grad), const))


@dataclass
class PeriodicSubdivision:
    lift: QuasiPeriodicLift
    cells: list  # one PeriodicCell per Gamma-orbit, barycenter in the fundamental cell
    margin: int
    certified: bool
    volume: Fraction

    @property
    def av(self) -> PolarizedTropicalAV:
        return self.lift.av

    @property
    def complete(self) -> bool:
        return self.volume == math.factorial(self.av.n) * self.av.index

    def cells_near(self, radius: int = 1) -> list[PeriodicCell]:
        """All translates of the orbit representatives by small lattice vectors."""
        out = []
        for k in itertools.product(range(-radius, radius + 1), repeat=self.av.n):
            g = self.av.gamma(k)
            out.extend(c.translate(self.av, g) for c in self.cells)
        return out

    @cached_property
    def vertex_classes(self) -> list[tuple]:
        return sorted({self.av.reduce(p)[0] for c in self.cells for p in c.vertices})

    def star(self, w) -> list[PeriodicCell]:
        w = tuple(w)
        r, gamma = self.av.reduce(w)
        out = []
        for c in self.cells_near(2):
            if r in c.vertices:
                out.append(c.translate(self.av, gamma))
        return out


def _certify(lift: QuasiPeriodicLift, cell_vertices, form: AffineForm) -> bool:
    """phi >= form on all of Z^n with equality exactly on the cell."""
    av = lift.av
    a, c = form
    ginv = av.ginv
    center = matvec(ginv, a)
    cmin, _ = lift.correction_range
    R = Fraction(1, 2) * frac(quad(ginv, a)) + c - cmin
    if R < 0:
        return False
    rad = math.sqrt(float(2 * R / av.lambda_lo)) + 1
    ranges = [range(math.floor(float(x) - rad), math.ceil(float(x) + rad) + 1) for x in center]
    equal = []
    for w in itertools.product(*ranges):
        d = lift(w) - form(w)
        if d < 0:
            return False
        if d == 0:
            equal.append(w)
    if not equal:
        return False
    verts = sorted(equal[i] for i in polytope_vertices(equal))
    return verts == sorted(cell_vertices)


def periodic_subdivision(lift: QuasiPeriodicLift, max_margin: int = 6) -> PeriodicSubdivision:
    """Orbit representatives of the Gamma-periodic regular subdivision of R^n.

    A growing window around the fundamental cell is lifted; cells whose
    barycenter lies in the half-open fundamental cell are kept, each one is
    certified against the whole lattice, and completeness is checked by
    comparing normalized volumes with n! |det Gamma|.
    """
    lift.check()
    av = lift.av
    target = math.factorial(av.n) * av.index
    last = None
    for margin in range(1, max_margin + 1):
        window = av.box(margin)
        pts = list(_window_points(window))
        sub = induced_subdivision(LiftFunction(pts, [lift(p) for p in pts]))
        reps = []
        ok = True
        for cell, form in zip(sub.cells, sub.forms):
            verts = tuple(sorted(sub.points[i] for i in cell))
            pc = PeriodicCell(verts, form)
            if av.reduce(pc.barycenter)[0] != _norm(pc.barycenter):
                continue
            if not _certify(lift, verts, form):
                ok = False
                break
            reps.append(pc)
        if not ok:
            continue
        vol = sum((polytope_volume(c.vertices) for c in reps), Fraction(0))
        last = PeriodicSubdivision(lift, sorted(reps, key=lambda c: c.vertices), margin, True, vol)
        if vol == target:
            return last
    if last is None:
        raise EnumerationError(f"no certified periodic subdivision within margin {max_margin}")
    last.certified = False
    return last


def _canonical_cell(av, verts) -> tuple:
    verts = [tuple(int(x) for x in p) for p in verts]
    k = len(verts)
    bary = tuple(Fraction(sum(p[i] for p in verts), k) for i in range(av.n))
    _, gamma = av.reduce(bary)
    return tuple(sorted(tuple(a - b for a, b in zip(p, gamma)) for p in verts))


def periodic_subdivision_check(lift: QuasiPeriodicLift, fundamental_triangulation=None) -> ValidationReport:
    rep = ValidationReport()
    rep.add("quasi_periodic", lift.consistent, "; ".join(lift.violations))
    if not lift.consistent:
        return rep
    av = lift.av
    sub = periodic_subdivision(lift)
    rep.add("periodic", sub.certified and sub.complete, f"cells cover volume {sub.volume}")
    vols = [polytope_volume(c.vertices) for c in sub.cells]
    simplicial = all(len(c.vertices) == av.n + 1 for c in sub.cells)
    rep.add("unimodular", simplicial and all(v == 1 for v in vols), f"cell volumes {[str(v) for v in vols]}")
    rep.artifacts["cells"] = [[list(p) for p in c.vertices] for c in sub.cells]
    rep.artifacts["triangles"] = len(sub.cells)
    if fundamental_triangulation is not None:
        given = sorted(_canonical_cell(av, c) for c in fundamental_triangulation)
        computed = sorted(_canonical_cell(av, c.vertices) for c in sub.cells)
        rep.add("regular", given == computed, f"induced cells {[[list(p) for p in c] for c in computed]}")
        flat = []
        cells = []
        for c in given:
            form = fit_affine(c, [lift(p) for p in c])
            cells.append(PeriodicCell(tuple(c), form))
        near = []
        for k in itertools.product((-1, 0, 1), repeat=av.n):
            g = av.gamma(k)
            near.extend(c.translate(av, g) for c in cells)
        for c in cells:
            for d in near:
                shared = set(c.vertices) & set(d.vertices)
                if c.vertices != d.vertices and len(shared) == av.n and c.form == d.form:
                    flat.append(sorted(shared))
        rep.add("strict_creases", not flat, f"no crease across {flat}")
    return rep


class PeriodicPL:
    """Convex Gamma-quasi-periodic PL function induced by a quasi-periodic lift."""

    def __init__(self, sub: PeriodicSubdivision):
        self.sub = sub
        av = sub.av
        forms = set()
        for c in sub.cells:
            coords = [av.coords(p) for p in c.vertices]
            lo = [min(x[i] for x in coords) for i in range(av.n)]
            hi = [max(x[i] for x in coords) for i in range(av.n)]
            ranges = [range(-_floor(h) - 1, -_floor(l) + 1) for l, h in zip(lo, hi)]
            for k in itertools.product(*ranges):
                forms.add(c.translate(av, av.gamma(k)).form)
        self.forms = sorted(forms)

    @property
    def av(self):
        return self.sub.av

    def __call__(self, x) -> Fraction:
        r, gamma = self.av.reduce(x)
        base = max(frac(f(r)) for f in self.forms)
        return base + self.av.shift(r, gamma)

    @cached_property
    def correction_bounds(self) -> tuple[Fraction, Fraction]:
        """Bounds for psi(x) - x.g.x/2, which is Gamma-periodic."""
        av = self.av
        low = min(self(r) - av.half_q(r) for r in av.residues)
        high = max(c + Fraction(1, 2) * frac(quad(av.ginv, a)) for a, c in self.forms)
        return low, high


def legendre_values(lift: QuasiPeriodicLift, x) -> Fraction:
    """max over w in Z^n of <x, g w> - phi(w), by an exact bounded search."""
    av = lift.av
    lo, hi = lift.correction_range
    x = [frac(c) for c in x]
    w0 = [round(c) for c in x]
    slack = Fraction(1, 2) * frac(quad(av.gram, [a - b for a, b in zip(w0, x)])) + hi - lo
    rad = math.sqrt(float(2 * slack / av.lambda_lo)) + 1
    ranges = [range(math.floor(float(c) - rad), math.ceil(float(c) + rad) + 1) for c in x]
    return max(frac(quad(av.gram, x, w)) - lift(w) for w in itertools.product(*ranges))


def legendre_lift(lift: QuasiPeriodicLift) -> QuasiPeriodicLift:
    """The Legendre dual restricted to Z^n, again quasi-periodic for the same (Gamma, g)."""
    return QuasiPeriodicLift(lift.av, {r: int(legendre_values(lift, r)) for r in lift.av.residues})


@dataclass(frozen=True, order=True)
class QuotientGradedPoint:
    degree: int
    v: tuple
    height: Fraction

    @property
    def x(self):
        return self.v[:-1]

    def label(self) -> str:
        return "(" + ",".join(str(c) for c in self.v) + f")_{self.degree}"


def class_normal_form(degree: int, v, av: PolarizedTropicalAV, psi: Callable) -> QuotientGradedPoint:
    """Canonical representative of a degree-k point modulo the Gamma-action."""
    v = tuple(frac(c) for c in v)
    if any((c * degree).denominator != 1 for c in v):
        raise ValueError(f"{v} is not in (1/{degree})Z^{len(v)}")
    x, y = v[:-1], v[-1]
    h = y - frac(psi(x))
    if h < 0:
        raise ValueError(f"{v} lies below the graph of psi")
    r, gamma = av.reduce(x)
    r = tuple(frac(c) for c in r)
    y0 = y - av.shift(r, gamma)
    return QuotientGradedPoint(degree, r + (y0,), h)


def gamma_orbit(p: QuotientGradedPoint, av: PolarizedTropicalAV, radius: int = 3):
    """Representatives of the class of p for small Gamma-translates."""
    x, y = p.v[:-1], p.v[-1]
    for k in itertools.product(range(-radius, radius + 1), repeat=av.n):
        g = av.gamma(k)
        yield tuple(a + b for a, b in zip(x, g)) + (y + av.shift(x, g),)


class PeriodicRing:
    """Graded pieces of the quotient ring attached to a quasi-periodic lift.

    Heights are measured against psi, the convex PL function induced by the
    Legendre dual of the lift on lattice points.
    """

    enumeration_limit = 200000

    def __init__(self, lift: QuasiPeriodicLift, psi: PeriodicPL | None = None):
        lift.check()
        self.lift = lift
        self.av = lift.av
        if psi is None:
            psi = PeriodicPL(periodic_subdivision(legendre_lift(lift)))
        self.psi = psi

    def normal_form(self, degree: int, v) -> QuotientGradedPoint:
        return class_normal_form(degree, v, self.av, self.psi)

    def classes(self, k: int, max_height=0) -> list[QuotientGradedPoint]:
        """Classes of degree k with height <= max_height, representatives in the fundamental cell."""
        av = self.av
        out = []
        box = av.box(0)
        grids = [[Fraction(i, k) for i in range(lo * k, hi * k + 1)] for lo, hi in box]
        for x in itertools.product(*grids):
            if av.reduce(x)[0] != _norm(x):
                continue
            base = self.psi(x)
            y = Fraction(-(-base * k // 1), k)
            while y - base <= max_height:
                out.append(QuotientGradedPoint(k, x + (y,), y - base))
                y += Fraction(1, k)
        return sorted(out)

    def radius(self, k: int, l: int, t_trunc) -> float:
        lo, hi = self.psi.correction_bounds
        K = k + l
        return math.sqrt(float(2 * K * K * (frac(t_trunc) + hi - lo) / (k * l * self.av.lambda_lo)))

    def multiply(self, a: QuotientGradedPoint, b: QuotientGradedPoint, t_trunc) -> Counter:
        """Sum over all representatives of b of the product point, keeping height < t_trunc."""
        av = self.av
        k, l = a.degree, b.degree
        K = k + l
        t_trunc = frac(t_trunc)
        xa, ya = a.v[:-1], a.v[-1]
        xb, yb = b.v[:-1], b.v[-1]
        rad = self.radius(k, l, t_trunc)
        center = av.coords([p - q for p, q in zip(xa, xb)])
        spread = [rad * math.sqrt(sum(float(c) ** 2 for c in row)) for row in av.Binv]
        ranges = [range(math.floor(float(c) - s) - 1, math.ceil(float(c) + s) + 2) for c, s in zip(center, spread)]
        size = math.prod(len(r) for r in ranges)
        if size > self.enumeration_limit:
            raise EnumerationError(f"{size} translates needed for {a.label()} * {b.label()} (radius {rad:.3g})")
        out = Counter()
        for kk in itertools.product(*ranges):
            g = av.gamma(kk)
            xg = tuple(p + q for p, q in zip(xb, g))
            yg = yb + av.shift(xb, g)
            X = tuple((k * p + l * q) / K for p, q in zip(xa, xg))
            Y = (k * ya + l * yg) / K
            h = Y - self.psi(X)
            if h < t_trunc:
                out[self.normal_form(K, X + (Y,))] += 1
        return out

    def mod_t_basis(self, k: int) -> list[QuotientGradedPoint]:
        return self.classes(k, 0)

    def mul_vectors(self, u: Mapping, w: Mapping, degree_u: int, degree_w: int) -> dict:
        """Bilinear product of two height-zero combinations, modulo t."""
        K = degree_u + degree_w
        out: dict = {}
        for p, cp in u.items():
            for q, cq in w.items():
                for r, m in self.multiply(p, q, Fraction(1, K)).items():
                    out[r] = out.get(r, 0) + cp * cq * m
        return {r: c for r, c in out.items() if c}


@dataclass
class TruncatedRingPresentation:
    max_degree: int
    generators: list  # (name, degree, class)
    hilbert: list
    relations: list  # (degree, {exponent tuple: int})
    monomials: dict = field(default_factory=dict, repr=False)

    def format_relation(self, rel: Mapping) -> str:
        names = [g[0] for g in self.generators]
        return format_polynomial(rel, names)

    def evaluate(self, poly: Mapping) -> dict:
        """Image of an integer combination of generator monomials."""
        out: dict = {}
        for mono, c in poly.items():
            for r, m in self.monomials[tuple(mono)].items():
                out[r] = out.get(r, 0) + c * m
        return {r: c for r, c in out.items() if c}

    def in_relation_space(self, poly: Mapping) -> bool:
        """The stored relations span the whole kernel in each degree, so
        membership is the same as evaluating to zero."""
        if len({self._degree(m) for m in poly}) > 1:
            return False
        return not self.evaluate(poly)

    def _degree(self, mono) -> int:
        return sum(e * g[1] for e, g in zip(mono, self.generators))


def format_polynomial(poly: Mapping, names: Sequence[str]) -> str:
    terms = []
    for mono, c in sorted(poly.items(), key=lambda t: (-sum(t[0]), t[0]), reverse=False):
        body = "".join(n + (f"^{e}" if e > 1 else "") for n, e in zip(names, mono) if e)
        coef = abs(c)
        s = ("" if coef == 1 and body else str(coef)) + (body or "")
        terms.append(("-" if c < 0 else "+", s))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, s in terms[1:]:
        out += f" {sign} {s}"
    return out


def _level(x) -> int:
    d = 1
    for c in x:
        d = d * c.denominator // math.gcd(d, c.denominator)
    return d


def _monomials(degrees: Sequence[int], total: int):
    if not degrees:
        if total == 0:
            yield ()
        return
    d0 = degrees[0]
    for e in range(total // d0, -1, -1):
        for rest in _monomials(degrees[1:], total - e * d0):
            yield (e,) + rest


def ring_presentation_mod_t(lift: QuasiPeriodicLift, max_degree: int, ring: PeriodicRing | None = None) -> TruncatedRingPresentation:
    """Generators and relations of the height-zero quotient ring up to max_degree."""
    from ._linalg import EchelonBasis

    ring = ring or PeriodicRing(lift)
    names = "abcdefghijklmnopqrstuvwxyz"
    gens: list = []
    hilbert = []
    vecs: dict = {}

    def mono_vec(m):
        if m in vecs:
            return vecs[m]
        i = next(j for j, e in enumerate(m) if e)
        rest = tuple(e - (j == i) for j, e in enumerate(m))
        g = gens[i]
        if not any(rest):
            v = {g[2]: 1}
        else:
            v = ring.mul_vectors(mono_vec(rest), {g[2]: 1}, sum(e * gg[1] for e, gg in zip(rest, gens)), g[1])
        vecs[m] = v
        return v

    relations = []
    for k in range(1, max_degree + 1):
        basis = ring.mod_t_basis(k)
        hilbert.append(len(basis))
        index = {p: i for i, p in enumerate(basis)}
        eb = EchelonBasis()
        for m in _monomials([g[1] for g in gens], k) if gens else []:
            m = tuple(m)
            eb.add({index[p]: c for p, c in mono_vec(m).items()})
        cands = sorted(basis, key=lambda p: (-_level(p.x), p.v))
        for p in cands:
            if eb.rank == len(basis):
                break
            if eb.add({index[p]: 1}):
                gens.append((names[len(gens)], k, p))
                vecs = {tuple(list(m) + [0]): v for m, v in vecs.items()}
        # relations among all generator monomials of degree k
        ms = [tuple(m) for m in _monomials([g[1] for g in gens], k)]
        cols = [mono_vec(m) for m in ms]
        rows = [[c.get(p, 0) for c in cols] for p in basis]
        for vec in nullspace(rows, len(ms)) if ms else []:
            if not any(vec):
                continue
            prim = primitive(vec)
            relations.append((k, {m: c for m, c in zip(ms, prim) if c}))
    all_monos = {}
    for k in range(1, max_degree + 1):
        for m in _monomials([g[1] for g in gens], k):
            all_monos[tuple(m)] = mono_vec(tuple(m))
    return TruncatedRingPresentation(max_degree, gens, hilbert, relations, all_monos)


def periodic_central_fiber(sub: PeriodicSubdivision) -> list[dict]:
    """One component per vertex class; the dual cell of w, in gradient
    coordinates, is the lattice polygon spanned by the gradients of the cells around w."""
    out = []
    for w in sub.vertex_classes:
        star = sub.star(w)
        grads = sorted({c.form.gradient for c in star})
        surf = None
        if sub.av.n == 2:
            try:
                surf = surface_id(grads).name
            except StructuralError as exc:
                surf = f"singular: {exc}"
        out.append({"label": list(w), "compact": True, "degree": len(star), "surface": surf})
    return out
