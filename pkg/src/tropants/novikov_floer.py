"""Novikov scalars, the finiteness condition for sections, and Floer chords.

A section f = sum c_v z^v over an open convex U is described by a
piecewise-affine valuation profile val(c_v) = a + w.v on cones. It is a
section iff for every b in U and every C only finitely many v satisfy
val(c_v) - b.v <= C. On a cone generated by rays u this holds iff
(w - b).u > 0 for all rays and all b in U; since b -> (w - b).u is affine
with nonzero gradient, positivity on the open set is the same as
non-negativity on its closure, i.e. at the vertices of U together with
u.d <= 0 for the recession directions d of U.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._linalg import dot, frac, inertia, is_positive_definite, matvec, nullspace, primitive, quad, rank, solve
from .reports import CheckResult, StructuralError


class NovikovScalar:
    """Finite Novikov series sum a_r q^r, correct modulo q^trunc (trunc None = exact)."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=(), trunc=None):
        trunc = None if trunc is None else frac(trunc)
        acc: dict = {}
        for r, c in dict(terms).items() if isinstance(terms, dict) else terms:
            r, c = frac(r), frac(c)
            acc[r] = acc.get(r, 0) + c
        self.terms = tuple(sorted((r, c) for r, c in acc.items() if c and (trunc is None or r < trunc)))
        self.trunc = trunc

    @classmethod
    def monomial(cls, r=0, c=1, trunc=None) -> "NovikovScalar":
        return cls([(r, c)], trunc)

    @classmethod
    def coerce(cls, x) -> "NovikovScalar":
        return x if isinstance(x, NovikovScalar) else cls([(0, x)])

    def val(self):
        return self.terms[0][0] if self.terms else math.inf

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @staticmethod
    def _min(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        other = NovikovScalar.coerce(other)
        return NovikovScalar(list(self.terms) + list(other.terms), self._min(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar([(r, -c) for r, c in self.terms], self.trunc)

    def __sub__(self, other):
        return self + (-NovikovScalar.coerce(other))

    def __rsub__(self, other):
        return NovikovScalar.coerce(other) - self

    def __mul__(self, other):
        other = NovikovScalar.coerce(other)

        def shifted(t, v):
            return None if t is None or v == math.inf else t + v

        trunc = self._min(shifted(self.trunc, other.val()), shifted(other.trunc, self.val()))
        out = [(r1 + r2, c1 * c2) for r1, c1 in self.terms for r2, c2 in other.terms]
        return NovikovScalar(out, trunc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NovikovScalar.coerce(other)
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"{c}*q^{r}" for r, c in self.terms)
        return f"NovikovScalar({body}{'' if self.trunc is None else f' mod q^{self.trunc}'})"


def nov_add(a: NovikovScalar, b: NovikovScalar) -> NovikovScalar:
    return a + b


def nov_mul(a: NovikovScalar, b: NovikovScalar) -> NovikovScalar:
    return a * b


@dataclass(frozen=True)
class Piece:
    """val(c_v) = a + w.v (+ v.Q.v/2) for lattice points v of the cone over ``cone_rays``."""

    cone_rays: tuple
    a: Fraction
    w: tuple
    quad: tuple | None = None

    def value(self, v) -> Fraction:
        out = self.a + dot(self.w, v)
        if self.quad is not None:
            out += Fraction(1, 2) * quad(self.quad, v)
        return out


@dataclass(frozen=True)
class ValuationSpec:
    pieces: tuple
    exceptional: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.pieces[0].w)

    @classmethod
    def from_json(cls, data: dict) -> "ValuationSpec":
        pieces = []
        for p in data["pieces"]:
            q = p.get("quad")
            pieces.append(
                Piece(
                    tuple(tuple(int(x) for x in r) for r in p["cone_rays"]),
                    frac(p.get("a", 0)),
                    tuple(frac(x) for x in p["w"]),
                    None if q is None else tuple(tuple(frac(x) for x in r) for r in q),
                )
            )
        spec = cls(tuple(pieces), tuple(tuple(e) for e in data.get("exceptional", ())))
        validate_spec(spec)
        return spec


def validate_spec(spec: ValuationSpec) -> None:
    if not spec.pieces:
        raise StructuralError("valuation spec has no pieces")
    n = spec.dim
    for i, p in enumerate(spec.pieces):
        if not p.cone_rays or any(len(r) != n for r in p.cone_rays) or len(p.w) != n:
            raise StructuralError(f"piece {i}: cone rays and slope must live in dimension {n}")
        if any(not any(r) for r in p.cone_rays):
            raise StructuralError(f"piece {i}: zero ray")
        if rank(p.cone_rays) != n:
            raise StructuralError(f"piece {i}: cone is not full-dimensional")
        if p.quad is not None and not is_positive_definite(p.quad):
            raise StructuralError(f"piece {i}: quadratic part must be positive definite")


@dataclass(frozen=True)
class Region:
    vertices: tuple
    rays: tuple = ()
    open: bool = True

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        return cls(
            tuple(tuple(frac(x) for x in v) for v in data["vertices"]),
            tuple(tuple(frac(x) for x in r) for r in data.get("rays", ())),
            bool(data.get("open", True)),
        )

    def interior_samples(self, k: int = 4) -> list[tuple]:
        """Points of the open region near every vertex and far along every ray."""
        n = len(self.vertices[0])
        c = [sum(v[i] for v in self.vertices) / len(self.vertices) for i in range(n)]
        for r in self.rays:
            c = [x + y for x, y in zip(c, r)]
        out = [tuple(c)]
        for v in self.vertices:
            out.append(tuple(x + (y - x) / k for x, y in zip(v, c)))
        for r in self.rays:
            for s in (4, 16):
                out.append(tuple(x + s * y for x, y in zip(c, r)))
        return out


@dataclass
class MembershipResult:
    ok: bool
    certificate: list = field(default_factory=list)  # (piece, ray, vertex or ray of U, value)

    def __bool__(self):
        return self.ok


def section_membership(spec: ValuationSpec, U: Region) -> MembershipResult:
    validate_spec(spec)
    cert = []
    for i, p in enumerate(spec.pieces):
        if p.quad is not None:
            continue  # positive definite growth beats every linear pairing
        for u in p.cone_rays:
            for b in U.vertices:
                val = dot([x - y for x, y in zip(p.w, b)], u)
                if val < 0:
                    cert.append((i, u, ("vertex", b), val))
            for d in U.rays:
                val = -dot(u, d)
                if val < 0:
                    cert.append((i, u, ("ray", d), val))
    return MembershipResult(not cert, cert)


def _cone_halfspaces(rays, n):
    rays = [tuple(r) for r in rays]
    if n == 1:
        cands = [(1,), (-1,)]
    else:
        cands = set()
        for sub in itertools.combinations(rays, n - 1):
            ns = nullspace([list(map(frac, r)) for r in sub])
            if len(ns) == 1:
                u = primitive(ns[0])
                cands.add(u)
                cands.add(tuple(-x for x in u))
    return [u for u in cands if all(dot(u, r) >= 0 for r in rays)]


def in_cone(v, rays, halfspaces=None) -> bool:
    hs = halfspaces if halfspaces is not None else _cone_halfspaces(rays, len(v))
    return all(dot(u, v) >= 0 for u in hs)


_GRIDS: dict = {}


def _grid(n: int, R: int):
    key = (n, R)
    if key not in _GRIDS:
        axes = np.arange(-R, R + 1, dtype=np.int64)
        pts = np.stack(np.meshgrid(*([axes] * n), indexing="ij"), axis=-1).reshape(-1, n)
        _GRIDS[key] = (pts, np.abs(pts).max(axis=1))
    return _GRIDS[key]


def _common_den(values) -> int:
    d = 1
    for x in values:
        d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def oracle_counts(spec: ValuationSpec, b, C, radii=(10, 20, 40)) -> list[int]:
    """Brute force: #{v in box(R) : val(c_v) - b.v <= C} for growing R.

    Integer arithmetic after clearing denominators, vectorised over the box.
    """
    n = spec.dim
    pts, norm = _grid(n, max(radii))
    b = [frac(x) for x in b]
    hit = np.zeros(len(pts), dtype=bool)
    taken = np.zeros(len(pts), dtype=bool)
    for p in spec.pieces:
        hs = _cone_halfspaces(p.cone_rays, n)
        mask = ~taken
        for u in hs:
            mask &= pts @ np.array(u, dtype=np.int64) >= 0
        taken |= mask
        qvals = [x for r in (p.quad or ()) for x in r]
        D = 2 * _common_den([p.a, frac(C)] + list(p.w) + b + qvals)
        lin = np.array([int((x - y) * D) for x, y in zip(p.w, b)], dtype=np.int64)
        val = int(p.a * D) + pts @ lin
        if p.quad is not None:
            Q = np.array([[int(x * D / 2) for x in r] for r in p.quad], dtype=np.int64)
            val = val + np.einsum("ij,jk,ik->i", pts, Q, pts)
        hit |= mask & (val <= int(frac(C) * D))
    return [int((hit & (norm <= r)).sum()) for r in radii]


def brute_force_membership(spec: ValuationSpec, U: Region, C_samples=(0, 1), radii=(10, 20, 40)) -> bool:
    """Heuristic oracle: counts stabilise between the two largest boxes at every sample."""
    for b in U.interior_samples():
        for C in C_samples:
            counts = oracle_counts(spec, b, C, radii)
            if counts[-1] != counts[-2]:
                return False
    return True


def random_spec(rng: random.Random, n: int) -> tuple[ValuationSpec, Region]:
    """Random simplicial-cone pieces covering a few directions plus a random region."""
    while True:
        rays = []
        for _ in range(n):
            rays.append(tuple(rng.randint(-2, 2) for _ in range(n)))
        if rank(rays) != n:
            continue
        break
    pieces = [Piece(tuple(rays), frac(rng.randint(-2, 2)), tuple(frac(rng.randint(-3, 3)) for _ in range(n)))]
    if rng.random() < 0.3:
        neg = tuple(tuple(-x for x in r) for r in rays)
        pieces.append(Piece(neg, frac(0), tuple(frac(rng.randint(-3, 3)) for _ in range(n))))
    while True:
        verts = [tuple(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(n)) for _ in range(n + 1)]
        if rank([[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]) == n:
            break
    ur = []
    if rng.random() < 0.3:
        ur = [tuple(rng.randint(-1, 1) for _ in range(n))]
        ur = [r for r in ur if any(r)]
    spec = ValuationSpec(tuple(pieces))
    region = Region(tuple(verts), tuple(ur), True)
    # Only keep well-conditioned instances: every sampled pairing is at least
    # 1/2 away from zero, and the samples see a violation whenever one exists.
    # Otherwise the finite boxes cannot tell the two cases apart.
    samples = region.interior_samples()
    for p in pieces:
        for u in p.cone_rays:
            margins = [dot([x - y for x, y in zip(p.w, b)], u) for b in samples]
            if any(abs(m) < Fraction(1, 2) for m in margins):
                return random_spec(rng, n)
            exact = all(dot([x - y for x, y in zip(p.w, v)], u) >= 0 for v in verts) and all(
                dot(u, d) <= 0 for d in ur
            )
            if exact != all(m > 0 for m in margins):
                return random_spec(rng, n)
    return spec, region


def punctured_disc_report(rates=(-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2)) -> dict:
    """U = (-inf, 0) in dimension one.

    A section needs sub-linear growth towards +inf (slope >= 0 there) and
    super-linear decay towards -inf: no linear profile on v <= 0 passes,
    a positive definite quadratic one always does.
    """
    U = Region(((Fraction(0),),), ((Fraction(-1),),))
    rows = []
    ok = True
    for r in rates:
        r = frac(r)
        cases = {
            "quadratic_left": ValuationSpec(
                (Piece(((1,),), Fraction(0), (r,)), Piece(((-1,),), Fraction(0), (Fraction(0),), ((Fraction(2),),)))
            ),
            "linear_left": ValuationSpec((Piece(((1,),), Fraction(0), (r,)), Piece(((-1,),), Fraction(0), (r,)))),
        }
        for name, spec in cases.items():
            exact = section_membership(spec, U).ok
            expected = r >= 0 if name == "quadratic_left" else False
            oracle = brute_force_membership(spec, U)
            ok &= exact == expected == oracle
            rows.append({"rate": str(r), "left": name, "member": exact, "expected": expected, "oracle": oracle})
    return {"ok": ok, "rows": rows}


@dataclass(frozen=True)
class ConvexHamiltonian:
    kind: str
    Q: tuple | None = None
    c: tuple | None = None
    lam: Fraction | None = None
    n: int = 1

    @classmethod
    def quadratic(cls, Q, c=None) -> "ConvexHamiltonian":
        Q = tuple(tuple(frac(x) for x in r) for r in Q)
        n = len(Q)
        if any(Q[i][j] != Q[j][i] for i in range(n) for j in range(n)):
            raise StructuralError("Q must be symmetric")
        c = tuple(frac(x) for x in (c or [0] * n))
        return cls("quadratic", Q, c, None, n)

    @classmethod
    def disc(cls, lam, n: int = 1) -> "ConvexHamiltonian":
        lam = frac(lam)
        if lam <= 0:
            raise StructuralError("disc Hamiltonian needs lambda > 0")
        return cls("disc", None, None, lam, n)

    @classmethod
    def from_json(cls, data: dict) -> "ConvexHamiltonian":
        if data["kind"] == "quadratic":
            return cls.quadratic(data["Q"], data.get("c"))
        if data["kind"] == "disc":
            return cls.disc(data["lambda"], int(data.get("n", 1)))
        raise StructuralError(f"unknown Hamiltonian kind {data['kind']!r}")

    def __call__(self, b):
        if self.kind == "quadratic":
            return Fraction(1, 2) * quad(self.Q, b) + dot(self.c, b)
        s = sum(float(x) ** 2 for x in b)
        return -float(self.lam) * math.sqrt(1 - s)

    def gradient(self, b):
        if self.kind == "quadratic":
            return [x + y for x, y in zip(matvec(self.Q, b), self.c)]
        s = math.sqrt(1 - sum(float(x) ** 2 for x in b))
        return [float(self.lam) * float(x) / s for x in b]

    def hessian(self, b):
        if self.kind == "quadratic":
            return [list(r) for r in self.Q]
        b = np.array([float(x) for x in b])
        s2 = 1 - b @ b
        return float(self.lam) * ((s2 * np.eye(len(b)) + np.outer(b, b)) / s2 ** 1.5)


@dataclass(frozen=True)
class ChordRecord:
    v: tuple
    b: tuple
    action: object
    index: int | None
    nondegenerate: bool


def enumerate_chords(H: ConvexHamiltonian, v_window: int) -> list[ChordRecord]:
    """One chord per integral v = dH_b in the window |v|_inf <= v_window."""
    n = H.n
    out = []
    if H.kind == "quadratic":
        pos, neg, zero = inertia(H.Q)
        nondeg = zero == 0
        for v in itertools.product(range(-v_window, v_window + 1), repeat=n):
            rhs = [frac(x) - y for x, y in zip(v, H.c)]
            b = solve([list(r) for r in H.Q], rhs)
            if b is None:
                continue
            b = tuple(b)
            action = H(b) - dot(v, b)
            out.append(ChordRecord(tuple(v), b, action, neg if nondeg else None, nondeg))
        return out
    lam = float(H.lam)
    for v in itertools.product(range(-v_window, v_window + 1), repeat=n):
        r = math.sqrt(lam * lam + sum(x * x for x in v))
        b = tuple(x / r for x in v)
        action = H(b) - sum(x * y for x, y in zip(v, b))
        eig = np.linalg.eigvalsh(H.hessian(b))
        out.append(ChordRecord(tuple(v), b, action, int((eig < 0).sum()), bool(np.all(np.abs(eig) > 1e-12))))
    return out


def quadratic_closed_form(H: ConvexHamiltonian, v) -> tuple[tuple, Fraction]:
    """b = Q^-1 (v - c) and A = -(v - c).Q^-1.(v - c)/2."""
    from ._linalg import inverse

    qi = inverse([list(r) for r in H.Q])
    d = [frac(x) - y for x, y in zip(v, H.c)]
    return tuple(matvec(qi, d)), -Fraction(1, 2) * quad(qi, d)


def cf_correspondence_report(H: ConvexHamiltonian, v_window: int, C_samples=(-2, -1, 0), tol: float = 1e-9) -> dict:
    if H.kind != "disc":
        raise StructuralError("the correspondence report needs a disc Hamiltonian")
    n, lam = H.n, float(H.lam)
    chords = enumerate_chords(H, v_window)
    lattice = (2 * v_window + 1) ** n
    bij = len(chords) == lattice and len({c.v for c in chords}) == lattice
    bij = bij and all(sum(x * x for x in c.b) < 1 for c in chords)
    for c in chords:
        g = H.gradient(c.b)
        bij = bij and all(abs(x - y) < 1e-7 for x, y in zip(g, c.v))
    indices = all(c.index == 0 for c in chords)
    bridge = [abs(c.action + sum(x * y for x, y in zip(c.v, c.b))) for c in chords]
    bridge_ok = all(x <= lam + tol for x in bridge)
    closed = all(
        abs(c.action + math.sqrt(lam * lam + sum(x * x for x in c.v))) <= tol for c in chords
    )
    counts = {str(C): sum(1 for c, br in zip(chords, bridge) if -br <= C) for C in C_samples}
    radial = radial_growth_check(H)
    return {
        "chords": len(chords),
        "bijection": bij,
        "all_index_zero": indices,
        "bridge_ok": bridge_ok,
        "bridge_max": max(bridge),
        "action_closed_form": closed,
        "bridge_counts": counts,
        "radial_ok": radial.ok,
        "ok": bij and indices and bridge_ok and closed and radial.ok,
    }


def radial_growth_check(H: ConvexHamiltonian, steps: int = 20, directions: int = 8, tol: float = 1e-6) -> CheckResult:
    """|dH| grows without bound and dH/|dH| tends to the outward normal b/|b|."""
    n = H.n
    rng = np.random.default_rng(0)
    dirs = [np.eye(n)[0]] + [x / np.linalg.norm(x) for x in rng.normal(size=(directions - 1, n))]
    if n == 1:
        dirs = [np.array([1.0]), np.array([-1.0])]
    fails = []
    for e in dirs:
        prev = 0.0
        for j in range(1, steps + 1):
            s = 1 - 2.0 ** (-j)
            g = np.array(H.gradient(list(s * e)))
            norm = float(np.linalg.norm(g))
            if norm <= prev:
                fails.append(("not increasing", tuple(e), j))
            prev = norm
            if np.linalg.norm(g / norm - e) > tol:
                fails.append(("direction", tuple(e), j))
    return CheckResult(not fails, fails)
