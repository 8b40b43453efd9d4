"""Matrix factorizations of W = -z1 z2 z3 and the local models of the pants dga.

Polynomials are dicts {(e1, e2, e3): coefficient} with every exponent
doubled, so half-integer powers stay integral. A ring fixes one invertible
variable (3 unless stated), a degree cap D on the other two and an exponent
window [-N, N] on the invertible one. Matrices are dicts keyed by
(row, column) labels; a label (i, a) is the parity-a summand of E_i.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ._linalg import EchelonBasis, frac
from .reports import CheckResult, StructuralError, ValidationReport


def _half(c) -> int:
    c2 = frac(c) * 2
    if c2.denominator != 1:
        raise ValueError(f"exponent {c} is not in (1/2)Z")
    return int(c2)


class CoefRing:
    """Truncated coefficient ring; ``events`` counts dropped monomials."""

    def __init__(self, D: int = 4, N: int = 6, inv: int | None = 3):
        self.D, self.N, self.inv = D, N, inv
        self.events = 0

    @property
    def invertible(self) -> bool:
        return self.inv is not None

    def admits(self, m) -> bool:
        inv = self.inv or 3
        others = [m[i] for i in range(3) if i != inv - 1]
        if any(e < 0 or e % 2 for e in others):
            return False
        if sum(others) > 2 * self.D:
            return False
        c = m[inv - 1]
        if self.inv is None:
            return 0 <= c <= 2 * self.N and c % 2 == 0
        return -2 * self.N <= c <= 2 * self.N

    def clip(self, poly: dict) -> dict:
        out = {}
        for m, c in poly.items():
            if not c:
                continue
            if self.admits(m):
                out[m] = c
            else:
                self.events += 1
        return out

    def mono(self, e1=0, e2=0, e3=0, coef=1) -> dict:
        m = (_half(e1), _half(e2), _half(e3))
        if not self.admits(m):
            raise ValueError(f"monomial {m} lies outside the ring window")
        return {m: coef}

    def var(self, i: int, power=1) -> dict:
        e = [0, 0, 0]
        e[i - 1] = power
        return self.mono(*e)

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return out

    def scale(self, a: dict, s) -> dict:
        return {m: c * s for m, c in a.items() if c * s}

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for (m1, c1), (m2, c2) in itertools.product(a.items(), b.items()):
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self.clip(out)

    def W(self) -> dict:
        return self.mono(1, 1, 1, -1)


def poly_str(poly: dict) -> str:
    if not poly:
        return "0"
    terms = []
    for m, c in sorted(poly.items()):
        vars_ = [f"z{i + 1}^{Fraction(e, 2)}" for i, e in enumerate(m) if e]
        terms.append("*".join([str(c)] + vars_))
    return " + ".join(terms)


# -- factorizations ----------------------------------------------------------


@dataclass
class MatrixFactorization:
    """Rank one 2-periodic complex O -p-> O -q-> O; p goes even to odd."""

    index: int
    p: dict
    q: dict
    rank: int = 1


def make_E(i: int, ring: CoefRing) -> MatrixFactorization:
    if i not in (1, 2, 3):
        raise ValueError("factorization index must be 1, 2 or 3")
    j, k = i % 3 + 1, (i + 1) % 3 + 1
    e = [0, 0, 0]
    e[j - 1] = e[k - 1] = 1
    return MatrixFactorization(i, ring.var(i), ring.mono(*e, coef=-1))


def verify_mf(E: MatrixFactorization, ring: CoefRing) -> CheckResult:
    before = ring.events
    W = ring.W()
    fails = []
    if ring.mul(E.p, E.q) != W:
        fails.append(f"E{E.index}: p*q != W")
    if ring.mul(E.q, E.p) != W:
        fails.append(f"E{E.index}: q*p != W")
    if ring.events != before:
        fails.append(f"E{E.index}: truncation while multiplying")
    return CheckResult(not fails, fails)


# -- hom complexes ------------------------------------------------------------


def labels(summands) -> list:
    return [(i, a) for i in summands for a in (0, 1)]


@dataclass
class HomElement:
    """Map from the sum of ``source`` factorizations to the sum of ``target``."""

    source: tuple
    target: tuple
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        rows, cols = set(labels(self.target)), set(labels(self.source))
        for (r, c), v in list(self.entries.items()):
            if r not in rows or c not in cols:
                raise StructuralError(f"entry {(r, c)} does not fit Hom({self.source}, {self.target})")
            if not v:
                del self.entries[(r, c)]

    @property
    def parity(self) -> int | None:
        ps = {(r[1] + c[1]) % 2 for r, c in self.entries}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def part(self, parity: int) -> "HomElement":
        return HomElement(
            self.source, self.target, {k: v for k, v in self.entries.items() if (k[0][1] + k[1][1]) % 2 == parity}
        )

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, HomElement)
            and (self.source, self.target) == (other.source, other.target)
            and self.entries == other.entries
        )


def identity(summands, ring: CoefRing) -> HomElement:
    return HomElement(tuple(summands), tuple(summands), {(l, l): ring.mono() for l in labels(summands)})


def differential(summands, ring: CoefRing) -> HomElement:
    ent = {}
    for i in summands:
        E = make_E(i, ring)
        ent[((i, 1), (i, 0))] = E.p
        ent[((i, 0), (i, 1))] = E.q
    return HomElement(tuple(summands), tuple(summands), ent)


def add(f: HomElement, g: HomElement, ring: CoefRing, sign=1) -> HomElement:
    if (f.source, f.target) != (g.source, g.target):
        raise StructuralError("adding maps between different objects")
    ent = dict(f.entries)
    for k, v in g.entries.items():
        ent[k] = ring.add(ent.get(k, {}), ring.scale(v, sign))
    return HomElement(f.source, f.target, ent)


def compose(f: HomElement, g: HomElement, ring: CoefRing) -> HomElement:
    """f after g."""
    if g.target != f.source:
        raise StructuralError(f"cannot compose Hom({f.source}, {f.target}) after Hom({g.source}, {g.target})")
    by_row: dict = {}
    for (r, c), v in g.entries.items():
        by_row.setdefault(r, []).append((c, v))
    ent: dict = {}
    for (r, mid), v in f.entries.items():
        for c, w in by_row.get(mid, ()):
            ent[(r, c)] = ring.add(ent.get((r, c), {}), ring.mul(v, w))
    return HomElement(g.source, f.target, ent)


def scale(f: HomElement, poly: dict, ring: CoefRing) -> HomElement:
    return HomElement(f.source, f.target, {k: ring.mul(poly, v) for k, v in f.entries.items()})


def hom_differential(f: HomElement, ring: CoefRing) -> HomElement:
    """d f = d_target f - (-1)^|f| f d_source, applied to each parity part."""
    Dt, Ds = differential(f.target, ring), differential(f.source, ring)
    out = HomElement(f.source, f.target)
    for par in (0, 1):
        g = f.part(par)
        if g.is_zero():
            continue
        term = add(compose(Dt, g, ring), compose(g, Ds, ring), ring, sign=-((-1) ** par))
        out = add(out, term, ring)
    return out


def contract_E3(ring: CoefRing) -> tuple[HomElement, CheckResult]:
    """Homotopy h with d h + h d = id on E3, built from the inverse of z3."""
    if ring.inv != 3:
        raise StructuralError("contracting E3 needs z3 to be invertible")
    h = HomElement((3,), (3,), {((3, 0), (3, 1)): ring.var(3, -1)})
    D = differential((3,), ring)
    lhs = add(compose(D, h, ring), compose(h, D, ring), ring)
    ok = lhs == identity((3,), ring)
    return h, CheckResult(ok, [] if ok else ["d h + h d != id"])


# -- the signed 2x2 algebra and phi_3 ---------------------------------------------


@dataclass
class SignedAlgebraElement:
    """2x2 matrix in one variable; entries {doubled exponent: coefficient}.

    Entry (i, j) maps the j-th summand to the i-th. Diagonal exponents are
    integers (even), off-diagonal ones half-integers (odd).
    """

    entries: dict

    def __post_init__(self):
        for (i, j), poly in list(self.entries.items()):
            if i not in (1, 2) or j not in (1, 2):
                raise StructuralError(f"bad position {(i, j)}")
            for c2, c in poly.items():
                if c and c2 % 2 != (0 if i == j else 1):
                    raise StructuralError(
                        f"exponent {Fraction(c2, 2)} at {(i, j)} has the wrong parity for that position"
                    )
            if not any(poly.values()):
                del self.entries[(i, j)]

    @classmethod
    def unit(cls, i, j, c, coef=1) -> "SignedAlgebraElement":
        return cls({(i, j): {_half(c): coef}})

    def mul(self, other: "SignedAlgebraElement") -> "SignedAlgebraElement":
        out: dict = {}
        for (i, k), a in self.entries.items():
            for (k2, j), b in other.entries.items():
                if k != k2:
                    continue
                acc = out.setdefault((i, j), {})
                for (e1, c1), (e2, c2) in itertools.product(a.items(), b.items()):
                    acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return SignedAlgebraElement({k: {e: c for e, c in v.items() if c} for k, v in out.items()})

    def swap(self) -> "SignedAlgebraElement":
        """Covering involution: exchange both rows and columns."""
        s = {1: 2, 2: 1}
        return SignedAlgebraElement({(s[i], s[j]): dict(v) for (i, j), v in self.entries.items()})


def phi3(x: SignedAlgebraElement, ring: CoefRing, twisted: bool = False) -> HomElement:
    """The comparison map into End(E1 + E2) over z3 != 0.

    An off-diagonal entry f becomes an odd map with z3^{1/2} f from odd to
    even and z3^{-1/2} f from even to odd. ``twisted`` flips the second
    exponent, a deliberately wrong variant used as a negative control.
    """
    if ring.inv != 3:
        raise StructuralError("phi3 needs z3 to be invertible")
    ent: dict = {}
    low = 1 if twisted else -1
    for (i, j), poly in x.entries.items():
        if i == j:
            p = ring.clip({(0, 0, e): c for e, c in poly.items()})
            ent[((i, 0), (i, 0))] = p
            ent[((i, 1), (i, 1))] = dict(p)
        else:
            ent[((i, 0), (j, 1))] = ring.clip({(0, 0, e + 1): c for e, c in poly.items()})
            ent[((i, 1), (j, 0))] = ring.clip({(0, 0, e + low): c for e, c in poly.items()})
    return HomElement((1, 2), (1, 2), ent)


def signed_window_basis(N: int) -> list[SignedAlgebraElement]:
    """Units times z^c for c in [-N+2, N-2] of the right parity."""
    out = []
    lim = 2 * N - 4
    for i, j in itertools.product((1, 2), repeat=2):
        for c2 in range(-lim, lim + 1):
            if c2 % 2 == (0 if i == j else 1):
                out.append(SignedAlgebraElement({(i, j): {c2: 1}}))
    return out


def _relabel_poly(poly: dict, k: int) -> dict:
    # z_i -> z_{i+k}: the exponent of z_i moves to slot i+k
    out = {}
    for m, c in poly.items():
        new = [0, 0, 0]
        for i in range(3):
            new[(i + k) % 3] = m[i]
        out[tuple(new)] = c
    return out


def relabel(f: HomElement, k: int) -> HomElement:
    """Cyclic substitution z_i -> z_{i+k}, E_i -> E_{i+k}."""

    def lab(l):
        return ((l[0] - 1 + k) % 3 + 1, l[1])

    return HomElement(
        tuple((i - 1 + k) % 3 + 1 for i in f.source),
        tuple((i - 1 + k) % 3 + 1 for i in f.target),
        {(lab(r), lab(c)): _relabel_poly(v, k) for (r, c), v in f.entries.items()},
    )


def phi_leg(x: SignedAlgebraElement, k: int, ring: CoefRing) -> HomElement:
    """phi_k on the leg where z_k is invertible, using E_{k+1} and E_{k+2}."""
    base = CoefRing(ring.D, ring.N, inv=3)
    f = relabel(phi3(x, base), k % 3)
    ring.events += base.events
    return HomElement(f.source, f.target, {key: ring.clip(v) for key, v in f.entries.items()})


def tau12(f: HomElement) -> HomElement:
    """Swap z1 with z2 and E1 with E2."""
    s = {1: 2, 2: 1, 3: 3}

    def lab(l):
        return (s[l[0]], l[1])

    return HomElement(
        tuple(s[i] for i in f.source),
        tuple(s[i] for i in f.target),
        {(lab(r), lab(c)): {(m[1], m[0], m[2]): v for m, v in poly.items()} for (r, c), poly in f.entries.items()},
    )


def _canon(f: HomElement) -> HomElement:
    # put the summands in increasing order so swapped objects compare equal
    return HomElement(tuple(sorted(f.source)), tuple(sorted(f.target)), f.entries)


def tau12_check(ring: CoefRing, window: int | None = None) -> CheckResult:
    N = window if window is not None else ring.N
    fails = []
    for x in signed_window_basis(N):
        lhs = _canon(tau12(phi3(x, ring)))
        rhs = phi3(x.swap(), ring)
        if lhs != rhs:
            fails.append(next(iter(x.entries.items())))
    return CheckResult(not fails, fails)


# -- cohomology over the truncated ring ---------------------------------------------

# doubled C* weights making d homogeneous of weight zero
_SIGMA2 = {(1, 0): 0, (2, 0): 0, (3, 0): 0, (1, 1): 1, (2, 1): 1, (3, 1): -2}


def weight2(row, col, m) -> int:
    return m[2] - (m[0] + m[1]) // 2 + _SIGMA2[row] - _SIGMA2[col]


def _hom_basis(source, target, ring: CoefRing):
    monos = [
        (2 * a, 2 * b, 2 * c)
        for a in range(ring.D + 1)
        for b in range(ring.D + 1 - a)
        for c in range(-ring.N, ring.N + 1)
    ]
    out = []
    for r, c in itertools.product(labels(target), labels(source)):
        for m in monos:
            out.append((r, c, m))
    return out


def _vector(f: HomElement) -> dict:
    return {(r, c, m): v for (r, c), poly in f.entries.items() for m, v in poly.items()}


def _unit(source, target, key) -> HomElement:
    r, c, m = key
    return HomElement(tuple(source), tuple(target), {(r, c): {m: Fraction(1)}})


def window_cohomology(source, target, ring: CoefRing, extra: dict | None = None) -> dict:
    """Interior cohomology of Hom(source, target) per (parity, doubled weight).

    Works on the quotient complex of exponents >= -N modulo exponents > N or
    degree > D. Only cycles supported at degree <= D-2 and |exponent| <= N-2
    are counted, against all boundaries. ``extra`` maps (parity, weight) to
    candidate cycles whose span is compared with the classes found.
    """
    source, target = tuple(source), tuple(target)
    basis = _hom_basis(source, target, ring)
    lim = 2 * ring.N - 4
    blocks: dict = {}
    for key in basis:
        r, c, m = key
        blocks.setdefault((weight2(r, c, m), (r[1] + c[1]) % 2), []).append(key)
    images = {}
    for (w, par), keys in blocks.items():
        if abs(w) <= lim:
            images[(w, par)] = [(k, _vector(hom_differential(_unit(source, target, k), ring))) for k in keys]
    out: dict = {}
    for w in range(-lim, lim + 1):
        for par in (0, 1):
            B = EchelonBasis()
            for _, vec in images.get((w, 1 - par), ()):
                B.add(vec)
            low = [
                (k, vec)
                for k, vec in images.get((w, par), ())
                if k[2][0] + k[2][1] <= 2 * (ring.D - 2) and abs(k[2][2]) <= lim
            ]
            kern = EchelonBasis(track=True)
            cycles = []
            for k, vec in low:
                rel = kern.add(vec)
                if isinstance(rel, dict):
                    cycles.append({low[i][0]: x for i, x in rel.items()})
            base = B.rank
            for z in cycles:
                B.add(z)
            dim = B.rank - base
            entry = {"dim": dim}
            if extra is not None:
                cand = extra.get((par, w), [])
                B2 = EchelonBasis()
                for _, vec in images.get((w, 1 - par), ()):
                    B2.add(vec)
                closed = True
                for z in cand:
                    closed &= not _vector(hom_differential(z, ring))
                    B2.add(_vector(z))
                entry["candidates"] = len(cand)
                entry["span"] = B2.rank - base
                entry["candidates_closed"] = closed
            out[(par, w)] = entry
    return out


def _wkey(w2: int) -> str:
    return str(Fraction(w2, 2))


def quasi_iso_table(ring: CoefRing) -> tuple[dict, bool, bool]:
    """Dimensions of interior cohomology of End(E1 + E2) and the phi3 span test."""
    cand: dict = {}
    for x in signed_window_basis(ring.N):
        (i, j), poly = next(iter(x.entries.items()))
        w = next(iter(poly))
        par = 0 if i == j else 1
        cand.setdefault((par, w), []).append(phi3(x, ring))
    table = window_cohomology((1, 2), (1, 2), ring, cand)
    dims = {"even": {}, "odd": {}}
    match = spanned = True
    for (par, w), e in sorted(table.items(), key=lambda t: (t[0][1], t[0][0])):
        dims["odd" if par else "even"][_wkey(w)] = e["dim"]
        expect = 2 if w % 2 == par else 0
        match &= e["dim"] == expect
        spanned &= e["span"] == e["dim"] == e["candidates"] and e["candidates_closed"]
    return dims, match, spanned


def vanishing_table(ring: CoefRing) -> dict:
    """Interior cohomology of the blocks involving E3; all should vanish."""
    out = {}
    for src, tgt in (((3,), (3,)), ((3,), (1, 2)), ((1, 2), (3,))):
        t = window_cohomology(src, tgt, ring)
        out[f"Hom({','.join(f'E{i}' for i in src)};{','.join(f'E{i}' for i in tgt)})"] = sum(
            e["dim"] for e in t.values()
        )
    return out


# -- full verification --------------------------------------------------------------


def _check_d_squared(ring: CoefRing, summands=(1, 2, 3)) -> CheckResult:
    fails = []
    for key in _hom_basis(summands, summands, ring):
        if key[2][0] + key[2][1] > 2 * (ring.D - 2) or abs(key[2][2]) > 2 * ring.N - 4:
            continue
        f = _unit(summands, summands, key)
        if not hom_differential(hom_differential(f, ring), ring).is_zero():
            fails.append(key)
    return CheckResult(not fails, fails)


def _leibniz(f, g, ring) -> bool:
    lhs = hom_differential(compose(f, g, ring), ring)
    rhs = compose(hom_differential(f, ring), g, ring)
    for par in (0, 1):
        fp = f.part(par)
        if not fp.is_zero():
            rhs = add(rhs, compose(fp, hom_differential(g, ring), ring), ring, sign=(-1) ** par)
    return lhs == rhs


def _check_leibniz(ring: CoefRing, samples: int = 200, seed: int = 0) -> CheckResult:
    """All pairs of matrix units, O-linearity of d, and random monomial pairs."""
    s = (1, 2, 3)
    units = [HomElement(s, s, {(r, c): ring.mono()}) for r in labels(s) for c in labels(s)]
    fails = []
    for f, g in itertools.product(units, repeat=2):
        if not _leibniz(f, g, ring):
            fails.append(("units", list(f.entries), list(g.entries)))
    gens = [ring.var(1), ring.var(2), ring.var(3), ring.var(3, -1)]
    for u in units:
        du = hom_differential(u, ring)
        for m in gens:
            if hom_differential(scale(u, m, ring), ring) != scale(du, m, ring):
                fails.append(("linearity", list(u.entries), m))
    rng = random.Random(seed)
    for _ in range(samples):
        fg = []
        for _ in range(2):
            ent = {}
            for _ in range(rng.randint(1, 3)):
                r, c = rng.choice(labels(s)), rng.choice(labels(s))
                m = ring.mono(rng.randint(0, 1), rng.randint(0, 1), rng.randint(-1, 1), rng.randint(-3, 3))
                ent[(r, c)] = ring.add(ent.get((r, c), {}), m)
            fg.append(HomElement(s, s, ent))
        if not _leibniz(*fg, ring):
            fails.append(("random", fg[0].entries, fg[1].entries))
    return CheckResult(not fails, fails[:10])


def _check_phi(ring: CoefRing, leg: int = 3, twisted: bool = False, coef=None) -> tuple[CheckResult, CheckResult]:
    """Closedness on the window basis and multiplicativity on all basis pairs."""
    work = CoefRing(ring.D, 2 * ring.N + 1, inv=leg)
    basis = signed_window_basis(ring.N)
    if coef is not None:
        basis = [SignedAlgebraElement({k: {e: c * coef for e, c in v.items()} for k, v in x.entries.items()}) for x in basis]

    def phi(x):
        if leg == 3:
            return phi3(x, work, twisted)
        return phi_leg(x, leg, work)

    imgs = [phi(x) for x in basis]
    closed = [i for i, f in enumerate(imgs) if not hom_differential(f, work).is_zero()]
    mult = []
    for (a, fa), (b, fb) in itertools.product(list(enumerate(imgs)), repeat=2):
        if phi(basis[a].mul(basis[b])) != compose(fa, fb, work):
            mult.append((a, b))
    if work.events:
        mult.append("truncation")
    return (
        CheckResult(not closed, [basis[i].entries for i in closed[:10]]),
        CheckResult(not mult, mult[:10]),
    )


def restrict_to_tropical_pants(D: int = 4, N: int = 6) -> dict:
    """Per-leg comparison maps and the vertex stalk."""
    legs = []
    for k in (1, 2, 3):
        ring = CoefRing(D, N, inv=k)
        closed, mult = _check_phi(ring, leg=k)
        legs.append(
            {
                "leg": k,
                "pair": [f"E{(k % 3) + 1}", f"E{((k + 1) % 3) + 1}"],
                "variable": f"z{k}",
                "map": f"phi{k}",
                "closed": closed.ok,
                "multiplicative": mult.ok,
            }
        )
    vertex_ring = CoefRing(D, N, inv=None)
    rank = sum(make_E(i, vertex_ring).rank * 2 for i in (1, 2, 3))
    return {"legs": legs, "vertex": {"rank": rank, "dim": rank * rank}}


def verify_phi3(ring: CoefRing, stable: CoefRing | None = None, novikov_trunc=None) -> ValidationReport:
    if ring.inv != 3:
        raise StructuralError("verify_phi3 needs z3 to be invertible")
    if ring.N < 2 or ring.D < 2:
        raise ValueError("window too small: need D >= 2 and N >= 2 so that the interior is nonempty")
    rep = ValidationReport()
    mf = [verify_mf(make_E(i, ring), ring) for i in (1, 2, 3)]
    rep.add("mf_ok", all(mf), "; ".join(m for r in mf for m in r.failures))
    _, cert = contract_E3(ring)
    rep.add("contraction_ok", cert.ok, "; ".join(cert.failures))
    d2 = _check_d_squared(ring)
    rep.add("d_squared", d2.ok, f"fails on {d2.failures[:3]}")
    lb = _check_leibniz(ring)
    rep.add("leibniz", lb.ok, f"fails on {lb.failures[:3]}")
    closed, mult = _check_phi(ring)
    rep.add("phi3_closed", closed.ok, f"not closed: {closed.failures[:3]}")
    rep.add("phi3_mult", mult.ok, f"not multiplicative on pairs {mult.failures[:3]}")
    dims, match, spanned = quasi_iso_table(ring)
    rep.add("quasi_iso", match, "interior cohomology dimensions differ from 2 per weight of matching parity")
    rep.add("phi3_spans", spanned, "phi3 images do not span the interior cohomology")
    van = vanishing_table(ring)
    rep.add("e3_vanishing", all(v == 0 for v in van.values()), f"nonzero cohomology: {van}")
    rep.add("tau12_ok", tau12_check(ring).ok, "tau12 square does not commute")
    if stable is not None:
        big, _, _ = quasi_iso_table(stable)
        same = all(big[p].get(w) == d for p in dims for w, d in dims[p].items())
        rep.add("stable", same, f"dimensions change when enlarging to D={stable.D}, N={stable.N}")
    if novikov_trunc is not None:
        from .novikov_floer import NovikovScalar

        s = NovikovScalar([(0, 1), (Fraction(1, 2), 3), (1, -2)], novikov_trunc)
        nc, nm = _check_phi(ring, coef=s)
        rep.add("novikov_phi3", nc.ok and nm.ok, "phi3 checks fail with Novikov coefficients")
    rep.artifacts["quasi_iso_dims"] = dims
    rep.artifacts["e3_cohomology"] = van
    rep.artifacts["window"] = {"D": ring.D, "N": ring.N}
    return rep


def mf_report(D: int = 4, N: int = 6, novikov_trunc=None, stability: bool = True) -> dict:
    ring = CoefRing(D, N)
    stable = CoefRing(D + 2, N + 2) if stability else None
    rep = verify_phi3(ring, stable, novikov_trunc)
    out = rep.to_dict()
    out.update(rep.checks)
    out["legs"] = restrict_to_tropical_pants(D, N)
    return out
