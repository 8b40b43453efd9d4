import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropants.fixtures import load
from tropants.periodic_av import (
    PeriodicRing,
    PolarizedTropicalAV,
    QuasiPeriodicLift,
    class_normal_form,
    extend_lift,
    gamma_orbit,
    legendre_lift,
    legendre_values,
    periodic_central_fiber,
    periodic_genus,
    periodic_subdivision,
    periodic_subdivision_check,
    ring_presentation_mod_t,
    theta_exponent_check,
)
from tropants.regress import hilbert_oracle, oracle_legendre
from tropants.reports import StructuralError

F = Fraction


def genus5_formula(v):
    q = 2 * (v[0] ** 2 + v[1] ** 2)
    parity = (v[0] % 2, v[1] % 2)
    return q - {(0, 0): 0, (0, 1): 2, (1, 0): 2, (1, 1): 3}[parity]


@pytest.fixture(scope="module")
def node_ring(node):
    return PeriodicRing(node)


def _triangulation(name):
    return [[tuple(p) for p in c] for c in load(name)["fundamental_triangulation"]]


# -- lifts ------------------------------------------------------------------------


def test_extend_node(node):
    assert extend_lift(node, 3) == {(v,): v * v for v in range(-3, 4)}


def test_extend_genus5(genus5):
    values = extend_lift(genus5, 2)
    assert values == {v: genus5_formula(v) for v in itertools.product(range(-2, 3), repeat=2)}


def test_extend_identity_gamma(genus5):
    values = extend_lift(genus5, 2)
    assert theta_exponent_check(values, genus5.av, (0, 0), 2).ok


def test_flat_lift_not_quasi_periodic():
    av = PolarizedTropicalAV(1, ((1,),), ((2,),))
    flat = QuasiPeriodicLift(av, {(0,): 0, (1,): 0})
    assert not flat.consistent
    assert not periodic_subdivision_check(flat).checks["quasi_periodic"]
    with pytest.raises(StructuralError):
        flat((3,))


def test_odd_gamma_rejected():
    with pytest.raises(StructuralError):
        PolarizedTropicalAV(1, ((1,),), ((1,),))


# -- subdivisions -----------------------------------------------------------------


def test_node_subdivision(node):
    rep = periodic_subdivision_check(node, [[(0,), (1,)]])
    assert rep.ok
    assert rep.artifacts["cells"] == [[[0], [1]]]


def test_genus5_subdivision_as_given(genus5):
    # the bundled values give one volume-4 diamond plus four unimodular triangles
    rep = periodic_subdivision_check(genus5, _triangulation("genus5"))
    assert rep.checks["quasi_periodic"] and rep.checks["periodic"]
    assert not rep.checks["unimodular"] and not rep.checks["regular"]
    assert rep.artifacts["triangles"] == 5
    assert len(_triangulation("genus5")) == 8


def test_genus5_a2_subdivision(genus5_a2):
    rep = periodic_subdivision_check(genus5_a2, _triangulation("genus5_a2"))
    assert rep.ok and rep.artifacts["triangles"] == 8
    sub = periodic_subdivision(genus5_a2)
    assert len(sub.vertex_classes) == 4
    fib = periodic_central_fiber(sub)
    assert [c["surface"] for c in fib] == ["Bl3P2"] * 4
    assert all(c["degree"] == 6 for c in fib)


@pytest.mark.parametrize("triangles, genus", [(8, 5), (2, 2), (4, 3)])
def test_periodic_genus(triangles, genus):
    assert periodic_genus(triangles) == genus


def test_periodic_genus_odd():
    with pytest.raises(ValueError):
        periodic_genus(3)


# -- the Legendre dual ------------------------------------------------------------


@pytest.mark.parametrize("name", ["node", "genus5", "genus5_a2"])
def test_legendre_values_against_brute_force(name):
    lift = QuasiPeriodicLift.from_json(load(name))
    for w in itertools.product(range(-2, 3), repeat=lift.av.n):
        assert legendre_values(lift, w) == oracle_legendre(lift, w)
    dual = legendre_lift(lift)
    assert dual.consistent


# -- classes and products --------------------------------------------------------------


def test_normal_form_examples(node_ring):
    p = node_ring.normal_form(3, (F(2, 3), F(2, 3)))
    assert p.v == (F(2, 3), F(2, 3))
    assert node_ring.normal_form(3, (F(-1, 3), F(1, 3))) == p
    c = node_ring.normal_form(3, (F(1, 3), F(1, 3)))
    assert c.v == (F(1, 3), F(1, 3)) and c.height == 0


@given(st.integers(1, 4), st.integers(-8, 8), st.integers(0, 3))
def test_height_invariance(node_ring, k, i, h):
    av, psi = node_ring.av, node_ring.psi
    x = F(i, k)
    y = F((psi((x,)) * k).__ceil__() + h, k)
    p = node_ring.normal_form(k, (x, y))
    assert p.height == y - psi((x,))
    for q in gamma_orbit(p, av, 3):
        assert class_normal_form(k, q, av, psi) == p


def _multiply_oracle(ring, a, b, radius=4):
    """Products over translates gamma in [-radius, radius], keeping height zero."""
    k, l = a.degree, b.degree
    out = {}
    for g in range(-radius, radius + 1):
        xb = b.v[0] + g
        yb = b.v[1] + ring.av.shift((b.v[0],), (g,))
        X = (k * a.v[0] + l * xb) / (k + l)
        Y = (k * a.v[1] + l * yb) / (k + l)
        if Y == ring.psi((X,)):
            key = ring.normal_form(k + l, (X, Y))
            out[key] = out.get(key, 0) + 1
    return out


def test_node_products(node_ring):
    a = node_ring.normal_form(1, (0, 0))
    b = node_ring.normal_form(2, (F(1, 2), F(1, 2)))
    ab = node_ring.multiply(a, b, F(1, 3))
    assert dict(ab) == _multiply_oracle(node_ring, a, b)
    assert {p.v for p in ab} == {(F(1, 3), F(1, 3)), (F(2, 3), F(2, 3))}
    aa = node_ring.multiply(a, a, F(1, 2))
    assert dict(aa) == _multiply_oracle(node_ring, a, a)
    assert dict(aa) == {node_ring.normal_form(2, (0, 0)): 1, node_ring.normal_form(2, (F(1, 2), F(1, 2))): 2}


@given(st.integers(1, 3), st.integers(0, 5), st.integers(1, 3), st.integers(0, 5), st.integers(0, 1), st.integers(0, 1))
def test_product_symmetric_and_superadditive(node_ring, k, i, l, j, ha, hb):
    ring = node_ring
    a = ring.normal_form(k, (F(i, k), F((ring.psi((F(i, k),)) * k).__ceil__() + ha, k)))
    b = ring.normal_form(l, (F(j, l), F((ring.psi((F(j, l),)) * l).__ceil__() + hb, l)))
    trunc = 2
    ab, ba = ring.multiply(a, b, trunc), ring.multiply(b, a, trunc)
    assert ab == ba
    K = k + l
    for p in ab:
        assert K * p.height >= k * a.height + l * b.height


def test_t_shift_bookkeeping(node_ring):
    a = node_ring.normal_form(1, (0, 0))
    b = node_ring.normal_form(2, (F(1, 2), F(1, 2)))
    tb = node_ring.normal_form(2, (F(1, 2), F(1)))  # t . b
    plain = node_ring.multiply(a, b, 2)
    # one t-step of b in degree 2 is a shift of 2 * (1/2) / 3 in degree 3
    shifted = node_ring.multiply(a, tb, 2 + F(1, 3))
    moved = {node_ring.normal_form(3, p.v[:-1] + (p.v[-1] + F(1, 3),)): m for p, m in plain.items()}
    assert dict(shifted) == moved


# -- presentations ---------------------------------------------------------------------


def test_node_mod_t_basis(node_ring):
    assert [p.v for p in node_ring.mod_t_basis(3)] == [(0, 0), (F(1, 3), F(1, 3)), (F(2, 3), F(2, 3))]


def test_node_presentation(node):
    pres = ring_presentation_mod_t(node, 6)
    assert pres.hilbert == [hilbert_oracle(node, k) for k in range(1, 7)] == [1, 2, 3, 4, 5, 6]
    classes = [(d, p.v) for _, d, p in pres.generators]
    assert classes == [(1, (0, 0)), (2, (F(1, 2), F(1, 2))), (3, (F(1, 3), F(1, 3)))]
    # abc - b^3 - c^2, exponents over (a, b, c)
    assert pres.in_relation_space({(1, 1, 1): 1, (0, 3, 0): -1, (0, 0, 2): -1})
    assert not pres.in_relation_space({(1, 1, 1): 1, (0, 3, 0): -1})
    assert not pres.in_relation_space({(6, 0, 0): 1})


def test_genus5_hilbert(genus5):
    pres = ring_presentation_mod_t(genus5, 2)
    assert pres.hilbert == [hilbert_oracle(genus5, k) for k in (1, 2)]


def test_hilbert_independent_of_domain(genus5_a2):
    data = dict(load("genus5_a2"))
    data["gamma_basis"] = [[2, 0], [2, 2]]
    other = QuasiPeriodicLift.from_json(data)
    a = PeriodicRing(genus5_a2)
    b = PeriodicRing(other)
    assert [len(a.mod_t_basis(k)) for k in (1, 2, 3)] == [len(b.mod_t_basis(k)) for k in (1, 2, 3)]


# -- theta exponents --------------------------------------------------------------------


def test_theta_node(node):
    assert theta_exponent_check(node, node.av, (1,), 5).ok


def test_theta_genus5(genus5):
    assert theta_exponent_check(genus5, genus5.av, (2, 0), 3).ok
    assert theta_exponent_check(genus5, genus5.av, (0, 2), 3).ok


def test_theta_corrupted(node):
    values = extend_lift(node, 6)
    values[(2,)] += 1
    res = theta_exponent_check(values, node.av, (1,), 5)
    assert not res.ok and (1,) in res.failures


def test_theta_non_lattice_gamma(genus5):
    with pytest.raises(ValueError):
        theta_exponent_check(genus5, genus5.av, (1, 0), 2)


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
def test_theta_cocycle(genus5, a, b, c, d):
    av = genus5.av
    g1, g2 = av.gamma((a, b)), av.gamma((c, d))
    both = tuple(x + y for x, y in zip(g1, g2))
    for v in itertools.product(range(-2, 3), repeat=2):
        step1 = av.shift(v, g1)
        step2 = av.shift(tuple(x + y for x, y in zip(v, g1)), g2)
        assert step1 + step2 == av.shift(v, both)
    assert theta_exponent_check(genus5, av, both, 2).ok
