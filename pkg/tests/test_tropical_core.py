import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from tropants.reports import StructuralError
from tropants.tropical_core import (
    LiftFunction,
    check_unimodular_regular,
    dual_cell,
    induced_subdivision,
    lattice_points,
    legendre_transform,
    normalized_volume,
    polytope_volume,
)


def hull_oracle(points):
    """Lattice points of conv(points) by floating-point half-space tests."""
    pts = np.array(points, dtype=float)
    if pts.shape[1] == 1:
        lo, hi = pts.min(), pts.max()
        inside = [(x,) for x in range(int(lo), int(hi) + 1)]
        return set(inside), {p for p in inside if lo < p[0] < hi}
    hull = ConvexHull(pts)
    lo, hi = pts.min(axis=0).astype(int), pts.max(axis=0).astype(int)
    inside, interior = set(), set()
    for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        s = hull.equations[:, :-1] @ np.array(x, dtype=float) + hull.equations[:, -1]
        if np.all(s <= 1e-9):
            inside.add(x)
            if np.all(s < -1e-9):
                interior.add(x)
    return inside, interior


def lower_hull_oracle(lift):
    """Cells of the lower hull, from scipy's hull of the lifted points."""
    pts = np.array(lift.lifted(), dtype=float)
    hull = ConvexHull(pts)
    cells = set()
    for eq in hull.equations:
        if eq[-2] < -1e-9:
            on = np.where(np.abs(pts @ eq[:-1] + eq[-1]) < 1e-9)[0]
            cells.add(tuple(sorted(int(i) for i in on)))
    return cells


# -- lattice points and volumes ----------------------------------------------------


@pytest.mark.parametrize(
    "poly, total, interior",
    [
        ([(0, 0), (1, 0), (0, 1), (1, 1)], 4, set()),
        ([(1, 0), (0, 1), (2, 3), (3, 2)], 8, {(1, 1), (2, 2)}),
        ([(0,), (3,)], 4, {(1,), (2,)}),
    ],
)
def test_lattice_points_examples(poly, total, interior):
    inside, inner = hull_oracle(poly)
    assert len(inside) == total and inner == interior
    lp = lattice_points(poly)
    assert set(lp.points) == inside
    assert set(lp.interior) == interior
    assert len(lp.boundary) == total - len(interior)


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=7, unique=True))
def test_lattice_points_match_float_hull(pts):
    if np.linalg.matrix_rank(np.array(pts[1:]) - np.array(pts[0])) < 2:
        return
    inside, inner = hull_oracle(pts)
    lp = lattice_points(pts)
    assert set(lp.points) == inside and set(lp.interior) == inner


@pytest.mark.parametrize(
    "simplex, vol",
    [
        ([(0, 0), (1, 0), (0, 1)], 1),
        ([(0, 0), (1, 0), (0, 2)], 2),
        ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 1),
    ],
)
def test_normalized_volume_examples(simplex, vol):
    got = normalized_volume(range(len(simplex)), simplex)
    assert got.volume == vol == round(abs(np.linalg.det(np.array(simplex[1:]) - np.array(simplex[0]))))


def _unimodular(draw_ops, n):
    m = np.eye(n, dtype=int)
    for i, j, s in draw_ops:
        if i % n != j % n:
            m[i % n] += s * m[j % n]
        else:
            m[i % n] *= -1
    return m


@given(
    st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=3),
    st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)), max_size=6),
    st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)),
)
def test_normalized_volume_gl_invariance(vectors, ops, shift):
    simplex = [(0, 0, 0)] + vectors
    m = _unimodular(ops, 3)
    image = [tuple(int(x) for x in m @ np.array(p) + np.array(shift)) for p in simplex]
    assert normalized_volume(range(4), simplex).volume == normalized_volume(range(4), image).volume


# -- induced subdivisions ---------------------------------------------------------------


def test_flat_lift_one_cell():
    sub = induced_subdivision(LiftFunction(((0,), (1,), (2,)), (0, 0, 0)))
    assert sub.cells == ((0, 2),)


def test_crease_two_cells():
    sub = induced_subdivision(LiftFunction(((0,), (1,), (2,)), (1, 0, 1)))
    assert sub.cells == ((0, 1), (1, 2))


def test_genus2_eight_triangles(genus2):
    lift, tri, _ = genus2
    sub = induced_subdivision(lift)
    assert set(sub.cells) == lower_hull_oracle(lift)
    assert len(sub.cells) == 8
    assert sorted(sub.cells) == sorted(tuple(sorted(c)) for c in tri)


@given(st.lists(st.integers(0, 6), min_size=9, max_size=9))
def test_subdivision_volume_bookkeeping(values):
    support = tuple(itertools.product(range(3), repeat=2))
    lift = LiftFunction(support, tuple(values))
    sub = induced_subdivision(lift)
    hull_vol = ConvexHull(np.array(support, dtype=float)).volume * 2
    assert math.isclose(sum(sub.volumes()), hull_vol)
    assert sum(sub.volumes()) == polytope_volume(support)
    fine = induced_subdivision(lift, triangulate=True)
    assert sum(fine.volumes()) == polytope_volume(support)


# -- unimodularity and regularity --------------------------------------------------------


def test_check_unimodular_regular_1d():
    tri = [(0, 1), (1, 2)]
    rep = check_unimodular_regular(LiftFunction(((0,), (1,), (2,)), (1, 0, 1)), tri)
    assert rep.ok
    flat = check_unimodular_regular(LiftFunction(((0,), (1,), (2,)), (0, 0, 0)), tri)
    assert not flat.checks["strict_creases"]


def test_genus2_passes(genus2):
    lift, tri, _ = genus2
    assert check_unimodular_regular(lift, tri).ok


def test_corrupted_genus2_fails_regularity(genus2):
    lift, tri, _ = genus2
    bad = lift.with_value((1, 1), 3)
    rep = check_unimodular_regular(bad, tri)
    assert not rep.checks["regular"]
    assert any("induced subdivision" in m for m in rep.messages)


def test_non_triangulation_rejected(genus2):
    lift, tri, _ = genus2
    with pytest.raises(StructuralError):
        check_unimodular_regular(lift, tri[:-1])


# -- Legendre transform ----------------------------------------------------------------


def test_legendre_two_point():
    psi = legendre_transform(LiftFunction(((0,), (1,)), (0, 0)))
    for v in range(-3, 4):
        assert psi((v,)) == max(0, v)
    left = dual_cell(LiftFunction(((0,), (1,)), (0, 0)), None, (0,))
    assert left.vertices == ((0,),) and left.rays == ((-1,),) and not left.compact
    assert psi.cell((1,)).rays == ((1,),)


def test_legendre_node_slopes():
    # phi(v) = v^2 on [-2, 2], g = (2); the direct max puts the creases at
    # half-integers, with slope 2m on [m - 1/2, m + 1/2]
    support = tuple((v,) for v in range(-2, 3))
    lift = LiftFunction(support, tuple(v * v for (v,) in support))
    psi = legendre_transform(lift, [[2]])
    xs = [Fraction(j, 8) for j in range(-20, 21)]
    assert [psi((x,)) for x in xs] == [max(2 * x * w - w * w for w in range(-2, 3)) for x in xs]
    for m in range(-1, 2):
        lo, hi = Fraction(2 * m - 1, 2), Fraction(2 * m + 1, 2)
        assert psi((hi,)) - psi((lo,)) == 2 * m
    assert [c.vertices for c in psi.cells if c.compact] == [((Fraction(-3, 2),), (Fraction(-1, 2),)), ((Fraction(-1, 2),), (Fraction(1, 2),)), ((Fraction(1, 2),), (Fraction(3, 2),))]


def test_genus2_dual_cells(genus2):
    lift, _, gram = genus2
    psi = legendre_transform(lift, gram)
    cells = psi.maximal_cells
    assert len(cells) == 8
    assert len([c for c in cells if c.compact]) == 2
    pent = dual_cell(lift, gram, (1, 1))
    assert pent.compact and len(pent.vertices) == 5
    assert not dual_cell(lift, gram, (1, 0)).compact
    assert psi.verify_convexity().ok


def test_duality_pairing(genus2):
    lift, _, gram = genus2
    psi = legendre_transform(lift, gram)
    sub = induced_subdivision(lift)
    vertices = {sub.points[i] for i in sub.vertex_ids}
    assert len(psi.maximal_cells) == len(vertices)
    samples = {v for c in psi.cells for v in c.vertices}
    for c in psi.maximal_cells:
        for v in samples:
            gap = psi(v) + lift(c.label) - sum(a * b for a, b in zip(v, c.gradient))
            assert gap >= 0
            assert (gap == 0) == (v in c.vertices)


@given(st.lists(st.integers(0, 5), min_size=9, max_size=9))
def test_legendre_convex_and_counts(values):
    support = tuple(itertools.product(range(3), repeat=2))
    lift = LiftFunction(support, tuple(values))
    psi = legendre_transform(lift)
    assert psi.verify_convexity().ok
    sub = induced_subdivision(lift)
    assert len(psi.maximal_cells) == len(sub.vertex_ids)
