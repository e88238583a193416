"""Equidistance, bisectors, spheres, midpoints, symmetries, polar correspondence."""

from itertools import combinations

import numpy as np
import pytest

from semipolar.apsg import Point, line_through
from semipolar.errors import DimensionMismatch
from semipolar.metric import (
    HyperplaneDescriptor,
    bisector_m,
    bisector_t,
    bisectors_equal_m,
    bisectors_equal_t,
    equidistant,
    midpoint,
    pair_report,
    polar_correspondence_check,
    proportional_difference,
    sphere,
    symmetry_m,
    translation_noninvariance_witness,
)


def P(v, u):
    return Point(tuple(v), tuple(u))


# -- equidistance ----------------------------------------------------------------


def test_equidistance_reflexive_and_reversal(sp_m1_gf3):
    space = sp_m1_gf3
    pts = space.points
    for p1 in pts[:9]:
        for p2 in pts[:9]:
            assert equidistant(space, p1, p2, p1, p2)
            for p3 in pts[:9]:
                for p4 in pts[:9]:
                    fwd = equidistant(space, p1, p2, p3, p4)
                    rev = equidistant(space, p2, p1, p4, p3)
                    assert fwd == rev


def test_equidistance_reversal_law_exhaustive_via_table(sp_m1_gf3):
    t = sp_m1_gf3.value_table
    neg = (-t) % 3
    assert ((t[:, :, None, None] == t[None, None, :, :]) == (
        neg[:, :, None, None] == neg[None, None, :, :]
    )).all()


def test_equidistance_is_an_equivalence_on_pairs(sp_m1_gf3):
    # grouping pairs by their rho value partitions them; equality of values is
    # trivially reflexive/symmetric/transitive, asserted through the groups
    t = sp_m1_gf3.value_table
    groups = {}
    for i in range(27):
        for j in range(27):
            groups.setdefault(int(t[i, j]), set()).add((i, j))
    assert sum(len(g) for g in groups.values()) == 27 * 27
    for val, g in groups.items():
        i, j = next(iter(g))
        assert all(int(t[a, b]) == val for a, b in g)


def test_degenerate_segment_congruence_is_adjacency(sp_m1_gf3):
    space = sp_m1_gf3
    for p1 in space.points:
        for p2 in space.points:
            lhs = equidistant(space, p1, p2, p1, p1)
            assert lhs == space.adjacent(p1, p2)
            swap = equidistant(space, p1, p2, p2, p1)
            assert swap == space.adjacent(p1, p2)


# -- midpoints --------------------------------------------------------------------


def test_midpoint_examples(sp_m1_gf3, sp_m1_gf5):
    assert midpoint(sp_m1_gf3, P((0,), (0, 0)), P((0,), (0, 0))) == P((0,), (0, 0))
    got = midpoint(sp_m1_gf5, P((0,), (0, 0)), P((1,), (0, 0)))
    assert got == P((3,), (0, 0))  # inv(2) = 3 over GF(5)


def test_midpoint_equidistance_property_exhaustive(sp_m1_gf3):
    space = sp_m1_gf3
    for p1 in space.points:
        for p2 in space.points:
            mid = midpoint(space, p1, p2)
            assert equidistant(space, p1, mid, mid, p2)
            m_pts, _ = bisector_m(space, p1, p2)
            assert mid in set(m_pts)


# -- bisectors and spheres -----------------------------------------------------------


def test_bisector_t_trivial_and_empty_cases(sp_m1_gf3):
    space = sp_m1_gf3
    p0 = P((0,), (1, 2))
    pts, desc = bisector_t(space, p0, p0)
    assert len(pts) == 27 and desc.classification() == "all"
    pts, desc = bisector_t(space, P((0,), (0, 0)), P((1,), (0, 0)))
    assert pts == () and desc.classification() == "empty"


def test_bisector_t_hyperplane_case(sp_m1_gf3):
    pts, desc = bisector_t(sp_m1_gf3, P((0,), (1, 0)), P((0,), (0, 0)))
    assert len(pts) == 9
    assert desc.classification() == "hyperplane"


def test_bisector_t_empty_exactly_for_vertical_pairs(sp_m1_gf3):
    space = sp_m1_gf3
    for p1 in space.points:
        for p2 in space.points:
            if p1 == p2:
                continue
            pts, _ = bisector_t(space, p1, p2)
            vertical = p1.u == p2.u
            assert (len(pts) == 0) == vertical
            if not vertical:
                assert len(pts) == 9


def test_bisector_m_always_hyperplane(sp_m1_gf3):
    space = sp_m1_gf3
    for p1 in space.points:
        for p2 in space.points:
            pts, desc = bisector_m(space, p1, p2)
            assert len(pts) == 9
            assert desc.classification() == "hyperplane"


def test_bisector_m_of_equal_pair_is_the_neighborhood(sp_m1_gf3):
    space = sp_m1_gf3
    for p0 in space.points:
        pts, _ = bisector_m(space, p0, p0)
        assert set(pts) == {q for q in space.points if space.adjacent(p0, q)}


def test_sphere_cardinalities_and_membership(sp_m1_gf3):
    space = sp_m1_gf3
    for p1 in space.points:
        for p2 in space.points:
            pts, desc = sphere(space, p1, p2)
            assert len(pts) == 9
            assert p2 in set(pts)
            assert desc.classification() == "hyperplane"
    # contains p1 iff p1 ~ p2 (rho(p1,p1) = 0)
    p1, p2 = P((0,), (1, 0)), P((1,), (0, 1))
    pts, _ = sphere(space, p1, p2)
    assert (p1 in set(pts)) == space.adjacent(p1, p2)


def test_descriptor_sets_match_definitional_sets(sp_m1_gf3):
    space = sp_m1_gf3
    rng = np.random.default_rng(3)
    for _ in range(60):
        i, j = rng.integers(0, 27, 2)
        p1, p2 = space.points[int(i)], space.points[int(j)]
        for fn in (bisector_t, bisector_m, sphere):
            pts, desc = fn(space, p1, p2)
            assert set(desc.members(space)) == set(pts)


def test_descriptor_normalization_identifies_scaled_equations():
    d1 = HyperplaneDescriptor.make(3, (2, 0), 2, 1)
    d2 = HyperplaneDescriptor.make(3, (1, 0), 1, 2)
    assert d1 == d2
    assert HyperplaneDescriptor.make(3, (0, 0), 0, 2).classification() == "empty"
    assert HyperplaneDescriptor.make(3, (0, 0), 0, 0).classification() == "all"


def test_bisectors_and_spheres_on_m2(sp_m2_gf3):
    space = sp_m2_gf3
    rng = np.random.default_rng(9)
    for _ in range(25):
        i, j = rng.integers(0, space.size, 2)
        p1, p2 = space.points[int(i)], space.points[int(j)]
        t_pts, _ = bisector_t(space, p1, p2)
        m_pts, _ = bisector_m(space, p1, p2)
        s_pts, _ = sphere(space, p1, p2)
        assert len(m_pts) == 81 and len(s_pts) == 81
        if p1 == p2:
            assert len(t_pts) == space.size
        elif p1.u == p2.u:
            assert t_pts == ()
        else:
            assert len(t_pts) == 81


# -- equal-bisector criteria -----------------------------------------------------------


def test_translated_pairs_share_t_bisectors(sp_m1_gf3):
    space = sp_m1_gf3
    q = P((1,), (2, 0))
    for p1 in space.points[:6]:
        for p2 in space.points[:6]:
            assert bisectors_equal_t(
                space, (p1, p1.add(q, 3)), (p2, p2.add(q, 3))
            )


def test_doubled_difference_shares_t_bisector(sp_m1_gf3):
    space = sp_m1_gf3
    p1, d = P((0,), (1, 0)), P((1,), (0, 1))
    pair1 = (p1, p1.add(d, 3))
    pair2 = (p1, p1.add(d.scale(2, 3), 3))
    assert proportional_difference(space, pair1, pair2)
    assert bisectors_equal_t(space, pair1, pair2)


def test_unrelated_pairs_generically_unequal_t(sp_m1_gf3):
    space = sp_m1_gf3
    pair1 = (P((0,), (0, 0)), P((0,), (1, 0)))
    pair2 = (P((0,), (0, 0)), P((0,), (0, 1)))
    assert not bisectors_equal_t(space, pair1, pair2)


def test_central_reflection_pairs_share_m_bisectors(sp_m1_gf3):
    space = sp_m1_gf3
    q = P((2,), (1, 1))
    two_q = q.scale(2, 3)
    for p1 in space.points[:6]:
        for p2 in space.points[:6]:
            pair1 = (p1, two_q.sub(p1, 3))
            pair2 = (p2, two_q.sub(p2, 3))
            assert bisectors_equal_m(space, pair1, pair2)


def test_m_bisectors_unequal_when_sums_differ(sp_m1_gf3):
    space = sp_m1_gf3
    pair1 = (P((0,), (0, 0)), P((0,), (1, 0)))
    pair2 = (P((0,), (0, 0)), P((1,), (1, 0)))
    assert not bisectors_equal_m(space, pair1, pair2)
    assert bisectors_equal_m(space, pair1, pair1)


def test_bisector_criteria_never_disagree_sampled(sp_m1_gf3):
    # bisectors_equal_* raise if the set comparison and the closed-form
    # criterion ever disagree; sweep a sample of pair-pairs through both
    space = sp_m1_gf3
    rng = np.random.default_rng(21)
    for _ in range(300):
        i, j, k, l = (int(x) for x in rng.integers(0, 27, 4))
        pair1 = (space.points[i], space.points[j])
        pair2 = (space.points[k], space.points[l])
        bisectors_equal_t(space, pair1, pair2)
        bisectors_equal_m(space, pair1, pair2)


# -- hyperplane symmetries ---------------------------------------------------------------


def test_symmetry_m_of_realized_hyperplane(sp_m1_gf3):
    space = sp_m1_gf3
    p1, p2 = P((0,), (1, 0)), P((2,), (0, 1))
    _, desc = bisector_m(space, p1, p2)
    sym = symmetry_m(space, desc)
    assert sym is not None
    # central symmetry with centre (p1 + p2)/2: swaps p1 and p2, is an involution
    assert sym(p1) == p2 and sym(p2) == p1
    composed = sym.compose(sym)
    assert (composed.perm == np.arange(27)).all()
    mid = midpoint(space, p1, p2)
    assert sym(mid) == mid


def test_symmetry_m_void_for_unrealized_hyperplane(sp_m1_gf3):
    space = sp_m1_gf3
    # m-bisector equations always have alpha = -2 = 1 after normalization by
    # the u0 pivot only when u0 != 0; an equation with alpha = 0 and u0 = 0 is
    # empty or everything and is realized by no pair
    desc = HyperplaneDescriptor.make(3, (0, 0), 0, 1)
    assert symmetry_m(space, desc) is None


def test_translations_stay_inside_t_symmetry_class(sp_m1_gf3):
    # if bisector_t(p1, p2) = H then every translated pair (r, r + (p2 - p1))
    # has the same t-bisector H
    space = sp_m1_gf3
    p1, p2 = P((0,), (1, 0)), P((1,), (2, 1))
    h_pts, _ = bisector_t(space, p1, p2)
    d = p2.sub(p1, 3)
    for r in space.points:
        pts, _ = bisector_t(space, r, r.add(d, 3))
        assert set(pts) == set(h_pts)


# -- the polar correspondence ---------------------------------------------------------


def test_polar_correspondence_exhaustive_m1(sp_m1_gf3):
    space = sp_m1_gf3
    for i, p1 in enumerate(space.points):
        for p2 in space.points[i + 1 :]:
            assert polar_correspondence_check(space, p1, p2)


def test_polar_correspondence_vertical_pair_consistency(sp_m1_gf3):
    # vertical pair: t-bisector empty, and no point is xi-orthogonal to theta
    space = sp_m1_gf3
    p1, p2 = P((0,), (0, 0)), P((1,), (0, 0))
    pts, _ = bisector_t(space, p1, p2)
    assert pts == ()
    assert polar_correspondence_check(space, p1, p2)


def test_polar_correspondence_equal_pair_reduces_to_neighborhood(sp_m1_gf3):
    space = sp_m1_gf3
    p0 = P((1,), (2, 1))
    assert polar_correspondence_check(space, p0, p0)


# -- translation non-invariance ---------------------------------------------------------


def test_translation_noninvariance_witness(sp_m1_gf3):
    got = translation_noninvariance_witness(sp_m1_gf3)
    assert got is not None
    p1, p2, t = got
    assert sp_m1_gf3.rho(p1.add(t, 3), p2.add(t, 3)) != sp_m1_gf3.rho(p1, p2)


# -- reports ------------------------------------------------------------------------------


def test_pair_report_shape(sp_m1_gf3):
    space = sp_m1_gf3
    entries = pair_report(space, space.points[1], space.points[5])
    assert [e["kind"] for e in entries] == ["t", "m", "sphere"]
    for e in entries:
        assert set(e) == {"pair", "kind", "classification", "equation", "cardinality"}
        assert set(e["equation"]) == {"u0", "alpha", "beta"}
        if e["classification"] == "hyperplane":
            assert e["cardinality"] == 9


def test_metric_classifications_require_scalar_space(sp_cross_gf3):
    space = sp_cross_gf3
    pts, desc = bisector_t(space, space.points[0], space.points[1])
    assert desc is None  # defining set still computed
    with pytest.raises(DimensionMismatch):
        pair_report(space, space.points[0], space.points[1])
