import pytest
from hypothesis import given, settings, strategies as st

from bicones.cone import (ConeError, ConeFormatError, NonPointedError,
                          RationalCone, cone_from_json, cone_to_json, contains,
                          equal, format_cone_text, hilbert_basis,
                          inequalities_from_rays, is_extremal, parse_cone_text,
                          rays_from_inequalities)
from bicones.pipeline import eff_generators_n_plus_2, eff_inequalities_n_plus_2

from oracles import cone_contains, hilbert_basis_bruteforce


def test_rays_quadrant():
    c = rays_from_inequalities([(1, 0), (0, 1)], 2)
    assert c.generators == ((0, 1), (1, 0))


def test_rays_skew():
    c = rays_from_inequalities([(0, 1), (2, -1)], 2)
    assert c.generators == ((1, 0), (1, 2))


def test_rays_eff_x234():
    cone = rays_from_inequalities(eff_inequalities_n_plus_2(2), 6)
    gens = set(cone.generators)
    assert len(gens) == 14
    assert gens == set(eff_generators_n_plus_2(2))
    by_type = {}
    for g in gens:
        by_type.setdefault((g[0], g[1]), []).append(g)
    assert len(by_type[(0, 0)]) == 4   # exceptional
    assert len(by_type[(1, 0)]) == 6   # H1 - E_i - E_j
    assert len(by_type[(0, 1)]) == 4   # H2 - E_i - E_j - E_k


def test_rays_rejects_non_pointed():
    with pytest.raises(NonPointedError):
        rays_from_inequalities([(1, 0)], 2)
    with pytest.raises(NonPointedError):
        rays_from_inequalities([], 2)


def test_facets_quadrant():
    c = inequalities_from_rays([(1, 0), (0, 1)], 2)
    assert c.inequalities == ((0, 1), (1, 0))
    assert c.full_dimensional


def test_facets_eff_x234():
    c = inequalities_from_rays(eff_generators_n_plus_2(2), 6)
    assert set(c.inequalities) == set(eff_inequalities_n_plus_2(2))


def test_facets_single_ray_lower_dimensional():
    c = inequalities_from_rays([(1, 1)], 2)
    assert not c.full_dimensional
    assert c.equations == ((1, -1),)
    assert c.inequalities == ((1, 1),)
    assert contains(c, (2, 2))
    assert not contains(c, (1, 2))
    assert not contains(c, (-1, -1))


def test_facets_need_generators():
    with pytest.raises(ConeError):
        inequalities_from_rays([], 3)


def test_hilbert_basis_skew():
    hb = hilbert_basis(RationalCone.from_generators([(1, 0), (1, 2)], 2))
    assert hb.elements == ((1, 0), (1, 1), (1, 2))


def test_hilbert_basis_quadrant():
    hb = hilbert_basis(RationalCone.from_inequalities([(1, 0), (0, 1)], 2))
    assert hb.elements == ((0, 1), (1, 0))


def test_hilbert_basis_eff_x234_equals_rays():
    cone = rays_from_inequalities(eff_inequalities_n_plus_2(2), 6)
    hb = hilbert_basis(cone)
    assert set(hb.elements) == set(cone.generators)


def test_hilbert_basis_dimension_guard():
    with pytest.raises(ConeError):
        hilbert_basis(RationalCone.from_generators([(1,) + (0,) * 12], 13))


def test_hilbert_basis_lower_dimensional():
    hb = hilbert_basis(RationalCone.from_generators([(2, 2)], 2))
    assert hb.elements == ((1, 1),)


def test_contains_and_extremal():
    quadrant = rays_from_inequalities([(1, 0), (0, 1)], 2)
    assert contains(quadrant, (2, 3))
    assert not contains(quadrant, (-1, 3))
    assert is_extremal(quadrant, (1, 0))
    assert is_extremal(quadrant, (3, 0))
    assert not is_extremal(quadrant, (1, 1))
    assert not is_extremal(quadrant, (0, 0))


def test_equal_round_trip():
    cone = rays_from_inequalities(eff_inequalities_n_plus_2(2), 6)
    back = inequalities_from_rays(cone.generators, 6)
    assert equal(cone, back)


def test_equal_detects_difference():
    a = rays_from_inequalities([(1, 0), (0, 1)], 2)
    b = rays_from_inequalities([(1, 0), (1, -2)], 2)
    assert not equal(a, b)


def test_equal_dimension_mismatch():
    a = RationalCone.from_generators([(1, 0)], 2)
    b = RationalCone.from_generators([(1, 0, 0)], 3)
    with pytest.raises(ConeError):
        equal(a, b)


# Deterministic output, independent of input order -------------------------------

@given(st.permutations(list(eff_inequalities_n_plus_2(2))))
@settings(max_examples=20, deadline=None)
def test_rays_input_order_independent(rows):
    cone = rays_from_inequalities(rows, 6)
    assert cone.generators == tuple(sorted(eff_generators_n_plus_2(2)))


# Round trip on random cones ------------------------------------------------------

ray_entry = st.integers(min_value=-4, max_value=4)


@given(st.lists(st.tuples(*[ray_entry] * 4), min_size=4, max_size=10))
@settings(max_examples=60, deadline=None)
def test_round_trip_random_cones(rays):
    from bicones._linalg import rank
    if rank(rays) < 4:
        return
    try:
        first = inequalities_from_rays(rays, 4)
    except NonPointedError:
        return  # the spanned cone is not pointed; rejected by design
    again = rays_from_inequalities(first.inequalities, 4)
    assert again.generators == first.generators
    third = inequalities_from_rays(again.generators, 4)
    assert third.inequalities == first.inequalities


# Hilbert basis against the brute-force oracle -------------------------------------

hb_entry = st.integers(min_value=0, max_value=3)


@given(st.lists(st.tuples(*[hb_entry] * 3), min_size=2, max_size=5))
@settings(max_examples=40, deadline=None)
def test_hilbert_basis_against_oracle(rays):
    rays = [r for r in rays if any(r)]
    if not rays:
        return
    cone = RationalCone.from_generators(rays, 3)
    hb = hilbert_basis(cone)
    assert list(hb.elements) == hilbert_basis_bruteforce(cone.generators or rays)
    # every element is in the cone; removing one loses its own membership
    for v in hb.elements:
        assert cone_contains(rays, v)


@given(st.lists(st.tuples(*[hb_entry] * 3), min_size=3, max_size=6))
@settings(max_examples=30, deadline=None)
def test_membership_matches_oracle(rays):
    rays = [r for r in rays if any(r)]
    if not rays:
        return
    cone = inequalities_from_rays(rays, 3)
    for v in [(1, 0, 0), (1, 1, 0), (2, 1, 3), (0, 0, 1)]:
        assert contains(cone, v) == cone_contains(rays, v)


# Interchange formats --------------------------------------------------------------

def test_text_round_trip():
    cone = rays_from_inequalities(eff_inequalities_n_plus_2(2), 6)
    text = format_cone_text(cone, comment="effective cone, 4 points")
    back = parse_cone_text(text)
    assert back.generators == cone.generators
    assert back.inequalities == cone.inequalities


def test_json_round_trip():
    cone = rays_from_inequalities([(0, 1), (2, -1)], 2)
    back = cone_from_json(cone_to_json(cone))
    assert back.generators == cone.generators
    assert back.inequalities == cone.inequalities


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ConeFormatError) as err:
        parse_cone_text("dim 2\ngenerators 1\n1 x\n")
    assert err.value.line == 3
    with pytest.raises(ConeFormatError) as err:
        parse_cone_text("generators 1\n1 0\n")
    assert err.value.line == 1
    with pytest.raises(ConeFormatError) as err:
        parse_cone_text("dim 2\nrows 1\n1 0\n")
    assert err.value.line == 2
    with pytest.raises(ConeFormatError) as err:
        parse_cone_text("dim 2\ngenerators 2\n1 0\n")
    assert err.value.line == 3


def test_comments_ignored():
    cone = parse_cone_text("# hello\ndim 2\n# block\ngenerators 1\n1 0  # ray\n")
    assert cone.generators == ((1, 0),)
