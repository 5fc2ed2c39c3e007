import pytest

from bicones import ineq
from bicones.cone import contains, equal, inequalities_from_rays, rays_from_inequalities
from bicones.ineq import KappaFormula, evaluate, kappa
from bicones.lattice import BlowupSpace, DivisorClass
from bicones.pipeline import (ConeMethodConfig, PipelineError, bsj_extremality,
                              cone_method, eff_generators_n_plus_2,
                              eff_inequalities_n_plus_2, expand_orbits,
                              load_fixture, mov_candidate_generators_n_plus_2,
                              mov_inequalities_n_plus_2,
                              movable_candidate_in_effective, orbit_size,
                              orbit_table, pullback_inequalities, verify_table,
                              x235_config, x346_config)

X235 = BlowupSpace(2, 3, 5)


def test_pullback_lifting():
    lifted = pullback_inequalities(X235, eff_inequalities_n_plus_2(2))
    rows = {f.coeffs for f in lifted}
    # d1+d2 >= m_i appears for all 5 points
    for i in range(5):
        assert (1, 1) + tuple(-1 if j == i else 0 for j in range(5)) in rows
    # 2d1+3d2 >= sum_I m_i for every 4-subset of the 5 points
    from itertools import combinations
    for I in combinations(range(5), 4):
        assert (2, 3) + tuple(-1 if j in I else 0 for j in range(5)) in rows
    # lifting d1 >= 0 is idempotent across omissions
    assert sum(1 for f in lifted if f.coeffs == (1, 0, 0, 0, 0, 0, 0)) == 1
    with pytest.raises(PipelineError):
        pullback_inequalities(X235, [(1, 0, 0, 0, 0, 0, 0)])  # wrong width


def test_x235_tables():
    res = cone_method(x235_config())
    assert len(res.effective.generators) == 32
    assert orbit_table(res.effective.generators) == \
        orbit_table(load_fixture("x235-eff").generators)
    assert len(res.movable_candidate.generators) == 142
    assert orbit_table(res.movable_candidate.generators) == \
        orbit_table(load_fixture("x235-mov").generators)
    assert len(orbit_table(res.effective.generators)) == 6
    assert len(orbit_table(res.movable_candidate.generators)) == 17
    assert movable_candidate_in_effective(res)


def test_x346_tables():
    res = cone_method(x346_config())
    assert len(res.effective.generators) == 69
    table = orbit_table(res.effective.generators)
    assert len(table) == 7
    assert table == orbit_table(load_fixture("x346-eff").generators)
    assert movable_candidate_in_effective(res)


def test_orbit_counts_match_expansion():
    table = orbit_table(load_fixture("x235-eff").generators)
    assert sum(orbit_size(r) for r in table) == 32
    assert sorted(
        orbit_size(r) for r in table) == [1, 1, 5, 5, 10, 10]
    table6 = orbit_table(load_fixture("x346-eff").generators)
    assert sum(orbit_size(r) for r in table6) == 69
    assert len(expand_orbits(table)) == 32


def test_verify_table_ids():
    assert verify_table("x235-eff").matched
    assert verify_table("x235-mov").matched
    assert verify_table("x346-eff").matched
    for n in range(1, 6):
        assert verify_table("eff-n+2", n=n).matched
    for n in range(1, 5):
        assert verify_table("mov-n+2", n=n).matched
    with pytest.raises(PipelineError):
        verify_table("nonsense")
    with pytest.raises(PipelineError):
        verify_table("eff-n+2")
    with pytest.raises(PipelineError):
        verify_table("mov-n+2", n=7)


def test_eff_n_plus_2_round_trip_both_ways():
    for n in range(1, 6):
        dim = n + 4
        from_ineqs = rays_from_inequalities(eff_inequalities_n_plus_2(n), dim)
        assert set(from_ineqs.generators) == set(eff_generators_n_plus_2(n))
        from_gens = inequalities_from_rays(eff_generators_n_plus_2(n), dim)
        assert set(from_gens.inequalities) == set(eff_inequalities_n_plus_2(n))
        assert equal(from_ineqs, from_gens)


def test_mov_n_plus_2_candidate_list():
    for n in range(1, 5):
        dim = n + 4
        cone = rays_from_inequalities(mov_inequalities_n_plus_2(n), dim)
        assert set(cone.generators) == set(mov_candidate_generators_n_plus_2(n))


def test_dual_round_trip_on_computed_cones():
    res = cone_method(x235_config())
    for cone in (res.movable_candidate, res.effective):
        again = rays_from_inequalities(cone.inequalities, cone.ambient_dim)
        assert set(again.generators) == set(cone.generators)


def test_table_classes_satisfy_bundle_except_self():
    for config in (x235_config(), x346_config()):
        table_id = config.reference_id
        classes = [DivisorClass.from_row(r)
                   for r in expand_orbits(load_fixture(table_id).generators)]
        for f in config.inequalities:
            if isinstance(f, KappaFormula):
                target = f.target.divisor_class
                for cls in classes:
                    k = kappa(f, cls)
                    if k == 0:
                        continue
                    # a positive bound must name the class itself, exactly once
                    assert k == 1 and target == cls, (f.label, str(cls), k)
            else:
                for cls in classes:
                    assert evaluate(f, cls) >= 0, (f.label, str(cls))


def test_bsj_extremality():
    results = bsj_extremality(2)
    assert results == [(DivisorClass(1, 2, (2,) * 5), True)]
    results3 = bsj_extremality(3)
    assert len(results3) == 6 and all(ok for _, ok in results3)
    assert results3[0][0] == DivisorClass(1, 2, (3, 2, 2, 2, 2, 2))
    # exceptional classes are extremal too
    e1 = DivisorClass(0, 0, (-1, 0, 0, 0, 0))
    assert bsj_extremality(2, [e1]) == [(e1, True)]
    # an interior class is not
    interior = DivisorClass(3, 4, (1, 1, 1, 1, 1))
    assert bsj_extremality(2, [interior]) == [(interior, False)]
    with pytest.raises(PipelineError):
        bsj_extremality(4)


def test_cone_method_gates():
    cfg = x235_config()
    with pytest.raises(PipelineError):
        cone_method(ConeMethodConfig(cfg.space, (), cfg.fixed_classes))
    with pytest.raises(PipelineError):
        cone_method(ConeMethodConfig(cfg.space, cfg.inequalities, ()))


def test_fixture_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("BICONES_FIXTURES", str(tmp_path))
    with pytest.raises(PipelineError):
        load_fixture("x235-eff")
    (tmp_path / "x235-eff.cone").write_text("dim 7\ngenerators 1\n0 0 1 0 0 0 0\n")
    assert load_fixture("x235-eff").generators == ((0, 0, 1, 0, 0, 0, 0),)
