import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import QQ, random_map, random_pisot_mod_one, simulate_matching
from lorenz_lab.cycles import periodic_orbits
from lorenz_lab.errors import NoPointLeftOfC, NoPointRightOfC, NotLorenz, PeriodicityFailed
from lorenz_lab.lorenzmap import iterate_sided, mod_one
from lorenz_lab.renorm import (
    classify_point,
    invariant_set_analysis,
    lem_inv_verdict,
    matching,
    renorm_from_invariant_set,
    search_renorms,
    validate_renorm,
)
from lorenz_lab.sided import MINUS, PLUS, SidedPoint, sided_cmp


def primary(f, nmax=6):
    (o,) = [o for o in periodic_orbits(f, nmax).orbits if o.is_primary]
    return o


@pytest.mark.parametrize(
    "fid,pairs",
    [
        ("ex51", [(4, 3)]),
        ("exOandD", [(2, 2)]),
        ("ex3", [(2, 2), (2, 4), (2, 6), (8, 6)]),
        ("ex4", [(2, 2), (4, 4), (8, 8)]),
        ("ex5_2", [(3, 2), (5, 5)]),
        ("exCubeRoot2", [(2, 2), (2, 4)]),
    ],
)
def test_renorm_sets(fmap, fid, pairs):
    res = search_renorms(fmap(fid), 8, 8)
    assert res.pairs == pairs
    for l in range(2, 9):
        for r in range(2, 9):
            assert ((l, r) in res.failures) != ((l, r) in pairs)


def test_ex5_2_unique_minimum(fmap):
    res = search_renorms(fmap("ex5_2"), 10, 10)
    assert res.unique_minimum == (3, 2)
    assert res.pareto == [(3, 2)]
    assert res.below((3, 2), (5, 5)) and not res.below((5, 5), (3, 2))


def test_ex3_minimum_and_product_order(fmap):
    res = search_renorms(fmap("ex3"), 8, 8)
    assert res.pareto == [(2, 2)] and res.unique_minimum == (2, 2)
    assert res.below((2, 6), (8, 6)) and not res.below((8, 6), (2, 6))
    assert not res.below((2, 2), (2, 2))


def test_renormalization_is_a_lorenz_map_on_uv(fmap):
    f = fmap("ex5_2")
    g = validate_renorm(f, 5, 5)
    assert g.u < f.c < g.v
    assert g.u <= g.g_u < g.g_v <= g.v
    assert g.expanding
    # u = f^r(c_+), v = f^l(c_-)
    assert sided_cmp(iterate_sided(f, SidedPoint(f.c, PLUS), 5), g.u_hat) == 0
    assert sided_cmp(iterate_sided(f, SidedPoint(f.c, MINUS), 5), g.v_hat) == 0
    assert set(g.to_json()) == {"l", "r", "u", "v", "u_approx", "v_approx", "expanding", "boundary_convention", "valid"}


def test_failure_reasons(fmap):
    f = fmap("ex5_2")
    with pytest.raises(ValueError):
        validate_renorm(f, 1, 3)
    res = search_renorms(f, 6, 6)
    assert set(res.failures.values()) <= {"interval-degenerate", "continuity-broken", "image-escape", "order-violated"}
    with pytest.raises(NotLorenz) as ei:
        validate_renorm(f, 2, 2)
    assert ei.value.reason == res.failures[(2, 2)]


def test_doubling_has_no_renormalization():
    f = mod_one(QQ, QQ(2), QQ(0))
    assert search_renorms(f, 6, 6).pairs == []


def test_lem_inv_on_ex4(fmap):
    f = fmap("ex4")
    res = search_renorms(f, 8, 8)
    assert lem_inv_verdict(f, res.get(4, 4)) == "invariant"
    assert lem_inv_verdict(f, res.get(8, 8)) == "not_invariant"


def test_ex5_2_renorm_from_cycle(fmap):
    f = fmap("ex5_2")
    o = primary(f)
    z = [p.value for p in o.points]
    R = renorm_from_invariant_set(f, o.points)
    assert (R.l, R.r) == (5, 5)
    # the two points of the cycle nearest c: z_2 < c < z_3 in the sorted cycle
    left = max(x for x in z if x < f.c)
    right = min(x for x in z if x > f.c)
    assert R.e_minus == left and R.e_plus == right
    g = validate_renorm(f, 5, 5)
    assert R.g is not None and (R.g.u, R.g.v) == (g.u, g.v)
    assert R.invariant and R.witness is None


def test_cube_root_cycle_not_completely_invariant(fmap):
    f = fmap("exCubeRoot2")
    R = renorm_from_invariant_set(f, primary(f, 4).points)
    assert (R.l, R.r) == (2, 2)
    assert not R.invariant and R.failure_depth == 2
    assert sided_cmp(R.witness, SidedPoint(f.c, PLUS)) == 0


def test_invariant_set_errors(fmap):
    f = fmap("ex5_2")
    with pytest.raises(NoPointLeftOfC):
        renorm_from_invariant_set(f, [f.c + (1 - f.c) / 2])
    with pytest.raises(NoPointRightOfC):
        renorm_from_invariant_set(f, [f.c / 2])
    with pytest.raises(PeriodicityFailed):
        renorm_from_invariant_set(f, [f.c / 3, f.c + (1 - f.c) / 3])


def test_51_matching(fmap):
    f = fmap("ex51")
    m = matching(f, 40)
    assert m.found and m.eta == 11  # [DERIVED]
    assert m.next_split == 13
    assert simulate_matching(f, 40) == 11


def test_matching_on_random_maps():
    rng = random.Random(11)
    found = 0
    for _ in range(25):
        f = random_pisot_mod_one(rng)
        m = matching(f, 60)
        sim = simulate_matching(f, 60)
        assert m.eta == sim
        found += sim is not None
    assert found > 0


def test_51_invariant_set_samples(fmap):
    f = fmap("ex51")
    g = validate_renorm(f, 4, 3)
    rep = invariant_set_analysis(f, g, 30, samples=200, seed=51)
    assert rep.lem_inv == "invariant"
    assert rep.samples["F_g"] == 200
    assert set(rep.to_json()) == {"lem_inv", "samples"}


def test_classify_point_kinds(fmap):
    f = fmap("ex5_2")
    g = validate_renorm(f, 5, 5)
    o = primary(f)
    outside = [p for p in o.points if not (g.u < p.value < g.v)]
    for p in outside:
        assert classify_point(f, p, g, 20) == "J_g"
    assert classify_point(f, SidedPoint(f.c, PLUS), g, 0) == "F_g"


@given(st.integers(min_value=0, max_value=10**6))
def test_search_consistent_with_validate(seed):
    rng = random.Random(seed)
    f = random_map(rng)
    res = search_renorms(f, 4, 4)
    for g in res.valid:
        assert g.u < f.c < g.v
        assert g.u <= g.g_u and g.g_v <= g.v
    for p in res.pareto:
        assert not any(res.below(q, p) for q in res.pairs)
    if res.unique_minimum is not None:
        assert res.unique_minimum in res.pareto and len(res.pareto) == 1
