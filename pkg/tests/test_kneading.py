import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import QQ, random_map, random_pisot_mod_one
from lorenz_lab.errors import RequiresSide
from lorenz_lab.kneading import (
    KneadingWord,
    admissibility_check,
    compare_words,
    itinerary,
    kneading_invariant,
    renorm_factorization,
)
from lorenz_lab.renorm import search_renorms
from lorenz_lab.sided import SidedPoint

W = KneadingWord.parse
words = st.tuples(st.text("01", max_size=6), st.text("01", min_size=1, max_size=6))


def test_parse_and_canonical_form():
    assert W("0(10)*") == W("(01)*")
    assert str(W("(0101)*")) == "(01)*"
    assert str(W("01(01)*")) == "(01)*"
    assert str(W("100101(01100101)*")) == "(10010101)*"
    assert W("(1)^∞") == W("(1)*")
    assert W("0110...").truncated
    with pytest.raises(ValueError):
        W("01x")


@given(words)
def test_str_roundtrip(w):
    k = KneadingWord(*w)
    assert W(str(k)) == k


@given(words, st.integers(min_value=0, max_value=20))
def test_shift_and_index(w, n):
    k = KneadingWord(*w)
    assert k.shift(n)[0] == k[n]
    assert k.take(n + 3)[n:] == k.shift(n).take(3)


def test_compare_words():
    assert compare_words(W("(01)*"), W("(01)*")) == 0
    assert compare_words(W("(01)*"), W("(011)*")) == -1
    assert compare_words(W("1(0)*"), W("(10)*")) == -1
    assert compare_words(W("01..."), W("01(1)*")) is None


def test_ex3_kneading_invariant(fmap):
    # [PAPER] k+ = 100101(01100101)^inf, k- = 01100101(100101)^inf
    kp, km = kneading_invariant(fmap("ex3"))
    assert kp == W("100101(01100101)*")
    assert km == W("01100101(100101)*")
    assert admissibility_check(kp, km).verdict == "admissible"


def test_51_kneading_invariant(fmap):
    # [DERIVED] exact sided orbits: c_+ has period 4, c_- period 3
    kp, km = kneading_invariant(fmap("ex51"))
    assert kp == W("(1000)*")
    assert km == W("(010)*")


def test_inadmissible_pair():
    res = admissibility_check(W("(10)*"), W("(01)*"))
    assert res.verdict == "inadmissible" and res.witness == 2


def test_truncated_words_are_undecidable():
    res = admissibility_check(W("1000..."), W("0110..."))
    assert res.verdict in ("undecidable-truncated", "inadmissible")
    assert renorm_factorization(W("1000..."), W("0110..."), 5, 5) == []


@given(st.integers(min_value=0, max_value=10**6))
def test_itineraries_preserve_order(seed):
    rng = random.Random(seed)
    f = random_map(rng)
    xs = sorted({Fraction(rng.randint(1, 999), 1000) for _ in range(6)})
    its = []
    for x in xs:
        try:
            its.append(itinerary(f, SidedPoint(QQ(x)), 12))
        except RequiresSide:
            return
    assert its == sorted(its)


@pytest.mark.parametrize("fid", ["ex51", "exOandD", "ex3", "ex4", "ex5_2", "exCubeRoot2"])
def test_factorizations_match_renormalizations(fmap, fid):
    f = fmap(fid)
    kp, km = kneading_invariant(f)
    facts = {(x.l, x.r) for x in renorm_factorization(kp, km, 8, 8)}
    found = set(search_renorms(f, 8, 8).pairs)
    if kp.truncated or km.truncated:
        assert facts == set()
    else:
        assert facts == found


def test_factorization_blocks(fmap):
    kp, km = kneading_invariant(fmap("ex3"))
    facts = {(x.l, x.r): x for x in renorm_factorization(kp, km, 8, 8)}
    fac = facts[(2, 2)]
    assert fac.w_minus == km.take(2) and fac.w_plus == kp.take(2)


def test_random_pisot_maps_are_admissible():
    rng = random.Random(3)
    done = 0
    while done < 10:
        f = random_pisot_mod_one(rng)
        kp, km = kneading_invariant(f, 200)
        if kp.truncated or km.truncated:
            continue
        assert admissibility_check(kp, km).verdict == "admissible"
        done += 1
