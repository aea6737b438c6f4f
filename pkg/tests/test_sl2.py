from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from zstab.sl2 import (
    Sl2Rep,
    VirtualSl2Rep,
    decompose_product,
    deformation_space,
    git_classify,
    git_classify_pair,
    git_classify_sum,
    gl,
    parse_rep,
    rep_subtract,
    s,
    sl,
    weight_decompose,
    weights_of,
)


def test_product_examples():
    assert decompose_product("tensor", s(4), s(2)) == parse_rep("s6+s4+s2")
    assert decompose_product("tensor", s(4), s(2)).dimension == 15
    assert decompose_product("wedge2", s(5)) == parse_rep("s8+s4+s0")
    assert decompose_product("tensor", s(0), s(7)) == s(7)
    with pytest.raises(ValueError):
        decompose_product("tensor", s(1))
    with pytest.raises(ValueError):
        decompose_product("sym3", s(1))


def test_products_of_sums():
    v = s(2) + s(1)
    assert decompose_product("sym2", v).dimension == 5 * 6 // 2
    assert decompose_product("wedge2", v).dimension == 5 * 4 // 2
    two = 2 * s(1)
    assert decompose_product("wedge2", two) == parse_rep("3*s0+s2")
    assert decompose_product("sym2", two) == parse_rep("3*s2+s0")


def test_weight_decompose_examples():
    assert weight_decompose({-2: 1, 0: 1, 2: 1}) == s(2)
    assert weight_decompose({-2: 1, 0: 2, 2: 1}) == parse_rep("s2+s0")
    wedge_weights = Counter(a + b for a, b in combinations(range(-5, 6, 2), 2))
    assert weight_decompose(wedge_weights) == decompose_product("wedge2", s(5))
    with pytest.raises(ValueError):
        weight_decompose({2: 1})
    with pytest.raises(ValueError):
        weight_decompose({2: 1, -2: 1})


def test_subtract_examples():
    a = parse_rep("s8+s4")
    assert rep_subtract(a, a) == VirtualSl2Rep({})
    assert rep_subtract(a, s(4)).to_rep() == s(8)
    tangent = decompose_product("tensor", s(10) + s(6), s(2))
    assert rep_subtract(tangent, rep_subtract(sl(s(6)), s(2)).to_rep()).to_rep() == s(8)
    neg = rep_subtract(s(1), s(2))
    assert not neg.effective
    assert str(neg) == "-s2+s1"
    with pytest.raises(ValueError):
        neg.to_rep()


def test_deformation_spaces():
    v22 = deformation_space("v22")
    assert v22["rep"] == s(8) and v22["dimension"] == 9
    assert deformation_space("v5")["dimension"] == 0
    v14 = deformation_space("v14")
    assert v14["rep"] == parse_rep("s12+s4") and v14["dimension"] == 18
    assert v14["grassmannian_tangent"] == "s12+s10+s8+s6+2*s4"
    with pytest.raises(ValueError):
        deformation_space("v99")


def test_gl_sl_lists():
    assert gl(s(6)) == parse_rep("s12+s10+s8+s6+s4+s2+s0")
    assert gl(s(6)).dimension == 49
    assert sl(s(5)) == parse_rep("s10+s8+s6+s4+s2")
    assert sl(s(5)).dimension == 35


def test_parse_and_format():
    r = parse_rep("s12 + 2*s8")
    assert r.multiplicities == {12: 1, 8: 2}
    assert str(r) == "s12+2*s8"
    assert parse_rep("0") == Sl2Rep()
    with pytest.raises(ValueError):
        parse_rep("t4")


def test_git_classify_examples():
    assert git_classify(4, {"a": 1, "b": 1, "c": 1, "d": 1}) == "stable"
    assert git_classify(4, {"a": 2, "b": 2}) == "strictly_polystable"
    assert git_classify(4, {"a": 3, "b": 1}) == "unstable"
    assert git_classify(4, {"a": 2, "b": 1, "c": 1}) == "strictly_semistable"
    assert git_classify(4, None) == "zero_orbit"
    with pytest.raises(ValueError):
        git_classify(4, {"a": 3})


def test_git_sum_examples():
    distinct12 = {f"p{i}": 1 for i in range(12)}
    assert git_classify_sum(distinct12, {"q0": 1, "q1": 1, "q2": 1, "q3": 1}) == "stable"
    assert git_classify_sum({"a": 6, "b": 6}, {"a": 2, "b": 2}) == "strictly_polystable"
    assert git_classify_sum({"a": 9, "b": 3}, {"c": 4}) == "unstable"
    assert git_classify_sum(None, None) == "zero_orbit"
    assert git_classify_sum(None, {"a": 2, "b": 2}) == "strictly_polystable"
    with pytest.raises(ValueError):
        git_classify_sum({"a": 11}, {"b": 4})


def test_union_rule_versus_hilbert_mumford():
    # x^12 with a quartic with distinct zeros: union has multiplicity 12 > 8,
    # but no point is a heavy zero of both factors, so the pair is stable
    quartic = {"p": 1, "q": 1, "r": 1, "s": 1}
    assert git_classify_sum({"x": 12}, quartic) == "unstable"
    assert git_classify_pair([(12, {"x": 12}), (4, quartic)]) == "stable"
    assert git_classify_pair([(12, {"x": 12}), (4, {"x": 3, "y": 1})]) == "unstable"
    assert git_classify_pair([(12, {"x": 6, "y": 6}), (4, {"x": 2, "y": 2})]) == "strictly_polystable"
    assert git_classify_pair([(12, {"x": 6, "y": 3, "z": 3}), (4, {"x": 2, "y": 2})]) == "strictly_semistable"


@given(st.integers(0, 20))
def test_sym_plus_wedge_is_tensor(k):
    total = decompose_product("sym2", s(k)) + decompose_product("wedge2", s(k))
    assert total == decompose_product("tensor", s(k), s(k))


@given(st.integers(0, 12), st.integers(0, 12))
def test_tensor_matches_weights(k, l):
    t = decompose_product("tensor", s(k), s(l))
    assert t.dimension == (k + 1) * (l + 1)
    w = Counter()
    for a in range(-k, k + 1, 2):
        for b in range(-l, l + 1, 2):
            w[a + b] += 1
    assert weight_decompose(w) == t
    assert weights_of(t) == w


reps = st.dictionaries(st.integers(0, 6), st.integers(1, 3), min_size=1, max_size=3).map(Sl2Rep)


@given(reps)
def test_sym2_wedge2_of_sums(v):
    n = v.dimension
    assert decompose_product("sym2", v).dimension == n * (n + 1) // 2
    assert decompose_product("wedge2", v).dimension == n * (n - 1) // 2
    assert weight_decompose(weights_of(v)) == v


@given(st.dictionaries(st.sampled_from("abcdefgh"), st.integers(1, 5), min_size=1))
def test_single_factor_pair_matches_classify(zeros):
    p = sum(zeros.values())
    assert git_classify_pair([(p, zeros)]) == git_classify(p, zeros)
