from fractions import Fraction as F

import pytest

from ptsmetrics.pts import (Distribution, ModelError, as_fraction, build_interaction_system,
                            classify, disjoint_union, parallel_compose, process_test_product,
                            reachable_states, structure_info, validate_npt, validate_pts)


def small(transitions, states=("a", "b", "c"), actions=("x", "y"), init="a"):
    return validate_pts("p", list(states), list(actions), init, transitions)


def test_distribution_is_canonical_and_hashable():
    d1 = Distribution([("b", F(1, 2)), ("a", F(1, 2))])
    d2 = Distribution([("a", F(1, 2)), ("b", F(1, 2))])
    assert d1 == d2 and hash(d1) == hash(d2)
    assert d1.support == ("a", "b")
    assert d1.total() == 1
    assert Distribution.dirac("a").is_dirac()
    assert not d1.is_dirac()


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("1/3") == F(1, 3)


@pytest.mark.parametrize("transitions, message", [
    ([("a", "x", [("b", F(1, 2)), ("c", F(1, 3))])], "sums to 5/6"),
    ([("a", "x", [("zz", 1)])], "unknown"),
    ([("a", "q", [("b", 1)])], "action"),
    ([("a", "x", [("b", 1)]), ("a", "x", [("b", 1)])], "duplicate"),
    ([("a", "x", [("b", F(-1, 2)), ("c", F(3, 2))])], ""),
])
def test_invalid_systems_are_rejected(transitions, message):
    with pytest.raises(ModelError) as err:
        small(transitions)
    assert message in str(err.value)


def test_bad_init_rejected():
    with pytest.raises(ModelError):
        small([], init="zz")


def test_npt_success_must_be_terminal():
    base = small([("a", "x", [("b", 1)]), ("b", "x", [("c", 1)])])
    with pytest.raises(ModelError):
        validate_npt(base, "b")
    assert validate_npt(base, "c").success == "c"


def test_classification(corpus):
    fig3 = corpus("fig3.pts").systems["fig3"]
    assert classify(fig3).kind == "general"
    det = small([("a", "x", [("b", 1)]), ("a", "y", [("c", 1)])])
    assert classify(det).kind == "fully-nondeterministic"
    prob = small([("a", "x", [("b", F(1, 2)), ("c", F(1, 2))])])
    assert classify(prob).kind == "fully-probabilistic"


def test_structure_info_acyclic_and_cyclic():
    p = small([("a", "x", [("b", 1)]), ("b", "y", [("c", 1)])])
    info = structure_info(p, "a")
    assert info.acyclic and info.depth == 2
    q = small([("a", "x", [("b", 1)]), ("b", "y", [("a", 1)])])
    info = structure_info(q, "a")
    assert not info.acyclic and info.depth == float("inf")
    assert set(reachable_states(q, "b")) == {"a", "b"}


def test_composition_of_zs_and_zt(corpus):
    fig3 = corpus("fig3.pts").systems["fig3"]
    comp = parallel_compose(fig3, fig3, roots=[("zs", "zt")])
    (tr,) = comp.out(("zs", "zt"))
    assert tr.label == "a"
    assert dict(tr.target.items()) == {("zs1", "zt1"): F(1, 2), ("zs1", "zt2"): F(1, 2)}
    # b synchronises only with the zt1 branch
    assert [t.label for t in comp.out(("zs1", "zt1"))] == ["b"]
    assert comp.out(("zs1", "zt2")) == ()


def test_composition_distribution_is_product():
    p = small([("a", "x", [("b", F(1, 3)), ("c", F(2, 3))])])
    comp = parallel_compose(p, p, roots=[("a", "a")])
    (tr,) = comp.out(("a", "a"))
    assert tr.target.total() == 1
    assert tr.target[("b", "c")] == F(2, 9)


def test_interaction_system_marks_success(corpus):
    m = corpus("fig3.pts")
    system = build_interaction_system(m.systems["fig3"], m.systems["o1"], "t")
    assert system.root == ("t", "o1")
    succ = [c for c in system.pts.states if system.is_successful(c)]
    assert succ and all(c.test == "top" for c in succ)
    assert all(system.pts.is_deadlock(c) for c in succ)


def test_process_test_product_is_a_valid_test(corpus):
    m = corpus("fig3.pts")
    o = process_test_product(m.systems["fig3"], "zs", m.systems["o1"])
    assert o.base.is_deadlock(o.success)
    assert structure_info(o.base, o.init).acyclic


def test_disjoint_union_keeps_both_sides():
    p = small([("a", "x", [("b", 1)])])
    u = disjoint_union(p, p)
    assert len(u.states) == 2 * len(p.states)
