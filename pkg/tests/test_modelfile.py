from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ptsmetrics.examples import corpus_files, corpus_text
from ptsmetrics.modelfile import (Model, ParseError, emit_dot, emit_model, eval_expr,
                                  parse_model, rename_states)
from ptsmetrics.pts import validate_pts


def test_empty_file_gives_empty_model():
    m = parse_model("")
    assert m.systems == {} and m.omega == {}
    assert parse_model("# only a comment\n\n").systems == {}


def test_fig1_instantiation():
    m = parse_model(corpus_text("fig1.pts"), {"p": F(1, 10)})
    p = m.systems["fig1"]
    dists = [dict(tr.target.items()) for tr in p.out("s_p")]
    assert {"s1": F(1, 10), "n1": F(9, 10)} in dists
    # with p = 0 the zero branches disappear instead of failing validation
    p0 = parse_model(corpus_text("fig1.pts"), {"p": 0}).systems["fig1"]
    assert [dict(tr.target.items()) for tr in p0.out("s_p")][0] == {"n1": 1}


def test_distribution_sum_error_has_line():
    text = "pts x\nstates s s1 s2\nactions a\ninit s\ntrans s a -> s1: 1/2, s2: 1/3\n"
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert err.value.line == 5
    assert "distribution sums to 5/6" in str(err.value)


@pytest.mark.parametrize("text, line, col", [
    ("pts x\n  bogus 1\n", 2, 3),
    ("states a\n", 1, 1),
    ("pts x\nstates a\nactions b\ninit a\nsuccess a\n", 5, 1),
    ("pts x\nstates a\nactions b\ninit a\ntrans a b\n", 5, 1),
    ("param 1x = 2\n", 1, 1),
    ("pts x\npts x\n", 2, 1),
    ("pts x\nstates a\nactions b\ninit a\ntrans a b -> a: q\n", 5, 17),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert (err.value.line, err.value.col) == (line, col)


def test_literal_zero_is_an_error():
    with pytest.raises(ParseError):
        parse_model("pts x\nstates a b\nactions z\ninit a\ntrans a z -> a: 0, b: 1\n")


def test_decimals_are_exact():
    assert eval_expr("0.1", {})[0] == F(1, 10)
    assert eval_expr("1/2 - eps", {"eps": F(1, 8)}) == (F(3, 8), True)
    with pytest.raises(ValueError):
        eval_expr("__import__('os')", {})
    with pytest.raises(ValueError):
        eval_expr("1/0", {})


def test_unknown_override_rejected():
    with pytest.raises(ParseError):
        parse_model(corpus_text("fig1.pts"), {"q": 1})


def test_omega_validation():
    text = corpus_text("fig3.pts") + "\nomega o1 = 1/2\n"
    assert parse_model(text).omega == {"o1": F(1, 2)}
    with pytest.raises(ParseError):
        parse_model(corpus_text("fig3.pts") + "\nomega o1 = 3/2\n")


@pytest.mark.parametrize("name", corpus_files())
def test_corpus_round_trip(name):
    m = parse_model(corpus_text(name))
    text = emit_model(m)
    again = parse_model(text)
    assert emit_model(again) == text
    assert list(again.systems) == list(m.systems)
    for key in m.systems:
        assert again.systems[key] == m.systems[key]


@pytest.mark.parametrize("name", corpus_files())
def test_dot_is_deterministic(name):
    m = parse_model(corpus_text(name))
    assert emit_dot(m) == emit_dot(parse_model(corpus_text(name)))
    assert emit_dot(m).startswith("digraph")


def test_dot_fig3_action_nodes():
    p = parse_model(corpus_text("fig3.pts")).systems["fig3"]
    dot = emit_dot(p)

    def action_nodes(state):
        return sum(1 for line in dot.splitlines()
                   if line.strip().startswith(f'"fig3/{state}" -> "fig3/#'))

    # t has one a-transition fanning out to t1 and t2, each with b and c
    assert action_nodes("t") == 1
    assert action_nodes("t1") == action_nodes("t2") == 2
    assert action_nodes("u") == 3


def test_dot_deadlock_only_model():
    p = validate_pts("d", ["s"], ["a"], "s", [])
    dot = emit_dot(p)
    assert dot.count("shape=circle") == 1 and "shape=point" not in dot


def test_find_state():
    m = parse_model(corpus_text("fig3.pts"))
    assert m.find_state("t")[1] == "t"
    assert m.find_state("fig3:u")[1] == "u"
    assert m.find_state("fig3")[1] == "s"
    with pytest.raises(KeyError):
        m.find_state("nothing")


# --- generated round trips -------------------------------------------------------

@st.composite
def models(draw):
    n = draw(st.integers(1, 4))
    states = [f"s{i}" for i in range(n)]
    actions = ["a", "b"]
    transitions, seen = [], set()
    for i in range(n):
        for _ in range(draw(st.integers(0, 2))):
            label = draw(st.sampled_from(actions))
            targets = draw(st.lists(st.sampled_from(states), min_size=1, max_size=3, unique=True))
            weights = draw(st.lists(st.integers(1, 5), min_size=len(targets),
                                    max_size=len(targets)))
            total = sum(weights)
            dist = tuple((s, F(w, total)) for s, w in zip(targets, weights))
            key = (states[i], label, frozenset(dist))
            if key not in seen:
                seen.add(key)
                transitions.append((states[i], label, dist))
    return Model(systems={"g": validate_pts("g", states, actions, "s0", transitions)})


@given(models())
@settings(max_examples=150)
def test_generated_round_trip(model):
    text = emit_model(model)
    again = parse_model(text)
    assert again.systems["g"] == model.systems["g"]
    assert emit_model(again) == text


def test_rename_states_gives_parseable_names():
    from ptsmetrics.pts import parallel_compose
    p = parse_model(corpus_text("fig3.pts")).systems["fig3"]
    comp = rename_states(parallel_compose(p, p, roots=[("zs", "zt")]), "c")
    again = parse_model(emit_model(Model(systems={"c": comp}))).systems["c"]
    assert again == comp


def test_error_column_after_dropped_entry():
    text = "param z = 0\npts x\nstates a b\nactions c\ninit a\ntrans a c -> a: z, b: 1, a: w\n"
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert err.value.col == text.splitlines()[5].index("w") + 1
