import itertools

import pytest
from hypothesis import given, settings, strategies as st

from laxord.editops import (
    POP_LEFT,
    POP_RIGHT,
    ScriptError,
    apply,
    decode_script,
    distance,
    edit_graph_distance,
    encode_script,
    inverse_op,
    levenshtein,
    push_left,
    push_right,
    script_between,
)

words = st.text(alphabet="ab", max_size=7)


def test_apply_examples():
    assert apply("", [push_left("a"), push_right("b")]) == "ab"
    assert apply("abc", [POP_LEFT, POP_RIGHT]) == "b"
    with pytest.raises(ScriptError) as exc:
        apply("a", [POP_LEFT, POP_LEFT])
    assert exc.value.index == 1


def test_distance_examples():
    for m in ("pp", "ppr", "lev"):
        assert distance("abba", "abba", m) == 0
    assert distance("ab", "ba", "pp") == 2
    assert edit_graph_distance("ab", "ba") == 2
    assert distance("a", "b", "lev") == 1
    assert distance("ab", "ba", "ppr") == 4
    assert edit_graph_distance("ab", "ba", right_only=True) == 4


def test_script_between_examples():
    assert script_between("abc", "bc") == (POP_LEFT,)
    s = script_between("ab", "ba")
    assert len(s) == 2 and apply("ab", s) == "ba"
    s = script_between("rw", "rsw", "ppr")
    assert all(op.is_right for op in s)
    assert apply("rw", s) == "rsw"
    with pytest.raises(ValueError):
        script_between("a", "b", "lev")


def test_unknown_metric():
    with pytest.raises(ValueError):
        distance("a", "b", "hamming")


def test_script_text_round_trip():
    s = (push_left("a"), push_right("b"), POP_LEFT, POP_RIGHT)
    assert encode_script(s) == "+l:a +r:b -l -r"
    assert decode_script("+l:a +r:b -l -r") == s
    assert decode_script("") == ()
    for bad in ("+x:a", "+l:", "-q", "+r:ab"):
        with pytest.raises(ValueError):
            decode_script(bad)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_shortest_scripts_realize_the_distance(u, v):
    for m in ("pp", "ppr"):
        s = script_between(u, v, m)
        assert apply(u, s) == v
        assert len(s) == distance(u, v, m)
    assert levenshtein(u, v) <= distance(u, v, "pp") <= distance(u, v, "ppr")


@settings(max_examples=200, deadline=None)
@given(words, words, words)
def test_triangle_inequality_and_symmetry(u, v, w):
    for m in ("pp", "ppr", "lev"):
        assert distance(u, v, m) == distance(v, u, m)
        assert distance(u, w, m) <= distance(u, v, m) + distance(v, w, m)


@settings(max_examples=100, deadline=None)
@given(words, st.lists(st.sampled_from(["+l:a", "+r:b", "-l", "-r"]), max_size=6))
def test_inverse_ops_undo(word, toks):
    for tok in toks:
        op = decode_script(tok)[0]
        if not word and not op.is_push:
            continue
        back = inverse_op(op, word)
        assert apply(apply(word, (op,)), (back,)) == word


def test_closed_forms_match_edit_graph_search_exhaustively():
    pool = ["".join(t) for n in range(5) for t in itertools.product("ab", repeat=n)]
    for u in pool:
        for v in pool:
            assert distance(u, v, "pp") == edit_graph_distance(u, v)
            assert distance(u, v, "ppr") == edit_graph_distance(u, v, right_only=True)
