import itertools

import pytest
from hypothesis import given, settings, strategies as st

from laxord.automata import accepts, from_regex
from laxord.editops import distance, levenshtein
from laxord.oracle import (
    OracleCapError,
    bfs_distance,
    check_stratum_connectivity,
    check_td_orderable,
    components,
    distance_to_language,
    has_hamiltonian_path,
    lev_distance,
    member,
    min_path_cover,
    replay_tokens,
    verify_stream,
    words_up_to,
)

from conftest import random_dfas

TWO_LOOPS_SAMPLE = ["a" * n for n in range(4, 10)] + ["b" * n for n in range(4, 10)]


def test_membership_and_listing_agree_with_automata(examples):
    for dfa in examples.values():
        listed = words_up_to(dfa, 6)
        brute = [
            w
            for n in range(7)
            for w in map("".join, itertools.product(dfa.alphabet, repeat=n))
            if accepts(dfa, w)
        ]
        assert sorted(listed) == sorted(brute)
        assert all(member(dfa, w) for w in listed)


def test_replay_tokens():
    assert replay_tokens("", ["+l:a", "+r:b"]) == "ab"
    assert replay_tokens("abc", ["-l", "-r"]) == "b"
    with pytest.raises(ValueError):
        replay_tokens("", ["-l"])


def test_unary_stream_is_clean():
    astar = from_regex("a*")
    scripts = [""] + ["+r:a"] * 999
    rep = verify_stream(scripts, astar, 3, ell=2)
    assert rep.ok and rep.outputs == 1000


def test_repeat_is_reported_at_its_index():
    scripts = ["", "+r:a", "+r:a", "-r", "+r:a +r:a +r:a"]
    rep = verify_stream(scripts, from_regex("a*"), 3)
    v = rep.first_violation
    assert (v.index, v.kind) == (3, "repeat")


def test_word_outside_language_is_reported():
    rep = verify_stream(["", "+r:b"], from_regex("a*", "ab"), 3)
    assert rep.first_violation.kind == "membership"
    assert rep.first_violation.index == 1


def test_bound_and_metric_violations():
    rep = verify_stream(["", "+r:a +r:a +r:a +r:a"], from_regex("a*"), 3)
    assert rep.first_violation.kind == "bound"
    rep = verify_stream(["", "+l:a"], from_regex("a*"), 3, metric="ppr")
    assert rep.first_violation.kind == "metric"
    rep = verify_stream(["", "-r"], from_regex("a*"), 3)
    assert rep.first_violation.kind == "apply"


def test_incomplete_stratum_is_reported():
    # skips "b" and runs ahead two strata
    scripts = ["", "+r:a", "+r:a", "+r:a", "+r:a", "+r:a"]
    rep = verify_stream(scripts, from_regex("(a+b)*"), 3, ell=2)
    assert any(v.kind == "completeness" for v in rep.violations)


def test_distances_agree_with_closed_forms():
    pool = ["".join(t) for n in range(5) for t in itertools.product("ab", repeat=n)]
    for u, v in itertools.product(pool, repeat=2):
        assert bfs_distance(u, v, "pp") == distance(u, v, "pp")
        assert bfs_distance(u, v, "ppr") == distance(u, v, "ppr")
        assert lev_distance(u, v) == levenshtein(u, v)


def test_distance_to_language():
    dfa = from_regex("aaaa(a)*", "ab")
    assert distance_to_language(dfa, "aaaa") == 0
    assert distance_to_language(dfa, "aa") == 2
    assert distance_to_language(dfa, "baa") == 3


def test_small_orderability_examples():
    assert has_hamiltonian_path([0b10, 0b01])
    assert not has_hamiltonian_path([0, 0])
    assert min_path_cover([0, 0, 0]) == 3


def test_two_loop_sample_needs_two_sequences():
    for d in (1, 2, 3):
        assert not check_td_orderable(TWO_LOOPS_SAMPLE, 1, d)
    assert check_td_orderable(TWO_LOOPS_SAMPLE, 2, 1)


def test_short_two_loop_words_pass_through_the_empty_word():
    short = [""] + ["a" * n for n in range(1, 6)] + ["b" * n for n in range(1, 6)]
    assert check_td_orderable(short, 2, 1)
    # a^5 ... a, empty word, b ... b^5 is a single 1-sequence
    assert check_td_orderable(short, 1, 1)


def test_even_unary_words_are_two_orderable():
    words = ["a" * n for n in range(0, 9, 2)]
    assert check_td_orderable(words, 1, 2)
    assert not check_td_orderable(words, 1, 1)


def test_orderability_cap():
    with pytest.raises(OracleCapError):
        check_td_orderable(["a" * n for n in range(13)], 1, 1)


def test_connectivity_reports():
    assert check_stratum_connectivity(from_regex("(a+b)*"), 2, 3, 5).connected
    assert check_stratum_connectivity(from_regex("a*b*"), 32, 64, 2, metric="lev").connected
    rep = check_stratum_connectivity(from_regex("a*+b*"), 2, 3, 4)
    assert not rep.connected and rep.first_disconnected() == 2
    assert len(components(TWO_LOOPS_SAMPLE, 2, "lev")) == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.text(alphabet="ab", max_size=6))
def test_distance_to_language_is_a_true_minimum(seed, word):
    dfa = random_dfas(1, seed=seed, max_states=3)[0]
    dl = distance_to_language(dfa, word)
    near = words_up_to(dfa, len(word) + dl)
    assert min(distance(word, w) for w in near) == dl
