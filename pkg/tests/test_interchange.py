import itertools

import pytest

from laxord.automata import accepts, build_dfa, enumerate_by_length, from_regex
from laxord.interchange import (
    build_partition,
    class_separation_check,
    compatible,
    connected,
    interchangeability_classes,
    loopable_states,
    nonloopable_words,
    word_class,
)
from laxord.oracle import components

from conftest import random_dfas


def test_loopable_states(examples):
    assert loopable_states(examples["a4"]).loopable == {1, 2, 3, 4, 6}
    assert loopable_states(examples["a5"]).loopable == {1, 2}
    eps = build_dfa("a", [], 0, [0])
    assert loopable_states(eps).loopable == frozenset()


def test_witness_loops_label_cycles(examples):
    for dfa in examples.values():
        info = loopable_states(dfa)
        for q in info.loopable:
            z = info.witness_loop[q]
            assert 1 <= len(z) <= dfa.size
            r = q
            for a in z:
                r = dfa.delta[(r, a)]
            assert r == q


def test_connectivity_and_compatibility(examples):
    a2, a4, a5 = examples["a2"], examples["a4"], examples["a5"]
    assert connected(a2, 0, 1)
    assert not connected(a5, 1, 2)
    assert not compatible(a5, 1, 2)
    assert compatible(a4, 1, 4)
    for dfa in examples.values():
        for q in loopable_states(dfa).loopable:
            assert connected(dfa, q, q) and compatible(dfa, q, q)
    with pytest.raises(ValueError):
        connected(a5, 0, 1)


def test_class_counts(examples):
    assert [interchangeability_classes(examples[s]).t for s in ("a1", "a2", "a3", "a4", "a5")] == [1, 1, 1, 1, 2]


def test_finite_language_has_no_classes():
    with pytest.raises(ValueError):
        interchangeability_classes(from_regex("ab+b"))


def test_two_loop_partition(examples):
    part = build_partition(examples["a5"])
    assert part.t == 2
    langs = [enumerate_by_length(p, 6) for p in part.parts]
    assert langs[0] == [""] + ["a" * n for n in range(1, 7)]
    assert langs[1] == ["b" * n for n in range(1, 7)]


def test_single_class_partitions(examples):
    assert build_partition(examples["a1"]).t == 1
    assert build_partition(examples["a3"]).t == 1


def test_finite_partition_is_flagged():
    part = build_partition(from_regex("ab+ba"))
    assert part.finite and part.t == 1


def test_nonloopable_words(examples):
    assert nonloopable_words(examples["a5"]) == [""]
    assert nonloopable_words(examples["a1"]) == []
    # the drawn automaton accepts the empty word at its non-loopable initial state
    assert nonloopable_words(examples["a4"]) == [""]
    for dfa in examples.values():
        assert all(len(w) < dfa.size for w in nonloopable_words(dfa))


@pytest.mark.parametrize("d,lo", [(1, 3), (5, 6)])
def test_class_separation(examples, d, lo):
    rep = class_separation_check(examples["a5"], d, max_len=8, min_len=lo)
    assert rep.ok and rep.checked_pairs > 0


def test_class_separation_single_class_is_vacuous(examples):
    assert class_separation_check(examples["a1"], 2, max_len=6).ok


def test_two_loop_minimality_witness(examples):
    words = [w for w in enumerate_by_length(examples["a5"], 8) if 4 <= len(w)]
    assert len(components(words, 2, "lev")) >= 2


def check_partition(dfa, max_len=8):
    part = build_partition(dfa)
    owners = {}
    for i, p in enumerate(part.parts):
        for w in enumerate_by_length(p, max_len):
            assert w not in owners, f"{w!r} in parts {owners.get(w)} and {i}"
            owners[w] = i
    assert sorted(owners) == sorted(enumerate_by_length(dfa, max_len))
    if not part.finite:
        assert part.t == interchangeability_classes(dfa).t
        for p in part.parts:
            assert interchangeability_classes(p).t == 1
        for w in nonloopable_words(dfa):
            assert owners[w] == 0


def test_partition_examples(examples):
    for dfa in examples.values():
        check_partition(dfa)


def test_partition_random_automata():
    for dfa in random_dfas(100, seed=11):
        check_partition(dfa)


def test_word_class_agrees_with_parts(examples):
    a5 = examples["a5"]
    classes = interchangeability_classes(a5)
    part = build_partition(a5)
    for n in range(1, 6):
        for w in ("a" * n, "b" * n):
            i = word_class(a5, classes, w)
            assert accepts(part.parts[i], w)
    assert word_class(a5, classes, "") is None


def test_compatibility_and_connectivity_are_symmetric():
    for dfa in random_dfas(40, seed=3):
        loop = sorted(loopable_states(dfa).loopable)
        for q, r in itertools.product(loop, repeat=2):
            assert compatible(dfa, q, r) == compatible(dfa, r, q)
            assert connected(dfa, q, r) == connected(dfa, r, q)
