import pytest

from laxord.automata import enumerate_by_length, from_regex
from laxord.editops import apply, encode_script
from laxord.enumerator import (
    StreamConfig,
    UnderrunError,
    enumerate_finite,
    enumerate_language,
    enumerate_part,
    extract_stratum_graph,
    replay,
)
from laxord.oracle import verify_stream
from laxord.strata import StratumError, is_d_connected, ladder, make_params
from laxord.worddag import WordDag


def test_unary_stream_lists_every_word_by_length():
    astar = from_regex("a*")
    s = enumerate_part(astar, StreamConfig(max_outputs=50))
    scripts = list(s)
    words = replay(scripts)
    assert words == ["a" * n for n in range(50)]
    assert all(len(x) == 1 for x in scripts[1:])
    assert s.outputs == 50


def test_unary_stream_verifies():
    s = enumerate_part(from_regex("a*"), StreamConfig(max_outputs=1000))
    rep = verify_stream(list(s), from_regex("a*"), 3, ell=2)
    assert rep.ok and rep.max_script == 1


def test_full_language_stream_is_repetition_free_and_complete():
    dfa = from_regex("(a+b)*")
    s = enumerate_part(dfa, StreamConfig(max_outputs=10_000))
    rep = verify_stream(list(s), dfa, s.params.script_bound, ell=s.params.ell)
    assert rep.ok, rep.first_violation
    assert len(rep.strata_checked) >= 5


def test_two_loop_language_gives_two_streams(examples):
    streams = enumerate_language(examples["a5"], StreamConfig(max_outputs=13))
    assert len(streams) == 2
    first = replay(streams[0])
    second = replay(streams[1])
    assert sorted(first, key=len) == ["a" * n for n in range(13)]
    assert sorted(second, key=len) == ["b" * n for n in range(1, 14)]


def test_part_selection(examples):
    streams = enumerate_language(examples["a5"], StreamConfig(part_index=1, max_outputs=3))
    assert len(streams) == 1
    assert set(replay(streams[0])) == {"b", "bb", "bbb"}
    with pytest.raises(ValueError):
        enumerate_language(examples["a5"], StreamConfig(part_index=2))


def test_single_stream_for_interchangeable_examples(examples):
    for stem in ("a1", "a2", "a3"):
        assert len(enumerate_language(examples[stem], StreamConfig(max_outputs=1))) == 1


def test_long_example_stream_matches_oracle(examples):
    a4 = examples["a4"]
    cfg = StreamConfig(ell=4, d=4, allow_below_floor=True, max_outputs=3000)
    (s,) = enumerate_language(a4, cfg)
    words = replay(s)
    assert len(set(words)) == len(words)
    upto = set(enumerate_by_length(a4, 10))
    assert upto <= set(words)


def test_floor_enforced_without_opt_in(examples):
    with pytest.raises(StratumError):
        enumerate_language(examples["a4"], StreamConfig(ell=4, d=4))


def test_finite_streams():
    s = enumerate_finite(["", "a", "b"], 2)
    assert replay(s) == ["", "a", "b"]
    assert list(enumerate_finite([""])) == [()]
    words = ["ab", "ba", "abb", "b"]
    s = enumerate_finite(words)
    scripts = list(s)
    assert sorted(replay(scripts)) == sorted(words)
    assert all(len(x) <= 6 for x in scripts)
    with pytest.raises(ValueError):
        enumerate_finite(["abc"], 5)


def test_finite_language_enumeration():
    (s,) = enumerate_language(from_regex("ab+ba+b"))
    assert replay(s) == ["b", "ab", "ba"]


def test_unary_stratum_graph():
    astar = from_regex("a*")
    g = WordDag(astar, 2, 3)
    g.run_until(2)
    sg = extract_stratum_graph(g, 2, 3, ladder(astar, make_params(1, ell=2, d=3)))
    assert sg.words == ["aa", "aaa"]
    assert [(u, v, len(s)) for u, v, s in sg.edges()] == [(0, 1, 1)]
    assert [v for v, _ in sg.adj[1]] == [0]
    assert (sg.entry, sg.exit) == (0, 1)


def test_full_language_stratum_graph():
    dfa = from_regex("(a+b)*")
    g = WordDag(dfa, 2, 3)
    g.run_until(2)
    sg = extract_stratum_graph(g, 2, 3, ladder(dfa, make_params(1, ell=2, d=3)))
    assert len(sg) == 12 and is_d_connected(sg)
    for u, v, s in sg.edges():
        assert apply(sg.words[u], s) == sg.words[v]


def test_singleton_stratum_graph():
    dfa = from_regex("ab")
    g = WordDag(dfa, 4, 3)
    sg = extract_stratum_graph(g, 1, 3)
    assert sg.words == ["ab"] and not list(sg.edges())


def test_explicit_small_cadence_underruns():
    cfg = StreamConfig(cadence=1, max_outputs=2000)
    s = enumerate_part(from_regex("(a+b)*"), cfg)
    with pytest.raises(UnderrunError):
        list(s)


def test_lenient_cadence_records_underruns():
    cfg = StreamConfig(cadence=1, max_outputs=2000, strict=False)
    s = enumerate_part(from_regex("(a+b)*"), cfg)
    list(s)
    assert s.underruns > 0


def test_calibrated_cadence_is_flat():
    s = enumerate_part(from_regex("a*b*"), StreamConfig(max_outputs=3000))
    list(s)
    assert s.underruns == 0
    assert set(s.gaps[1:]) == {s.cadence}


def test_streams_are_deterministic():
    def run():
        s = enumerate_part(from_regex("a*b*"), StreamConfig(max_outputs=500))
        return [encode_script(x) for x in s]

    assert run() == run()


def test_proven_mode_rejects_explicit_parameters():
    with pytest.raises(ValueError):
        StreamConfig(mode="proven", ell=3)
