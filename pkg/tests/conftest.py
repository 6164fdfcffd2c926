import os
import sys
import random

import pytest

from laxord.automata import build_dfa, load_dfa, trim

DATA = os.path.join(os.path.dirname(__file__), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


@pytest.fixture(scope="session")
def examples():
    """The five example automata plus (aa)*, keyed by file stem."""
    return {stem: load_dfa(data_path(f"{stem}.dfa")) for stem in ("a1", "a2", "a3", "a4", "a5", "aa")}


def random_dfa(rng: random.Random, max_states: int = 5, alphabet: str = "ab"):
    """A random trimmed DFA with a non-empty language, or None when trimming empties it."""
    n = rng.randint(1, max_states)
    transitions = [(q, a, rng.randrange(n)) for q in range(n) for a in alphabet if rng.random() < 0.7]
    finals = [q for q in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
    dfa = trim(build_dfa(alphabet, transitions, 0, finals, range(n)))
    return None if dfa.is_empty else dfa


def random_dfas(count: int, seed: int = 7, **kw):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        dfa = random_dfa(rng, **kw)
        if dfa is not None:
            out.append(dfa)
    return out


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion that ran in this session."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(n))
