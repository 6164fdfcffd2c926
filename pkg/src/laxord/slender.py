"""Slender languages and their push-pop-right enumeration.

A trimmed minimal DFA recognizes a slender language (boundedly many words
per length) exactly when each strongly connected component with a cycle is
a single simple cycle and no path leads from one such cycle to another.
The language then splits as a finite part plus one thread r s* L per
non-loopable prefix r, and each thread is enumerated by right-end edits
only, with a stream that is periodic after a short prelude.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .automata import Dfa, minimize
from .editops import Script, script_between
from .enumerator import ScriptStream
from .interchange import loopable_states, nonloopable_words, strongly_connected_components


class NotSlenderError(ValueError):
    pass


def _cyclic_components(dfa: Dfa) -> list[list[int]]:
    out = []
    for comp in strongly_connected_components(dfa):
        if len(comp) > 1 or any(r == comp[0] for _, r in dfa.successors(comp[0])):
            out.append(comp)
    return out


def is_slender(dfa: Dfa) -> bool:
    """No state on two cycles and no path between two different cycles."""
    m = minimize(dfa)
    if m.is_empty:
        return True
    comps = _cyclic_components(m)
    where = {q: i for i, comp in enumerate(comps) for q in comp}
    for i, comp in enumerate(comps):
        members = set(comp)
        for q in comp:
            inside = [r for _, r in m.successors(q) if r in members]
            if len(inside) != 1:
                return False
        # any other cycle reachable from this one?
        seen = set(comp)
        todo = list(comp)
        while todo:
            p = todo.pop()
            for _, r in m.successors(p):
                if r in seen:
                    continue
                if r in where and where[r] != i:
                    return False
                seen.add(r)
                todo.append(r)
    return True


@dataclass(frozen=True)
class Thread:
    prefix: str
    loop: str
    tails: tuple[str, ...]

    def word(self, j: int, tail: str) -> str:
        return self.prefix + self.loop * j + tail


@dataclass
class SlenderDecomposition:
    finite_part: list[str]
    threads: list[Thread]
    states: int = 0

    @property
    def t(self) -> int:
        return len(self.threads)

    def words_up_to(self, n: int) -> list[str]:
        """Words of the decomposition with length <= n (for checking it against the automaton)."""
        out = [w for w in self.finite_part if len(w) <= n]
        for th in self.threads:
            j = 0
            while len(th.prefix) + j * len(th.loop) <= n:
                out.extend(w for u in th.tails if len(w := th.word(j, u)) <= n)
                j += 1
        return out


def nonloopable_prefixes(dfa: Dfa) -> list[tuple[str, int]]:
    """Minimal words leading to a loopable state, with that state, in (length, alphabet) order."""
    info = loopable_states(dfa)
    out = []
    todo = deque([("", dfa.initial)])
    while todo:
        w, q = todo.popleft()
        if q in info.loopable:
            out.append((w, q))
            continue
        for a, r in dfa.successors(q):
            todo.append((w + a, r))
    return out


def _cycle_label(dfa: Dfa, q: int, members: set[int]) -> str:
    label = []
    p = q
    while True:
        a, p = next((a, r) for a, r in dfa.successors(p) if r in members)
        label.append(a)
        if p == q:
            return "".join(label)


def _tails(dfa: Dfa, q: int, loop: str) -> tuple[str, ...]:
    """Accepted words from q that do not start with the loop label (a finite set)."""
    out = []
    todo = [("", q)]
    while todo:
        u, p = todo.pop()
        if u.startswith(loop):
            continue
        if p in dfa.finals:
            out.append(u)
        for a, r in dfa.successors(p):
            todo.append((u + a, r))
    order = {a: i for i, a in enumerate(dfa.alphabet)}
    return tuple(sorted(out, key=lambda u: [order[a] for a in u]))


def slender_threads(dfa: Dfa) -> SlenderDecomposition:
    """Finite part plus one thread per non-loopable prefix of the minimal automaton."""
    m = minimize(dfa)
    if not is_slender(m):
        raise NotSlenderError("the language is not slender")
    if m.is_empty:
        return SlenderDecomposition([], [], 0)
    comps = {q: set(c) for c in _cyclic_components(m) for q in c}
    threads = []
    for r, q in nonloopable_prefixes(m):
        loop = _cycle_label(m, q, comps[q])
        threads.append(Thread(r, loop, _tails(m, q, loop)))
    order = {a: i for i, a in enumerate(m.alphabet)}
    threads.sort(key=lambda th: [order[a] for a in th.prefix])
    return SlenderDecomposition(nonloopable_words(m), threads, m.size)


class SlenderStream(ScriptStream):
    """Right-end script stream; ``prelude`` then ``period`` repeated forever."""

    def __init__(self, prelude: list[Script], period: list[Script], bound: int, max_outputs: int | None = None):
        self.prelude = prelude
        self.period = period

        def source() -> Iterator[tuple[Script, int, int]]:
            at = 0
            for script in prelude:
                at += 1 + len(script)
                yield script, at, 0
            while True:
                for script in period:
                    at += 1 + len(script)
                    yield script, at, 0

        super().__init__(source(), bound, max_outputs)


def enumerate_slender_thread(th: Thread, dfa: Dfa, prelude_words: list[str] | None = None,
                             max_outputs: int | None = None) -> SlenderStream:
    """Stream over ``prelude_words`` then r s^j u (j = 0, 1, ..., u over the tails), right-end ops only.

    Scripts between words of one block, and the hop from one block to the
    next, depend only on the tails, so after block 0 the scripts repeat with
    a period of one block.  Raises if a script exceeds twice the size of the
    minimal automaton.
    """
    if not th.loop:
        raise ValueError("thread loop must be nonempty")
    if not th.tails:
        raise ValueError("thread has no tails")
    k = minimize(dfa).size
    bound = 2 * k
    words = list(prelude_words or [])
    prelude: list[Script] = []
    prev = ""
    for w in words:
        prelude.append(script_between(prev, w, "ppr"))
        prev = w
    first = th.word(0, th.tails[0])
    prelude.append(script_between(prev, first, "ppr"))
    within = [script_between(th.word(0, a), th.word(0, b), "ppr") for a, b in zip(th.tails, th.tails[1:])]
    prelude.extend(within)
    hop = script_between(th.word(0, th.tails[-1]), th.word(1, th.tails[0]), "ppr")
    period = [hop] + within
    worst = max(len(s) for s in prelude + period)
    if worst > bound:
        raise AssertionError(f"right-end script of length {worst} exceeds 2|A| = {bound}")
    return SlenderStream(prelude, period, bound, max_outputs)


def enumerate_slender(dfa: Dfa, max_outputs: int | None = None) -> list[SlenderStream]:
    """One stream per thread; the finite part is the prelude of the first thread."""
    dec = slender_threads(dfa)
    if not dec.threads:
        raise ValueError("finite language: enumerate it directly")
    return [
        enumerate_slender_thread(th, dfa, dec.finite_part if i == 0 else None, max_outputs)
        for i, th in enumerate(dec.threads)
    ]
