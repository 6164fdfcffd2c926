"""Deterministic finite automata: text format, trimming, runs, products, minimization.

States are non-negative integers.  Constructions that build new automata
(product, minimize, regex compilation) number their states densely from 0 in
breadth-first order, so their output is canonical and serializes stably.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping


class DfaError(ValueError):
    """Raised for malformed automata or automaton text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EmptyLanguageWarning(UserWarning):
    """The automaton accepts no word at all once trimmed."""


@dataclass(frozen=True, eq=False)
class Dfa:
    alphabet: tuple[str, ...]
    states: tuple[int, ...]
    initial: int | None
    finals: frozenset[int]
    delta: Mapping[tuple[int, str], int] = field(repr=False)

    def __post_init__(self) -> None:
        if not self.alphabet:
            raise DfaError("alphabet must not be empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DfaError("alphabet has repeated letters")
        for letter in self.alphabet:
            if len(letter) != 1:
                raise DfaError(f"letter {letter!r} is not a single character")
        known = set(self.states)
        if self.initial is not None and self.initial not in known:
            raise DfaError(f"initial state {self.initial} is not declared")
        if not self.finals <= known:
            raise DfaError(f"final states {sorted(self.finals - known)} are not declared")
        letters = set(self.alphabet)
        for (q, a), r in self.delta.items():
            if q not in known or r not in known:
                raise DfaError(f"transition {q} {a} {r} uses an undeclared state")
            if a not in letters:
                raise DfaError(f"transition {q} {a} {r} uses a letter outside the alphabet")

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def is_empty(self) -> bool:
        return self.initial is None

    @cached_property
    def letter_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def index(self) -> dict[int, int]:
        """Dense position of each state identifier."""
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def table(self) -> list[list[int]]:
        """Dense transition table: ``table[i][j]`` is the dense target or -1."""
        idx = self.index
        rows = [[-1] * len(self.alphabet) for _ in self.states]
        for (q, a), r in self.delta.items():
            rows[idx[q]][self.letter_index[a]] = idx[r]
        return rows

    @cached_property
    def final_mask(self) -> list[bool]:
        return [q in self.finals for q in self.states]

    def step(self, q: int, a: str) -> int | None:
        return self.delta.get((q, a))

    def successors(self, q: int) -> Iterator[tuple[str, int]]:
        for a in self.alphabet:
            r = self.delta.get((q, a))
            if r is not None:
                yield a, r

    def with_initial(self, q: int) -> "Dfa":
        """The automaton A_q: same transitions, initial state moved to ``q``, trimmed."""
        if q not in self.index:
            raise DfaError(f"unknown state {q}")
        return trim(Dfa(self.alphabet, self.states, q, self.finals, self.delta))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dfa):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.states == other.states
            and self.initial == other.initial
            and self.finals == other.finals
            and dict(self.delta) == dict(other.delta)
        )

    __hash__ = None  # type: ignore[assignment]


def empty_dfa(alphabet: Iterable[str]) -> Dfa:
    return Dfa(tuple(alphabet), (), None, frozenset(), {})


# -- text format -------------------------------------------------------------

_SECTIONS = ("alphabet", "states", "initial", "final", "trans")


def parse_dfa(text: str) -> Dfa:
    """Parse the line-oriented automaton format and return the trimmed automaton."""
    alphabet: list[str] | None = None
    states: list[int] | None = None
    initial: int | None = None
    finals: list[int] = []
    delta: dict[tuple[int, str], int] = {}
    seen: set[str] = set()

    def state_id(tok: str, lineno: int) -> int:
        if not tok.isdigit():
            raise DfaError(f"state identifier {tok!r} is not a non-negative integer", lineno)
        q = int(tok)
        if states is None:
            raise DfaError("states must be declared before use", lineno)
        if q not in declared:
            raise DfaError(f"unknown state {q}", lineno)
        return q

    declared: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _SECTIONS:
            raise DfaError(f"expected one of {', '.join(_SECTIONS)} followed by ':'", lineno)
        toks = rest.split()
        if key != "trans":
            if key in seen:
                raise DfaError(f"section {key!r} given twice", lineno)
            seen.add(key)
        if key == "alphabet":
            if not toks:
                raise DfaError("alphabet must not be empty", lineno)
            for t in toks:
                if len(t) != 1:
                    raise DfaError(f"letter {t!r} is not a single character", lineno)
            if len(set(toks)) != len(toks):
                raise DfaError("alphabet has repeated letters", lineno)
            alphabet = toks
        elif key == "states":
            states = []
            for t in toks:
                if not t.isdigit():
                    raise DfaError(f"state identifier {t!r} is not a non-negative integer", lineno)
                q = int(t)
                if q in declared:
                    raise DfaError(f"state {q} declared twice", lineno)
                declared.add(q)
                states.append(q)
        elif key == "initial":
            if len(toks) != 1:
                raise DfaError("initial takes exactly one state", lineno)
            initial = state_id(toks[0], lineno)
        elif key == "final":
            finals = [state_id(t, lineno) for t in toks]
        else:
            if len(toks) != 3:
                raise DfaError("trans takes: source letter target", lineno)
            if alphabet is None:
                raise DfaError("alphabet must be declared before transitions", lineno)
            q = state_id(toks[0], lineno)
            a = toks[1]
            r = state_id(toks[2], lineno)
            if a not in alphabet:
                raise DfaError(f"letter {a!r} is not in the alphabet", lineno)
            old = delta.get((q, a))
            if old is not None and old != r:
                raise DfaError(f"nondeterministic transitions from {q} on {a!r}: {old} and {r}", lineno)
            delta[(q, a)] = r

    if alphabet is None:
        raise DfaError("missing alphabet section")
    if states is None:
        raise DfaError("missing states section")
    if initial is None:
        if states:
            raise DfaError("missing initial section")
        warnings.warn("automaton accepts the empty language", EmptyLanguageWarning, stacklevel=2)
        return empty_dfa(alphabet)
    dfa = trim(Dfa(tuple(alphabet), tuple(states), initial, frozenset(finals), delta))
    if dfa.is_empty:
        warnings.warn("automaton accepts the empty language", EmptyLanguageWarning, stacklevel=2)
    return dfa


def serialize_dfa(dfa: Dfa) -> str:
    lines = ["alphabet: " + " ".join(dfa.alphabet)]
    if dfa.is_empty:
        lines.append("states:")
        return "\n".join(lines) + "\n"
    lines.append("states: " + " ".join(str(q) for q in dfa.states))
    lines.append(f"initial: {dfa.initial}")
    lines.append("final: " + " ".join(str(q) for q in dfa.states if q in dfa.finals))
    for (q, a), r in sorted(dfa.delta.items()):
        lines.append(f"trans: {q} {a} {r}")
    return "\n".join(lines) + "\n"


def load_dfa(path: str) -> Dfa:
    with open(path, encoding="utf-8") as fh:
        return parse_dfa(fh.read())


def build_dfa(
    alphabet: Iterable[str],
    transitions: Iterable[tuple[int, str, int]],
    initial: int = 0,
    finals: Iterable[int] = (),
    states: Iterable[int] | None = None,
) -> Dfa:
    """Convenience constructor; the state set defaults to every mentioned state."""
    transitions = list(transitions)
    finals = frozenset(finals)
    if states is None:
        found = {initial} | set(finals)
        for q, _, r in transitions:
            found.update((q, r))
        states = sorted(found)
    delta: dict[tuple[int, str], int] = {}
    for q, a, r in transitions:
        if delta.get((q, a), r) != r:
            raise DfaError(f"nondeterministic transitions from {q} on {a!r}")
        delta[(q, a)] = r
    return Dfa(tuple(alphabet), tuple(states), initial, finals, delta)


# -- structure ---------------------------------------------------------------

def _forward(dfa: Dfa, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for _, r in dfa.successors(q):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def _backward(dfa: Dfa, targets: Iterable[int]) -> set[int]:
    preds: dict[int, list[int]] = {}
    for (q, _), r in dfa.delta.items():
        preds.setdefault(r, []).append(q)
    seen = set(targets)
    todo = list(seen)
    while todo:
        r = todo.pop()
        for q in preds.get(r, ()):
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def trim(dfa: Dfa) -> Dfa:
    """Keep only the states that are both reachable and co-reachable."""
    if dfa.is_empty:
        return dfa
    useful = _forward(dfa, [dfa.initial]) & _backward(dfa, dfa.finals)
    if dfa.initial not in useful:
        return empty_dfa(dfa.alphabet)
    states = tuple(q for q in dfa.states if q in useful)
    delta = {(q, a): r for (q, a), r in dfa.delta.items() if q in useful and r in useful}
    return Dfa(dfa.alphabet, states, dfa.initial, dfa.finals & useful, delta)


def reachable_from(dfa: Dfa, q: int) -> set[int]:
    return _forward(dfa, [q])


def renumber(dfa: Dfa) -> Dfa:
    """Canonical copy: states numbered 0.. in breadth-first order from the initial state."""
    if dfa.is_empty:
        return dfa
    order = {dfa.initial: 0}
    queue = deque([dfa.initial])
    while queue:
        q = queue.popleft()
        for _, r in dfa.successors(q):
            if r not in order:
                order[r] = len(order)
                queue.append(r)
    delta = {(order[q], a): order[r] for (q, a), r in dfa.delta.items() if q in order}
    finals = frozenset(order[q] for q in dfa.finals if q in order)
    return Dfa(dfa.alphabet, tuple(range(len(order))), 0, finals, delta)


def isomorphic(a: Dfa, b: Dfa) -> bool:
    return serialize_dfa(renumber(trim(a))) == serialize_dfa(renumber(trim(b)))


@dataclass(frozen=True)
class Run:
    word: str
    states: tuple[int, ...]
    accepting: bool


def _check_letters(dfa: Dfa, word: str) -> None:
    for a in word:
        if a not in dfa.letter_index:
            raise DfaError(f"letter {a!r} is not in the alphabet")


def run(dfa: Dfa, word: str) -> Run | None:
    """The run of ``word`` from the initial state, or None if it falls off the automaton."""
    _check_letters(dfa, word)
    if dfa.is_empty:
        return None
    q = dfa.initial
    states = [q]
    for a in word:
        q = dfa.delta.get((q, a))
        if q is None:
            return None
        states.append(q)
    return Run(word, tuple(states), q in dfa.finals)


def accepts(dfa: Dfa, word: str) -> bool:
    r = run(dfa, word)
    return r is not None and r.accepting


def product(a: Dfa, b: Dfa) -> Dfa:
    """Intersection automaton, trimmed, states numbered breadth-first."""
    return product_with_pairs(a, b)[0]


def product_with_pairs(a: Dfa, b: Dfa) -> tuple[Dfa, dict[int, tuple[int, int]]]:
    """Like :func:`product`, also returning the pair of states behind each new state."""
    if a.alphabet != b.alphabet:
        raise DfaError("product needs identical alphabets")
    if a.is_empty or b.is_empty:
        return empty_dfa(a.alphabet), {}
    start = (a.initial, b.initial)
    number = {start: 0}
    queue = deque([start])
    delta: dict[tuple[int, str], int] = {}
    while queue:
        p = queue.popleft()
        for letter in a.alphabet:
            x = a.delta.get((p[0], letter))
            y = b.delta.get((p[1], letter))
            if x is None or y is None:
                continue
            if (x, y) not in number:
                number[(x, y)] = len(number)
                queue.append((x, y))
            delta[(number[p], letter)] = number[(x, y)]
    finals = frozenset(i for (x, y), i in number.items() if x in a.finals and y in b.finals)
    raw = Dfa(a.alphabet, tuple(range(len(number))), 0, finals, delta)
    pairs = {i: p for p, i in number.items()}
    trimmed = trim(raw)
    return trimmed, {q: pairs[q] for q in trimmed.states}


# -- languages ---------------------------------------------------------------

def _coreach_within(dfa: Dfa, horizon: int) -> list[list[bool]]:
    """``ok[m][i]``: from dense state i some final state is reachable in exactly m steps."""
    n = dfa.size
    table = dfa.table
    ok = [list(dfa.final_mask)]
    for _ in range(horizon):
        prev = ok[-1]
        ok.append([any(r >= 0 and prev[r] for r in table[i]) for i in range(n)])
    return ok


def words_of_length(dfa: Dfa, n: int) -> list[str]:
    """Accepted words of length exactly ``n`` in lexicographic order."""
    if dfa.is_empty or n < 0:
        return []
    ok = _coreach_within(dfa, n)
    table = dfa.table
    start = dfa.index[dfa.initial]
    if not ok[n][start]:
        return []
    frontier = [("", start)]
    for m in range(n - 1, -1, -1):
        good = ok[m]
        nxt = []
        for w, i in frontier:
            row = table[i]
            for j, a in enumerate(dfa.alphabet):
                r = row[j]
                if r >= 0 and good[r]:
                    nxt.append((w + a, r))
        frontier = nxt
    return [w for w, _ in frontier]


def enumerate_by_length(dfa: Dfa, max_len: int) -> list[str]:
    """All accepted words of length at most ``max_len``, by length then lexicographically."""
    out: list[str] = []
    for n in range(max_len + 1):
        out.extend(words_of_length(dfa, n))
    return out


def count_by_length(dfa: Dfa, max_len: int) -> list[int]:
    """Number of accepted words of each length 0..max_len (dynamic programming, no listing)."""
    if dfa.is_empty:
        return [0] * (max_len + 1)
    table = dfa.table
    counts = [0] * dfa.size
    counts[dfa.index[dfa.initial]] = 1
    fm = dfa.final_mask
    out = []
    for _ in range(max_len + 1):
        out.append(sum(c for c, f in zip(counts, fm) if f))
        nxt = [0] * dfa.size
        for i, c in enumerate(counts):
            if c:
                for r in table[i]:
                    if r >= 0:
                        nxt[r] += c
        counts = nxt
    return out


def is_finite(dfa: Dfa) -> bool:
    """True iff the trimmed automaton has no cycle."""
    dfa = trim(dfa)
    colour: dict[int, int] = {}
    for root in dfa.states:
        if root in colour:
            continue
        colour[root] = 1
        stack = [(root, iter(list(dfa.successors(root))))]
        while stack:
            q, it = stack[-1]
            for _, r in it:
                c = colour.get(r)
                if c == 1:
                    return False
                if c is None:
                    colour[r] = 1
                    stack.append((r, iter(list(dfa.successors(r)))))
                    break
            else:
                colour[q] = 2
                stack.pop()
    return True


def shortest_words(dfa: Dfa) -> dict[int, str]:
    """Shortest (then lexicographically least) word reaching each state."""
    if dfa.is_empty:
        return {}
    best = {dfa.initial: ""}
    queue = deque([dfa.initial])
    while queue:
        q = queue.popleft()
        for a, r in dfa.successors(q):
            if r not in best:
                best[r] = best[q] + a
                queue.append(r)
    return best


def shortest_accepted_from(dfa: Dfa, q: int) -> str:
    """Shortest (then lexicographically least) word leading from ``q`` to a final state."""
    # breadth-first over states; the first final found at each depth in letter order wins
    best = {q: ""}
    queue = deque([q])
    while queue:
        p = queue.popleft()
        if p in dfa.finals:
            return best[p]
        for a, r in dfa.successors(p):
            if r not in best:
                best[r] = best[p] + a
                queue.append(r)
    raise DfaError(f"state {q} is not co-reachable")


def minimize(dfa: Dfa) -> Dfa:
    """Canonical minimal automaton (partition refinement on the completed automaton)."""
    dfa = trim(dfa)
    if dfa.is_empty:
        raise DfaError("cannot minimize the empty language")
    n = dfa.size
    sink = n
    table = [[r if r >= 0 else sink for r in row] for row in dfa.table]
    table.append([sink] * len(dfa.alphabet))
    final = dfa.final_mask + [False]
    block = [1 if f else 0 for f in final]
    while True:
        signature = [(block[i], tuple(block[r] for r in table[i])) for i in range(n + 1)]
        ids: dict[tuple, int] = {}
        refined = [ids.setdefault(s, len(ids)) for s in signature]
        if len(ids) == len(set(block)):
            break
        block = refined
    dead = block[sink]
    rep: dict[int, int] = {}
    for i in range(n):
        rep.setdefault(block[i], i)
    delta = {}
    for b, i in rep.items():
        for j, a in enumerate(dfa.alphabet):
            r = table[i][j]
            if block[r] != dead:
                delta[(b, a)] = block[r]
    finals = frozenset(b for b, i in rep.items() if final[i])
    quotient = Dfa(dfa.alphabet, tuple(sorted(rep)), block[dfa.index[dfa.initial]], finals, delta)
    return renumber(trim(quotient))


# -- regular expressions ------------------------------------------------------

class RegexError(ValueError):
    pass


_SPECIAL = set("|+*()ε")


def _parse_regex(pattern: str):
    """Recursive descent: union ('|' or '+'), concatenation, postfix '*', 'ε' or '()'."""
    toks = [c for c in pattern if not c.isspace()]
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def union():
        nonlocal pos
        parts = [concat()]
        while peek() in ("|", "+"):
            pos += 1
            parts.append(concat())
        return parts[0] if len(parts) == 1 else ("alt", parts)

    def concat():
        items = []
        while peek() is not None and peek() not in ("|", "+", ")"):
            items.append(starred())
        if not items:
            return ("eps",)
        return items[0] if len(items) == 1 else ("cat", items)

    def starred():
        nonlocal pos
        node = atom()
        while peek() == "*":
            pos += 1
            node = ("star", node)
        return node

    def atom():
        nonlocal pos
        c = peek()
        if c == "(":
            pos += 1
            node = union()
            if peek() != ")":
                raise RegexError(f"unbalanced parenthesis in {pattern!r}")
            pos += 1
            return node
        if c == "ε":
            pos += 1
            return ("eps",)
        if c is None or c in _SPECIAL:
            raise RegexError(f"unexpected {c!r} in {pattern!r}")
        pos += 1
        return ("sym", c)

    tree = union()
    if pos != len(toks):
        raise RegexError(f"unexpected {toks[pos]!r} in {pattern!r}")
    return tree


def from_regex(pattern: str, alphabet: Iterable[str] | None = None) -> Dfa:
    """Compile a regular expression into its minimal automaton.

    Grammar: letters are single characters, ``|`` or ``+`` is union,
    juxtaposition is concatenation, postfix ``*`` is star, ``ε`` or ``()``
    is the empty word.  The alphabet defaults to the letters used.
    """
    tree = _parse_regex(pattern)
    used = sorted({c for c in pattern if not c.isspace() and c not in _SPECIAL})
    letters = tuple(alphabet) if alphabet is not None else tuple(used)
    if not letters:
        raise RegexError("cannot infer an alphabet from a pattern without letters")
    missing = set(used) - set(letters)
    if missing:
        raise RegexError(f"letters {sorted(missing)} are outside the alphabet")

    # Thompson construction: eps[i] lists epsilon successors, sym[i] = (letter, j)
    eps: list[list[int]] = []
    sym: list[tuple[str, int] | None] = []

    def new() -> int:
        eps.append([])
        sym.append(None)
        return len(eps) - 1

    def build(node) -> tuple[int, int]:
        kind = node[0]
        s, t = new(), new()
        if kind == "eps":
            eps[s].append(t)
        elif kind == "sym":
            sym[s] = (node[1], t)
        elif kind == "cat":
            cur = s
            for child in node[1]:
                a, b = build(child)
                eps[cur].append(a)
                cur = b
            eps[cur].append(t)
        elif kind == "alt":
            for child in node[1]:
                a, b = build(child)
                eps[s].append(a)
                eps[b].append(t)
        else:
            a, b = build(node[1])
            eps[s].extend((a, t))
            eps[b].extend((a, t))
        return s, t

    start, accept = build(tree)

    def closure(seeds: Iterable[int]) -> frozenset[int]:
        seen = set(seeds)
        todo = list(seen)
        while todo:
            i = todo.pop()
            for j in eps[i]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return frozenset(seen)

    first = closure([start])
    number = {first: 0}
    queue = deque([first])
    delta: dict[tuple[int, str], int] = {}
    while queue:
        cur = queue.popleft()
        for a in letters:
            moved = [sym[i][1] for i in cur if sym[i] is not None and sym[i][0] == a]
            if not moved:
                continue
            nxt = closure(moved)
            if nxt not in number:
                number[nxt] = len(number)
                queue.append(nxt)
            delta[(number[cur], a)] = number[nxt]
    finals = frozenset(i for s, i in number.items() if accept in s)
    dfa = trim(Dfa(letters, tuple(range(len(number))), 0, finals, delta))
    if dfa.is_empty:
        return dfa
    return minimize(dfa)
