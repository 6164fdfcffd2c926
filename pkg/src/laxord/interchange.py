"""Loopable states, interchangeability classes and the minimal language partition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import Dfa, DfaError, enumerate_by_length, renumber, run, shortest_words, trim
from .editops import levenshtein


def strongly_connected_components(dfa: Dfa) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components come out in reverse topological order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in dfa.states:
        if root in index:
            continue
        work = [(root, iter([r for _, r in dfa.successors(root)]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            q, it = work[-1]
            pushed = False
            for r in it:
                if r not in index:
                    index[r] = low[r] = counter
                    counter += 1
                    stack.append(r)
                    on_stack.add(r)
                    work.append((r, iter([s for _, s in dfa.successors(r)])))
                    pushed = True
                    break
                if r in on_stack:
                    low[q] = min(low[q], index[r])
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[q])
            if low[q] == index[q]:
                comp = []
                while True:
                    r = stack.pop()
                    on_stack.discard(r)
                    comp.append(r)
                    if r == q:
                        break
                out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class LoopInfo:
    loopable: frozenset[int]
    witness_loop: dict[int, str]


def _shortest_loop(dfa: Dfa, q: int) -> str | None:
    best: dict[int, str] = {}
    queue: deque[int] = deque()
    for a, r in dfa.successors(q):
        if r == q:
            return a
        if r not in best:
            best[r] = a
            queue.append(r)
    while queue:
        p = queue.popleft()
        for a, r in dfa.successors(p):
            if r == q:
                return best[p] + a
            if r not in best:
                best[r] = best[p] + a
                queue.append(r)
    return None


def loopable_states(dfa: Dfa) -> LoopInfo:
    """States on a cycle with at least one transition, each with a shortest loop."""
    loops = {}
    for comp in strongly_connected_components(dfa):
        if len(comp) > 1 or any(r == comp[0] for _, r in dfa.successors(comp[0])):
            for q in comp:
                loops[q] = _shortest_loop(dfa, q)
    return LoopInfo(frozenset(loops), loops)


def _require_loopable(info: LoopInfo, *qs: int) -> None:
    for q in qs:
        if q not in info.loopable:
            raise ValueError(f"state {q} is not loopable")


def connected(dfa: Dfa, q: int, q2: int, info: LoopInfo | None = None) -> bool:
    """A directed path joins the two loopable states in one direction or the other."""
    info = info or loopable_states(dfa)
    _require_loopable(info, q, q2)
    return _reaches(dfa, q, q2) or _reaches(dfa, q2, q)


def _reaches(dfa: Dfa, src: int, dst: int) -> bool:
    seen = {src}
    todo = [src]
    while todo:
        p = todo.pop()
        if p == dst:
            return True
        for _, r in dfa.successors(p):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return False


def common_loop(dfa: Dfa, q: int, q2: int) -> str | None:
    """Shortest nonempty word looping on both states, if any (cycle search in the pair graph)."""
    start = (q, q2)
    best: dict[tuple[int, int], str] = {}
    queue: deque[tuple[int, int]] = deque([start])
    best[start] = ""
    while queue:
        p = queue.popleft()
        for a in dfa.alphabet:
            x = dfa.delta.get((p[0], a))
            y = dfa.delta.get((p[1], a))
            if x is None or y is None:
                continue
            if (x, y) == start:
                return best[p] + a
            if (x, y) not in best:
                best[(x, y)] = best[p] + a
                queue.append((x, y))
    return None


def compatible(dfa: Dfa, q: int, q2: int, info: LoopInfo | None = None) -> bool:
    """The two loopable states share a nonempty loop label."""
    info = info or loopable_states(dfa)
    _require_loopable(info, q, q2)
    return common_loop(dfa, q, q2) is not None


@dataclass
class Classes:
    classes: list[frozenset[int]]
    certificates: list[list[tuple[int, int, str]]] = field(default_factory=list)

    @property
    def t(self) -> int:
        return len(self.classes)

    def class_of(self, q: int) -> int | None:
        for i, c in enumerate(self.classes):
            if q in c:
                return i
        return None


def interchangeability_classes(dfa: Dfa, info: LoopInfo | None = None) -> Classes:
    """Classes of loopable states under the closure of connectivity and compatibility.

    Class 0 holds the loopable state reached by the shortest word (ties broken
    by state identifier); the remaining classes follow the same key.
    """
    info = info or loopable_states(dfa)
    states = sorted(info.loopable)
    if not states:
        raise ValueError("the language is finite: no loopable state")
    parent = {q: q for q in states}

    def find(q: int) -> int:
        while parent[q] != q:
            parent[q] = parent[parent[q]]
            q = parent[q]
        return q

    links: list[tuple[int, int, str]] = []
    reach = {q: _forward_set(dfa, q) for q in states}
    for i, q in enumerate(states):
        for q2 in states[i + 1:]:
            if q2 in reach[q] or q in reach[q2]:
                kind = "connected"
            elif common_loop(dfa, q, q2) is not None:
                kind = "compatible:" + common_loop(dfa, q, q2)
            else:
                continue
            links.append((q, q2, kind))
            a, b = find(q), find(q2)
            if a != b:
                parent[max(a, b)] = min(a, b)

    groups: dict[int, set[int]] = {}
    for q in states:
        groups.setdefault(find(q), set()).add(q)
    sw = shortest_words(dfa)
    order = sorted(groups.values(), key=lambda g: min((len(sw[q]), q) for q in g))
    classes = [frozenset(g) for g in order]
    certs = [[lk for lk in links if lk[0] in g] for g in classes]
    return Classes(classes, certs)


def _forward_set(dfa: Dfa, q: int) -> set[int]:
    seen = {q}
    todo = [q]
    while todo:
        p = todo.pop()
        for _, r in dfa.successors(p):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def nonloopable_words(dfa: Dfa, info: LoopInfo | None = None) -> list[str]:
    """Accepted words whose run never visits a loopable state (a finite set)."""
    if dfa.is_empty:
        return []
    info = info or loopable_states(dfa)
    if dfa.initial in info.loopable:
        return []
    out = []
    todo = [("", dfa.initial)]
    while todo:
        w, q = todo.pop()
        if q in dfa.finals:
            out.append(w)
        for a, r in dfa.successors(q):
            if r not in info.loopable:
                todo.append((w + a, r))
    return sorted(out, key=lambda w: (len(w), w))


@dataclass
class Partition:
    parts: list[Dfa]
    classes: Classes | None
    finite: bool = False

    @property
    def t(self) -> int:
        return len(self.parts)


def build_partition(dfa: Dfa) -> Partition:
    """Split L(dfa) into interchangeable parts, one per class.

    Each part runs on states (q, seen) where ``seen`` records whether a
    loopable state has been visited.  Part i drops the visited copies of the
    loopable states of the other classes; only part 0 keeps the unvisited
    copies final, so it also accepts the non-loopable words.
    """
    dfa = trim(dfa)
    if dfa.is_empty:
        return Partition([dfa], None, finite=True)
    info = loopable_states(dfa)
    if not info.loopable:
        return Partition([renumber(dfa)], None, finite=True)
    classes = interchangeability_classes(dfa, info)
    loopable = info.loopable

    def code(q: int, seen: int) -> int:
        return 2 * q + seen

    start = (dfa.initial, 1 if dfa.initial in loopable else 0)
    pairs = {start}
    todo = [start]
    delta: dict[tuple[int, str], int] = {}
    while todo:
        q, seen = todo.pop()
        for a, r in dfa.successors(q):
            nxt = (r, 1 if seen or r in loopable else 0)
            delta[(code(q, seen), a)] = code(*nxt)
            if nxt not in pairs:
                pairs.add(nxt)
                todo.append(nxt)

    parts = []
    for i, cls in enumerate(classes.classes):
        banned = {code(q, 1) for q in loopable - cls}
        keep = sorted(code(q, s) for q, s in pairs if code(q, s) not in banned)
        keep_set = set(keep)
        finals = frozenset(
            code(q, s) for q, s in pairs
            if q in dfa.finals and code(q, s) in keep_set and (s == 1 or i == 0)
        )
        sub = {k: r for k, r in delta.items() if k[0] in keep_set and r in keep_set}
        init = code(*start)
        if init not in keep_set:
            raise DfaError("initial state removed from a part")  # unreachable: initial copy is never banned
        part = trim(Dfa(dfa.alphabet, tuple(keep), init, finals, sub))
        parts.append(renumber(part))
    return Partition(parts, classes)


def word_class(dfa: Dfa, classes: Classes, word: str) -> int | None:
    """Index of the class whose loopable states the run of ``word`` visits (None if none)."""
    r = run(dfa, word)
    if r is None:
        return None
    for q in r.states:
        c = classes.class_of(q)
        if c is not None:
            return c
    return None


@dataclass
class SeparationReport:
    ok: bool
    checked_pairs: int
    min_len: int
    max_len: int
    violations: list[tuple[str, str, int]]


def class_separation_check(dfa: Dfa, d: int, max_len: int, min_len: int | None = None) -> SeparationReport:
    """Check that long words from different classes are more than ``d`` Levenshtein edits apart.

    The proven length threshold |A|(|A|(d+1)+1) is far beyond desk scale, so
    the caller picks ``max_len``; ``min_len`` defaults to the threshold capped at
    ``max_len``.  This is an empirical check, not a proof.
    """
    info = loopable_states(dfa)
    if min_len is None:
        k = dfa.size
        min_len = min(k * (k * (d + 1) + 1), max_len)
    if len(info.loopable) == 0:
        return SeparationReport(True, 0, min_len, max_len, [])
    classes = interchangeability_classes(dfa, info)
    if classes.t < 2:
        return SeparationReport(True, 0, min_len, max_len, [])
    by_class: dict[int, list[str]] = {}
    for w in enumerate_by_length(dfa, max_len):
        if len(w) >= min_len:
            c = word_class(dfa, classes, w)
            if c is not None:
                by_class.setdefault(c, []).append(w)
    violations = []
    checked = 0
    keys = sorted(by_class)
    for i, ci in enumerate(keys):
        for cj in keys[i + 1:]:
            for u in by_class[ci]:
                for v in by_class[cj]:
                    checked += 1
                    if abs(len(u) - len(v)) > d:
                        continue
                    dist = levenshtein(u, v)
                    if dist <= d:
                        violations.append((u, v, dist))
    return SeparationReport(not violations, checked, min_len, max_len, violations)
