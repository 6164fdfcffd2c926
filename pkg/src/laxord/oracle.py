"""Brute-force ground truth for streams, distances, connectivity and orderability.

Nothing here calls the production distance, membership or enumeration code:
the point is to check that code, so this module brings its own token
interpreter, its own membership test, its own edit-graph search and its own
word listing.  Everything is exponential somewhere and capped accordingly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .automata import Dfa

HAMILTON_CAP = 12
CONNECTIVITY_CAP = 20_000


class OracleCapError(ValueError):
    """The input is too large for exhaustive search."""


# -- membership and word listing ------------------------------------------------

def member(dfa: Dfa, word: str) -> bool:
    q = dfa.initial
    if q is None:
        return False
    for a in word:
        q = dfa.delta.get((q, a))
        if q is None:
            return False
    return q in dfa.finals


def _live_states(dfa: Dfa) -> set:
    live = set(dfa.finals)
    changed = True
    while changed:
        changed = False
        for (q, _a), r in dfa.delta.items():
            if r in live and q not in live:
                live.add(q)
                changed = True
    return live


def words_up_to(dfa: Dfa, max_len: int, min_len: int = 0) -> list[str]:
    """Accepted words with min_len <= length <= max_len, by length then alphabet order."""
    if dfa.initial is None:
        return []
    live = _live_states(dfa)
    if dfa.initial not in live:
        return []
    out: list[str] = []
    level = [("", dfa.initial)]
    for n in range(max_len + 1):
        if n >= min_len:
            out.extend(w for w, q in level if q in dfa.finals)
        if n == max_len:
            break
        nxt = []
        for w, q in level:
            for a in dfa.alphabet:
                r = dfa.delta.get((q, a))
                if r is not None and r in live:
                    nxt.append((w + a, r))
        level = nxt
    return out


def stratum_words(dfa: Dfa, ell: int, i: int) -> list[str]:
    """Accepted words of length in [(i-1)ell, i*ell)."""
    return words_up_to(dfa, i * ell - 1, (i - 1) * ell)


# -- edit tokens ------------------------------------------------------------------

def _tokens(script) -> list[str]:
    if isinstance(script, str):
        return script.split()
    return [op if isinstance(op, str) else op.token for op in script]


def replay_tokens(word: str, tokens: Sequence[str]) -> str:
    """Apply text tokens; raises ValueError on a malformed token or a pop from the empty word."""
    for tok in tokens:
        if tok in ("-l", "-r"):
            if not word:
                raise ValueError("pop on the empty word")
            word = word[1:] if tok == "-l" else word[:-1]
        elif len(tok) == 4 and tok[:3] in ("+l:", "+r:"):
            word = tok[3] + word if tok[1] == "l" else word + tok[3]
        else:
            raise ValueError(f"bad token {tok!r}")
    return word


# -- distances ---------------------------------------------------------------------

def _moves(w: str, letters: Sequence[str], metric: str) -> Iterable[str]:
    if metric == "lev":
        for i in range(len(w)):
            yield w[:i] + w[i + 1:]
            for a in letters:
                if a != w[i]:
                    yield w[:i] + a + w[i + 1:]
        for i in range(len(w) + 1):
            for a in letters:
                yield w[:i] + a + w[i:]
        return
    if w:
        yield w[:-1]
        if metric == "pp":
            yield w[1:]
    for a in letters:
        yield w + a
        if metric == "pp":
            yield a + w


def bfs_distance(u: str, v: str, metric: str = "pp") -> int:
    """Exact distance by breadth-first search of the edit graph (small words only)."""
    if u == v:
        return 0
    letters = sorted(set(u + v))
    cap = len(u) + len(v)
    seen = {u}
    frontier = [u]
    steps = 0
    while frontier:
        steps += 1
        nxt = []
        for w in frontier:
            for x in _moves(w, letters, metric):
                if x == v:
                    return steps
                if x not in seen and len(x) <= cap:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    raise AssertionError("edit graph search exhausted")


def ball(word: str, radius: int, letters: Sequence[str], metric: str = "pp") -> dict[str, int]:
    """Every word within ``radius`` edits of ``word`` with its distance."""
    seen = {word: 0}
    frontier = [word]
    for step in range(1, radius + 1):
        nxt = []
        for w in frontier:
            for x in _moves(w, letters, metric):
                if x not in seen:
                    seen[x] = step
                    nxt.append(x)
        frontier = nxt
    return seen


def lev_distance(u: str, v: str) -> int:
    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(go(i - 1, j) + 1, go(i, j - 1) + 1, go(i - 1, j - 1) + (u[i - 1] != v[j - 1]))

    return go(len(u), len(v))


def within(u: str, v: str, d: int, metric: str, letters: Sequence[str]) -> bool:
    if metric == "lev":
        return lev_distance(u, v) <= d
    if abs(len(u) - len(v)) > d:
        return False
    return v in ball(u, d, letters, metric)


def distance_to_language(dfa: Dfa, word: str) -> int:
    """Push-pop distance from ``word`` to the nearest accepted word.

    Any target x.f.y with f a factor of ``word`` costs (|word| - |f|) + |x| + |y|;
    the cheapest x and y for a given f come from shortest-path tables.
    """
    if dfa.initial is None or not dfa.finals:
        raise ValueError("empty language")
    to = {dfa.initial: 0}
    todo = deque([dfa.initial])
    while todo:
        q = todo.popleft()
        for a in dfa.alphabet:
            r = dfa.delta.get((q, a))
            if r is not None and r not in to:
                to[r] = to[q] + 1
                todo.append(r)
    back: dict = {}
    rev: dict = {}
    for (q, _a), r in dfa.delta.items():
        rev.setdefault(r, []).append(q)
    todo = deque(dfa.finals)
    for q in dfa.finals:
        back[q] = 0
    while todo:
        r = todo.popleft()
        for q in rev.get(r, []):
            if q not in back:
                back[q] = back[r] + 1
                todo.append(q)
    n = len(word)
    # empty common factor: pop the whole word, then push a shortest accepted word
    best = n + min(to[q] + back[q] for q in to if q in back)
    for i in range(n):
        for q in to:
            p = q
            for j in range(i, n):
                p = dfa.delta.get((p, word[j]))
                if p is None:
                    break
                if p in back:
                    best = min(best, n - (j - i + 1) + to[q] + back[p])
    return best


def language_distance_profile(dfa: Dfa, max_len: int) -> int:
    """Largest distance to the language over all words of length <= max_len."""
    worst = 0
    level = [""]
    for n in range(max_len + 1):
        for w in level:
            worst = max(worst, distance_to_language(dfa, w))
        if n < max_len:
            level = [w + a for w in level for a in dfa.alphabet]
    return worst


# -- stream verification --------------------------------------------------------------

@dataclass
class Violation:
    index: int
    kind: str
    message: str


@dataclass
class StreamReport:
    outputs: int
    words: list[str]
    max_script: int
    violations: list[Violation] = field(default_factory=list)
    strata_checked: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None


def verify_stream(
    scripts: Iterable,
    part: Dfa,
    bound: int,
    metric: str = "pp",
    ell: int | None = None,
    start: str = "",
    stop_at_first: bool = False,
) -> StreamReport:
    """Replay scripts from ``start`` and check every stream property.

    Scripts may be token strings or sequences of ops.  With ``ell`` the
    replay also checks that lengths never drop by more than ``ell`` and that
    every stratum the stream has moved past was emitted completely.
    """
    rep = StreamReport(0, [], 0)
    seen: set[str] = set()
    word = start
    longest = -1
    for idx, script in enumerate(scripts):
        toks = _tokens(script)
        rep.max_script = max(rep.max_script, len(toks))
        prev = word
        try:
            word = replay_tokens(word, toks)
        except ValueError as exc:
            rep.violations.append(Violation(idx, "apply", str(exc)))
            break
        rep.outputs += 1
        rep.words.append(word)
        if metric == "lev":
            cost = lev_distance(prev, word) if idx else len(word)
            if cost > bound:
                rep.violations.append(Violation(idx, "bound", f"Levenshtein step {cost} > {bound}"))
        else:
            if len(toks) > bound:
                rep.violations.append(Violation(idx, "bound", f"script of {len(toks)} ops > {bound}"))
            if metric == "ppr" and any(t[:2] in ("-l", "+l") for t in toks):
                rep.violations.append(Violation(idx, "metric", "left-end op in a right-only stream"))
        if not member(part, word):
            rep.violations.append(Violation(idx, "membership", f"{word!r} is not in the language"))
        if word in seen:
            rep.violations.append(Violation(idx, "repeat", f"{word!r} emitted twice"))
        seen.add(word)
        if ell is not None:
            if len(word) < longest - ell:
                rep.violations.append(
                    Violation(idx, "regression", f"length {len(word)} after a word of length {longest}")
                )
            longest = max(longest, len(word))
        if stop_at_first and rep.violations:
            return rep
    if ell is not None and longest >= ell:
        passed = longest // ell - 1  # strata 1..passed can no longer receive words
        expect: dict[int, set[str]] = {}
        for w in words_up_to(part, (passed + 1) * ell - 1):
            if len(w) < passed * ell:
                expect.setdefault(len(w) // ell + 1, set()).add(w)
        got: dict[int, set[str]] = {}
        for w in seen:
            if len(w) < passed * ell:
                got.setdefault(len(w) // ell + 1, set()).add(w)
        for i in range(1, passed + 1):
            missing = expect.get(i, set()) - got.get(i, set())
            if missing:
                sample = sorted(missing, key=lambda w: (len(w), w))[:3]
                rep.violations.append(
                    Violation(rep.outputs, "completeness", f"stratum {i}: {len(missing)} words missing, e.g. {sample}")
                )
            rep.strata_checked.append(i)
    return rep


# -- graphs, connectivity, orderability --------------------------------------------

def distance_masks(words: Sequence[str], d: int, metric: str = "lev") -> list[int]:
    """Adjacency bitmasks of the graph joining words at distance <= d."""
    letters = sorted(set("".join(words)))
    n = len(words)
    masks = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if within(words[i], words[j], d, metric, letters):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def hamiltonian_endpoints(masks: Sequence[int]) -> list[int]:
    """ends[S] = bitmask of vertices v such that some path visits exactly S and ends at v."""
    n = len(masks)
    ends = [0] * (1 << n)
    for v in range(n):
        ends[1 << v] = 1 << v
    for s in range(1, 1 << n):
        e = ends[s]
        if not e:
            continue
        v = 0
        while e:
            if e & 1:
                free = masks[v] & ~s
                while free:
                    low = free & -free
                    ends[s | low] |= low
                    free ^= low
            e >>= 1
            v += 1
    return ends


def has_hamiltonian_path(masks: Sequence[int]) -> bool:
    if not masks:
        return True
    if len(masks) > HAMILTON_CAP + 8:
        raise OracleCapError(f"{len(masks)} vertices is too many for exhaustive path search")
    return hamiltonian_endpoints(masks)[(1 << len(masks)) - 1] != 0


def min_path_cover(masks: Sequence[int]) -> int:
    """Fewest vertex-disjoint paths covering the graph (exhaustive over subsets)."""
    n = len(masks)
    if n == 0:
        return 0
    ends = hamiltonian_endpoints(masks)
    full = (1 << n) - 1
    inf = n + 1
    cover = [inf] * (1 << n)
    cover[0] = 0
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        sub = rest
        best = inf
        while True:
            part = sub | low
            if ends[part] and cover[s ^ part] + 1 < best:
                best = cover[s ^ part] + 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
        cover[s] = best
    return cover[full]


def check_td_orderable(words: Sequence[str], t: int, d: int, metric: str = "lev", cap: int = HAMILTON_CAP) -> bool:
    """Whether the words split into at most t sequences with consecutive distances <= d."""
    words = list(dict.fromkeys(words))
    if len(words) > cap:
        raise OracleCapError(f"{len(words)} words exceeds the exhaustive-search cap of {cap}")
    if t < 1:
        return not words
    return min_path_cover(distance_masks(words, d, metric)) <= t


def components(words: Sequence[str], d: int, metric: str = "pp") -> list[list[str]]:
    """Connected components of the distance-<=d graph, found through edit balls."""
    if len(words) > CONNECTIVITY_CAP:
        raise OracleCapError(f"{len(words)} words exceeds the connectivity cap of {CONNECTIVITY_CAP}")
    letters = sorted(set("".join(words)))
    pool = set(words)
    seen: set[str] = set()
    out = []
    for w in words:
        if w in seen:
            continue
        comp = []
        seen.add(w)
        todo = [w]
        while todo:
            u = todo.pop()
            comp.append(u)
            if metric == "lev":
                near = (x for x in pool if x not in seen and within(u, x, d, "lev", letters))
            else:
                near = (x for x in ball(u, d, letters, metric) if x in pool and x not in seen)
            for x in list(near):
                seen.add(x)
                todo.append(x)
        out.append(sorted(comp, key=lambda x: (len(x), x)))
    return out


@dataclass
class ConnectivityReport:
    ell: int
    d: int
    sizes: list[int]
    components: list[int]

    @property
    def connected(self) -> bool:
        return all(c <= 1 for c in self.components)

    def first_disconnected(self) -> int | None:
        for i, c in enumerate(self.components, start=1):
            if c > 1:
                return i
        return None


def check_stratum_connectivity(dfa: Dfa, ell: int, d: int, i_max: int, metric: str = "pp") -> ConnectivityReport:
    sizes, comps = [], []
    for i in range(1, i_max + 1):
        words = stratum_words(dfa, ell, i)
        sizes.append(len(words))
        comps.append(len(components(words, d, metric)) if words else 0)
    return ConnectivityReport(ell, d, sizes, comps)


def neighbourhood_words(words: Iterable[str], d: int, letters: Sequence[str], metric: str = "pp") -> set[str]:
    """All words within distance d of some word in ``words``."""
    out: set[str] = set()
    for w in words:
        out.update(ball(w, d, letters, metric))
    return out
