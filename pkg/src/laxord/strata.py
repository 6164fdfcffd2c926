"""Strata, stratum graphs and the spanning-tree ordering with gaps of three edges.

A stratum of width ``ell`` groups the words whose length lies in
[(i-1)*ell, i*ell).  Inside a stratum whose graph is connected at distance d,
walking a spanning tree in the even-prefix / odd-postfix order yields every
word once with consecutive words at most three tree edges (3d edits) apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping, Sequence

from .automata import Dfa, shortest_accepted_from, shortest_words, words_of_length
from .editops import PUSHPOP, Script, apply, distance, inverse_op, script_between

PROVEN = "proven"
TIGHTENED = "tightened"


class StratumError(ValueError):
    pass


@dataclass(frozen=True)
class StratumParams:
    ell: int
    d: int
    k: int
    mode: str = TIGHTENED
    below_floor: bool = False

    @property
    def script_bound(self) -> int:
        return 3 * self.d


def make_params(
    k: int,
    mode: str = TIGHTENED,
    ell: int | None = None,
    d: int | None = None,
    allow_below_floor: bool = False,
) -> StratumParams:
    """Stratum width and distance for an automaton with ``k`` states.

    Proven mode fixes ell = 8k^2 and d = 16k^2, for which every stratum of an
    interchangeable automaton is d-connected.  Tightened mode defaults to
    ell = max(2k, 2) and d = max(3k, 3) and refuses anything smaller, since
    a ladder built from words of length <= k needs ell >= 2k and d >= 3k.
    With ``allow_below_floor`` smaller values are accepted; :func:`ladder`
    then checks them against the loop it actually uses.
    """
    if k < 1:
        raise StratumError("an automaton has at least one state")
    if mode == PROVEN:
        if ell is not None or d is not None:
            raise StratumError("proven mode fixes ell and d")
        return StratumParams(8 * k * k, 16 * k * k, k, PROVEN)
    if mode != TIGHTENED:
        raise StratumError(f"unknown mode {mode!r}")
    ell = max(2 * k, 2) if ell is None else ell
    d = max(3 * k, 3) if d is None else d
    if ell < 1 or d < 1:
        raise StratumError("ell and d must be positive")
    if allow_below_floor:
        return StratumParams(ell, d, k, TIGHTENED, below_floor=True)
    if ell < max(2 * k, 2) or d < max(3 * k, 3):
        raise StratumError(
            f"ell={ell}, d={d} is below the floor ell >= {max(2 * k, 2)}, d >= {max(3 * k, 3)} for k={k}"
        )
    return StratumParams(ell, d, k, TIGHTENED)


def stratum_of_length(n: int, ell: int) -> int:
    return n // ell + 1


def stratum(dfa: Dfa, p: StratumParams, i: int) -> list[str]:
    """Accepted words with (i-1)*ell <= |w| < i*ell, by length then lexicographically."""
    if i < 1:
        raise StratumError("strata are numbered from 1")
    out: list[str] = []
    for n in range((i - 1) * p.ell, i * p.ell):
        out.extend(words_of_length(dfa, n))
    return out


# -- stratum graphs over explicit words -----------------------------------------

@dataclass
class StratumGraph:
    """Words of one stratum joined whenever a short script links them.

    ``adj[u]`` lists ``(v, script)`` with ``apply(words[u], script) == words[v]``;
    every edge is stored in both directions.
    """

    words: list[str]
    adj: list[list[tuple[int, Script]]]
    index: int = 0
    entry: int | None = None
    exit: int | None = None
    bound: int = 0

    def __len__(self) -> int:
        return len(self.words)

    def position(self, word: str) -> int:
        return self.words.index(word)

    def set_endpoints(self, entry: str, exit: str) -> None:
        self.entry = self.position(entry)
        self.exit = self.position(exit)

    def edges(self) -> Iterator[tuple[int, int, Script]]:
        for u, nbrs in enumerate(self.adj):
            for v, s in nbrs:
                if u < v:
                    yield u, v, s


def stratum_graph(words: Sequence[str], d: int, metric: str = PUSHPOP) -> StratumGraph:
    """Pairwise graph: u and v are adjacent iff their distance is at most ``d``."""
    words = list(words)
    if len(set(words)) != len(words):
        raise StratumError("stratum words must be distinct")
    adj: list[list[tuple[int, Script]]] = [[] for _ in words]
    for i, u in enumerate(words):
        for j in range(i + 1, len(words)):
            v = words[j]
            if abs(len(u) - len(v)) > d:
                continue
            if distance(u, v, metric) <= d:
                adj[i].append((j, script_between(u, v, metric)))
                adj[j].append((i, script_between(v, u, metric)))
    return StratumGraph(words, adj, bound=d)


def components(n: int, neighbours: Callable[[int], Iterator[int]]) -> list[list[int]]:
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        todo = [s]
        while todo:
            u = todo.pop()
            for v in neighbours(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    todo.append(v)
        out.append(sorted(comp))
    return out


def is_d_connected(g: StratumGraph) -> bool:
    if len(g) == 0:
        return True
    return len(components(len(g), lambda u: (v for v, _ in g.adj[u]))) == 1


# -- spanning trees and the three-gap traversal ---------------------------------

@dataclass
class SpanningTree:
    """Rooted tree over nodes 0..n-1; ``up[v]`` is the payload of the edge parent -> v."""

    root: int
    parent: list[int]
    depth: list[int]
    children: list[list[int]]
    up: list[object] = field(default_factory=list)

    def path(self, u: int, v: int) -> tuple[list[int], list[int]]:
        """Nodes climbed from u (exclusive of the meeting point) and descended to v."""
        climb, descend = [], []
        parent, depth = self.parent, self.depth
        while depth[u] > depth[v]:
            climb.append(u)
            u = parent[u]
        while depth[v] > depth[u]:
            descend.append(v)
            v = parent[v]
        while u != v:
            climb.append(u)
            descend.append(v)
            u, v = parent[u], parent[v]
        descend.reverse()
        return climb, descend

    def distance(self, u: int, v: int) -> int:
        climb, descend = self.path(u, v)
        return len(climb) + len(descend)


def dfs_spanning_tree(n: int, root: int, neighbours: Callable[[int], Iterator[tuple[int, object]]]) -> SpanningTree:
    """Depth-first spanning tree; children keep discovery order.  Raises if disconnected."""
    parent = [-1] * n
    depth = [0] * n
    up: list[object] = [None] * n
    children: list[list[int]] = [[] for _ in range(n)]
    seen = [False] * n
    seen[root] = True
    count = 1
    stack = [(root, neighbours(root))]
    while stack:
        u, it = stack[-1]
        for v, payload in it:
            if not seen[v]:
                seen[v] = True
                count += 1
                parent[v] = u
                depth[v] = depth[u] + 1
                up[v] = payload
                children[u].append(v)
                stack.append((v, neighbours(v)))
                break
        else:
            stack.pop()
    if count != n:
        missing = [v for v in range(n) if not seen[v]]
        raise StratumError(f"graph is disconnected: {len(missing)} of {n} nodes unreachable from the root")
    return SpanningTree(root, parent, depth, children, up)


_EXPLORE, _ENUM = 0, 1


def tree_order(tree: SpanningTree, end: int) -> list[int]:
    """Every node once, from the root to ``end``, consecutive nodes <= 3 tree edges apart.

    Even-depth nodes are listed before their subtrees, odd-depth nodes after,
    except that an odd node on the root-to-end path is listed just before its
    child on that path, which always comes last.  Once ``end`` is reached its
    subtree is listed as if ``end`` had odd depth, so the walk finishes on it.
    """
    n = len(tree.parent)
    if end == tree.root:
        if n == 1:
            return [end]
        raise StratumError("start and end must differ")
    special = [False] * n
    x = end
    while x != -1:
        special[x] = True
        x = tree.parent[x]
    out: list[int] = []
    stack: list[tuple[int, int, int]] = [(_EXPLORE, tree.root, 0)]
    while stack:
        act, node, depth = stack.pop()
        if act == _ENUM:
            out.append(node)
            continue
        kids = tree.children[node]
        if node == end:
            ops = [(_EXPLORE, c, 2) for c in kids] + [(_ENUM, node, 1)]
        else:
            if special[node]:
                kids = [c for c in kids if not special[c]] + [c for c in kids if special[c]]
            if depth % 2 == 0:
                ops = [(_ENUM, node, depth)] + [(_EXPLORE, c, depth + 1) for c in kids]
            elif special[node]:
                ops = (
                    [(_EXPLORE, c, depth + 1) for c in kids[:-1]]
                    + [(_ENUM, node, depth)]
                    + [(_EXPLORE, kids[-1], depth + 1)]
                )
            else:
                ops = [(_EXPLORE, c, depth + 1) for c in kids] + [(_ENUM, node, depth)]
        stack.extend(reversed(ops))
    return out


def tree_ordering(adjacency: Mapping[Hashable, Sequence[Hashable]], s: Hashable, e: Hashable) -> list:
    """Order the nodes of an undirected tree from ``s`` to ``e`` with gaps of at most 3."""
    nodes = list(adjacency)
    pos = {v: i for i, v in enumerate(nodes)}
    if s not in pos or e not in pos:
        raise StratumError("start and end must be tree nodes")
    if s == e and len(nodes) > 1:
        raise StratumError("start and end must differ")
    edges = sum(len(adjacency[v]) for v in nodes)
    if edges != 2 * (len(nodes) - 1):
        raise StratumError("input is not a tree")
    tree = dfs_spanning_tree(len(nodes), pos[s], lambda u: ((pos[w], None) for w in adjacency[nodes[u]]))
    return [nodes[i] for i in tree_order(tree, pos[e])]


@dataclass
class Ordering:
    words: list[str]
    scripts: list[Script]

    def max_gap(self) -> int:
        return max((len(s) for s in self.scripts), default=0)


def _reverse_script(word: str, script: Script) -> Script:
    back = []
    for op in script:
        back.append(inverse_op(op, word))
        word = apply(word, (op,))
    back.reverse()
    return tuple(back)


def order_stratum(g: StratumGraph) -> Ordering:
    """Ordering of all stratum words from entry to exit, each step <= 3 edges of the graph."""
    n = len(g)
    if n == 0:
        return Ordering([], [])
    if g.entry is None or g.exit is None:
        raise StratumError("entry and exit must be set before ordering")
    tree = dfs_spanning_tree(n, g.entry, lambda u: iter(g.adj[u]))
    order = tree_order(tree, g.exit)
    down = tree.up  # script parent -> child
    scripts = []
    for u, v in zip(order, order[1:]):
        climb, descend = tree.path(u, v)
        ops: list = []
        for x in climb:
            ops.extend(_reverse_script(g.words[tree.parent[x]], down[x]))
        for x in descend:
            ops.extend(down[x])
        scripts.append(tuple(ops))
    return Ordering([g.words[i] for i in order], scripts)


# -- ladders ----------------------------------------------------------------------

@dataclass(frozen=True)
class Ladder:
    """Words r z^j t of an interchangeable automaton, used as stratum entry and exit points."""

    prefix: str
    loop: str
    suffix: str
    ell: int

    def word(self, j: int) -> str:
        return self.prefix + self.loop * j + self.suffix

    def _length(self, j: int) -> int:
        return len(self.prefix) + len(self.suffix) + j * len(self.loop)

    def first_index(self, i: int) -> int:
        """Smallest j whose word lies in stratum i or later."""
        lo = (i - 1) * self.ell - len(self.prefix) - len(self.suffix)
        return max(0, -(-lo // len(self.loop)))

    def last_index(self, i: int) -> int:
        """Largest j whose word lies in stratum i or earlier."""
        hi = i * self.ell - 1 - len(self.prefix) - len(self.suffix)
        return hi // len(self.loop)

    @property
    def step(self) -> int:
        """Length of the script popping t and pushing z t, which joins consecutive rungs."""
        return 2 * len(self.suffix) + len(self.loop)

    def rung(self, i: int) -> tuple[str | None, str]:
        """(entry, exit) of stratum i; stratum 1 has no prescribed entry."""
        exit_word = self.word(self.last_index(i))
        if i == 1:
            return None, exit_word
        return self.word(self.first_index(i)), exit_word


def ladder(dfa: Dfa, p: StratumParams) -> Ladder:
    """Pick r, z, t through one loopable state so that every stratum holds two rungs.

    The loopable state minimizes (|z|, |r| + |t|, state).  Raises when the
    language is finite or the parameters are below the ell >= 2k, d >= 3k floor.
    Parameters explicitly allowed below that floor must still fit the chosen
    words: ell >= 2|z| (two rungs per stratum), |r| + |t| < ell (a rung in
    stratum 1) and d >= 2|t| + |z| (consecutive rungs within d).
    """
    from .interchange import loopable_states

    k = dfa.size
    if not p.below_floor and (p.ell < 2 * k or p.d < 3 * k):
        raise StratumError(f"ladder needs ell >= {2 * k} and d >= {3 * k}")
    info = loopable_states(dfa)
    if not info.loopable:
        raise StratumError("finite language has no ladder")
    reach = shortest_words(dfa)
    best = None
    for q in sorted(info.loopable):
        z = info.witness_loop[q]
        r = reach[q]
        t = shortest_accepted_from(dfa, q)
        key = (len(z), len(r) + len(t), q)
        if best is None or key < best[0]:
            best = (key, r, z, t)
    _, r, z, t = best
    lad = Ladder(r, z, t, p.ell)
    if p.ell < 2 * len(z) or len(r) + len(t) >= p.ell or p.d < lad.step:
        raise StratumError(
            f"ell={p.ell}, d={p.d} too small for the ladder r={r!r} z={z!r} t={t!r}: "
            f"need ell >= {max(2 * len(z), len(r) + len(t) + 1)} and d >= {lad.step}"
        )
    return lad
