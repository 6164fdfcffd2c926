"""Constant-delay streams of edit scripts, one word of the language per script.

The producer grows a word DAG phase by phase.  After phase i the DAG holds
every word of stratum i, and since it is closed under taking factors, the
DAG distance between two of its words is their push-pop distance.  The
producer then links the stratum words by a spanning tree of DAG paths of
length <= d, walks the tree with gaps of at most three edges, and appends
one script per word to a FIFO.  Consecutive strata are joined through a
ladder of words r z^j t.

Producer work is counted in units (node creations, queue pops, search
steps, emitted ops).  The consumer runs on the same virtual clock: once the
first strata are in the FIFO it pops one script every ``cadence`` units,
and a pop that finds the FIFO empty is an underrun.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .automata import Dfa, trim
from .editops import POP_LEFT, POP_RIGHT, Script, push_left, push_right, script_between
from .interchange import build_partition
from .strata import (
    PROVEN,
    TIGHTENED,
    Ladder,
    SpanningTree,
    StratumError,
    StratumGraph,
    StratumParams,
    ladder,
    make_params,
    tree_order,
)
from .worddag import WordDag


class UnderrunError(RuntimeError):
    """The consumer found the FIFO empty after calibration."""


@dataclass
class StreamConfig:
    mode: str = TIGHTENED
    ell: int | None = None
    d: int | None = None
    part_index: int | None = None
    max_outputs: int | None = None
    cadence: int | None = None
    calibration_strata: int = 3
    allow_below_floor: bool = False
    strict: bool = True

    def __post_init__(self):
        if self.mode not in (PROVEN, TIGHTENED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == PROVEN and (self.ell is not None or self.d is not None):
            raise ValueError("proven mode fixes ell and d")
        if self.cadence is not None and self.cadence < 1:
            raise ValueError("cadence must be at least 1")
        if self.calibration_strata < 1:
            raise ValueError("calibration needs at least one stratum")

    def params_for(self, k: int) -> StratumParams:
        return make_params(k, self.mode, self.ell, self.d, allow_below_floor=self.allow_below_floor)


@dataclass
class StratumStats:
    index: int
    words: int
    finished_at: int
    radius: int


class ScriptStream:
    """Iterator over edit scripts; keeps the per-output work gaps.

    ``gaps[j]`` is the work elapsed between output j-1 and output j (for
    j = 0, since the start).  ``slack[j]`` is how far ahead of its due time
    script j was ready; negative values are underruns.
    """

    def __init__(self, source: Iterator[tuple[Script, int, int]], bound: int, max_outputs: int | None = None,
                 pipeline: "_Pipeline | None" = None):
        self._source = source
        self.bound = bound
        self.max_outputs = max_outputs
        self.pipeline = pipeline
        self.outputs = 0
        self.work = 0
        self.max_gap = 0
        self.gaps: list[int] = []
        self.slack: list[int] = []

    def __iter__(self) -> "ScriptStream":
        return self

    def __next__(self) -> Script:
        if self.max_outputs is not None and self.outputs >= self.max_outputs:
            raise StopIteration
        script, at, slack = next(self._source)
        gap = at - self.work
        self.work = at
        self.gaps.append(gap)
        self.slack.append(slack)
        if self.outputs and gap > self.max_gap:
            self.max_gap = gap
        self.outputs += 1
        return script

    def take(self, n: int) -> list[Script]:
        out = []
        for script in self:
            out.append(script)
            if len(out) == n:
                break
        return out

    @property
    def underruns(self) -> int:
        return sum(1 for s in self.slack if s < 0)

    @property
    def cadence(self) -> int | None:
        return self.pipeline.cadence if self.pipeline else None

    @property
    def params(self) -> StratumParams | None:
        return self.pipeline.params if self.pipeline else None


def replay(scripts: Iterable[Script], start: str = "") -> list[str]:
    """Words reached by applying the scripts one after another."""
    out = []
    word = start
    for script in scripts:
        for op in script:
            if op.kind == "pushR":
                word = word + op.letter
            elif op.kind == "pushL":
                word = op.letter + word
            elif op.kind == "popR":
                word = word[:-1]
            else:
                word = word[1:]
        out.append(word)
    return out


# -- the pipeline ------------------------------------------------------------------

class _Pipeline:
    def __init__(self, part: Dfa, cfg: StreamConfig, dag_options: dict | None = None):
        self.part = trim(part)
        if self.part.is_empty:
            raise ValueError("empty language")
        self.cfg = cfg
        self.params = cfg.params_for(self.part.size)
        self.ladder: Ladder = ladder(self.part, self.params)
        options = dict(
            reach=self.params.d, expand_live=False, full_init=True
        ) if cfg.mode == PROVEN else dict(reach=1, expand_live=True, full_init=False)
        options.update(dag_options or {})
        self.dag = WordDag(self.part, self.params.ell, build=False, **options)
        self.extra = 0
        self.fifo: deque[tuple[Script, int]] = deque()
        self.strata: list[StratumStats] = []
        self.pushed = 0
        self.cadence: int | None = cfg.cadence
        self.start_time: int | None = None
        self._push_ops = [push_left(a) for a in self.part.alphabet] + [push_right(a) for a in self.part.alphabet]
        self._producer = self._produce()

    @property
    def now(self) -> int:
        return self.dag.work + self.extra

    def _push(self, script: Script) -> None:
        self.extra += 1 + len(script)
        self.fifo.append((script, self.now))
        self.pushed += 1

    # ladder rungs are tracked as DAG nodes so long rung words are never spelled out
    def _follow_right(self, node: int, letters: str) -> int:
        g = self.dag
        idx = self.part.letter_index
        for a in letters:
            node = g.kids[node * g.width + g.sigma + idx[a]]
            if node < 0:
                raise StratumError("ladder word missing from the word DAG")
        self.extra += len(letters)
        return node

    def _rung_node(self, j: int) -> int:
        lad = self.ladder
        while self._spine_index < j:
            self._spine = self._follow_right(self._spine, lad.loop)
            self._spine_index += 1
        return self._follow_right(self._spine, lad.suffix)

    def _produce(self) -> Iterator[int]:
        g = self.dag
        lad = self.ladder
        g.initialize()
        self._spine = self._follow_right(0, lad.prefix)
        self._spine_index = 0
        i = 1
        while True:
            if i > 1:
                g.run_phase()
            nodes = g.accepted_nodes(i)
            if not nodes:
                raise StratumError(f"stratum {i} is empty")
            if i > 1:
                entry = self._rung_node(lad.first_index(i))
            exit_node = self._rung_node(lad.last_index(i))
            if i == 1:
                if g.state[0] >= 0 and self.part.final_mask[g.state[0]] and exit_node != 0:
                    entry = 0
                else:
                    others = [n for n in nodes if n != exit_node] or [exit_node]
                    entry = min(others, key=lambda n: (g.depth[n], n))
                word = g.word(entry)
                self._push(tuple(push_right(a) for a in word))
            else:
                self._push((POP_RIGHT,) * len(lad.suffix) + tuple(push_right(a) for a in lad.loop + lad.suffix))
            tree, fwd, back, radius = self._search_tree(nodes, entry, i)
            if len(nodes) > 1:
                pos_exit = tree.index[exit_node]
                order = tree_order(tree.tree, pos_exit)
                for u, v in zip(order, order[1:]):
                    climb, descend = tree.tree.path(u, v)
                    ops: list = []
                    for x in climb:
                        ops.extend(back[x])
                    for x in descend:
                        ops.extend(fwd[x])
                    self._push(tuple(ops))
            self.strata.append(StratumStats(i, len(nodes), self.now, radius))
            yield i
            i += 1

    def _search_tree(self, nodes: list[int], root: int, i: int):
        """Spanning tree over the stratum nodes whose edges are DAG paths of length <= d.

        Every attached stratum node becomes a source of a best-first search;
        a node's label is the length of its path back to a source.  A stratum
        node reached with label <= d is attached to that path's source.
        """
        g = self.dag
        d = self.params.d
        n = len(nodes)
        index = {x: k for k, x in enumerate(nodes)}
        if root not in index:
            raise StratumError(f"stratum {i}: entry word is not an accepted node")
        parent = [-1] * n
        depth = [0] * n
        children: list[list[int]] = [[] for _ in range(n)]
        fwd: list[Script] = [()] * n
        back: list[Script] = [()] * n
        label: dict[int, int] = {root: 0}
        pred: dict[int, tuple[int, object]] = {}
        attached = 1
        heap = [(0, 0, root)]
        seq = 1
        kids, w, s = g.kids, g.width, g.sigma
        par_l, par_r, let_l, let_r = g.par_l, g.par_r, g.let_l, g.let_r
        alphabet = g.alphabet
        push_ops = self._push_ops
        steps = 0
        longest = 0
        while heap and attached < n:
            lab, _, x = heapq.heappop(heap)
            steps += 1
            if lab != label[x] or lab >= d:
                continue
            base = x * w
            nbrs = [(kids[base + c], push_ops[c]) for c in range(w) if kids[base + c] >= 0]
            if x:
                nbrs.append((par_l[x], POP_LEFT))
                nbrs.append((par_r[x], POP_RIGHT))
            steps += len(nbrs)
            for y, op in nbrs:
                ly = label.get(y)
                if ly is not None and ly <= lab + 1:
                    continue
                k = index.get(y)
                if k is None:
                    label[y] = lab + 1
                    pred[y] = (x, op)
                    heapq.heappush(heap, (lab + 1, seq, y))
                    seq += 1
                    continue
                # attach stratum node y through x
                path = [(x, y, op)]
                z = x
                while label[z]:
                    pz, pop = pred[z]
                    path.append((pz, z, pop))
                    z = pz
                path.reverse()
                src = index[z]
                forward = tuple(step_op for _, _, step_op in path)
                backward = []
                for a, b, step_op in reversed(path):
                    kind = step_op.kind
                    if kind == "pushL":
                        backward.append(POP_LEFT)
                    elif kind == "pushR":
                        backward.append(POP_RIGHT)
                    elif kind == "popL":
                        backward.append(push_left(alphabet[let_l[a]]))
                    else:
                        backward.append(push_right(alphabet[let_r[a]]))
                parent[k] = src
                depth[k] = depth[src] + 1
                children[src].append(k)
                fwd[k] = forward
                back[k] = tuple(backward)
                longest = max(longest, len(forward))
                label[y] = 0
                pred.pop(y, None)
                heapq.heappush(heap, (0, seq, y))
                seq += 1
                attached += 1
                steps += len(path)
        self.extra += steps
        if attached < n:
            where = "internal error: " if self.cfg.mode == PROVEN else ""
            raise StratumError(
                f"{where}stratum {i} is not connected at distance {d}: "
                f"{n - attached} of {n} words unreachable from the entry"
            )
        tree = SpanningTree(index[root], parent, depth, children, fwd)
        return _IndexedTree(tree, index), fwd, back, longest

    def ensure(self, count: int) -> None:
        """Run the producer until ``count`` scripts have been pushed in total."""
        while self.pushed < count:
            next(self._producer)

    def calibrate(self) -> None:
        """Run the producer alone over the first strata and fix the cadence from the measured work."""
        c = self.cfg.calibration_strata
        while len(self.strata) < c:
            next(self._producer)
        finished = [st.finished_at for st in self.strata]
        sizes = [st.words for st in self.strata]
        totals = [sum(sizes[: j + 1]) for j in range(len(sizes))]
        if self.cadence is None:
            if c == 1:
                ratio = finished[0] / totals[0]
            else:
                ratio = max(finished[j + 1] / totals[j] for j in range(c - 1))
            self.cadence = max(1, math.ceil(2 * ratio))
        self.start_time = finished[c - 1]

    def scripts(self) -> Iterator[tuple[Script, int, int]]:
        self.calibrate()
        due = self.start_time
        cadence = self.cadence
        strict = self.cfg.strict
        j = 0
        while True:
            self.ensure(j + 1)
            script, pushed_at = self.fifo.popleft()
            slack = due - pushed_at
            if slack < 0:
                if strict:
                    raise UnderrunError(
                        f"output {j}: script ready at work {pushed_at}, due at {due} (cadence {cadence})"
                    )
                due = pushed_at
            yield script, due, slack
            due += cadence
            j += 1


@dataclass
class _IndexedTree:
    tree: SpanningTree
    index: dict[int, int]


# -- public entry points -----------------------------------------------------------

def enumerate_part(part: Dfa, cfg: StreamConfig | None = None, dag_options: dict | None = None) -> ScriptStream:
    """Unbounded stream over an interchangeable part with an infinite language."""
    cfg = cfg or StreamConfig()
    pipe = _Pipeline(part, cfg, dag_options)
    return ScriptStream(pipe.scripts(), pipe.params.script_bound, cfg.max_outputs, pipe)


def enumerate_finite(words: Iterable[str], d_bound: int | None = None) -> ScriptStream:
    """Every word once, shortest first; each script is a shortest push-pop script."""
    words = sorted(dict.fromkeys(words), key=lambda w: (len(w), w))
    longest = max((len(w) for w in words), default=0)
    trivial = 2 * longest
    if d_bound is None:
        d_bound = trivial
    if d_bound < trivial:
        raise ValueError(f"bound {d_bound} is below the pop-all/push-all bound {trivial}")

    def source() -> Iterator[tuple[Script, int, int]]:
        prev = ""
        for j, w in enumerate(words):
            yield script_between(prev, w), j + 1, 0
            prev = w

    return ScriptStream(source(), d_bound)


def enumerate_language(dfa: Dfa, cfg: StreamConfig | None = None) -> list[ScriptStream]:
    """One stream per part of the minimal partition (or only ``cfg.part_index``)."""
    cfg = cfg or StreamConfig()
    partition = build_partition(dfa)
    streams = []
    for i, part in enumerate(partition.parts):
        if cfg.part_index is not None and i != cfg.part_index:
            continue
        if partition.finite:
            from .automata import enumerate_by_length

            longest = max(part.size - 1, 0)
            stream = enumerate_finite(enumerate_by_length(part, longest))
            stream.max_outputs = cfg.max_outputs
        else:
            stream = enumerate_part(part, cfg)
        streams.append(stream)
    if cfg.part_index is not None and not streams:
        raise ValueError(f"part {cfg.part_index} does not exist; there are {partition.t}")
    return streams


# -- stratum graphs read off the DAG (small strata, for inspection and tests) ---------

def extract_stratum_graph(g: WordDag, i: int, d: int, lad: Ladder | None = None) -> StratumGraph:
    """Explicit graph of stratum i: an edge for every DAG path of length <= d between its words.

    Paths are found by breadth-first search from each word, so this is
    quadratic-ish and meant for small strata.  With a ladder the entry and
    exit are set to its rungs (stratum 1: the empty word if accepted).
    """
    nodes = sorted(g.accepted_nodes(i), key=lambda n: (g.depth[n], g.word(n)))
    words = [g.word(n) for n in nodes]
    index = {x: k for k, x in enumerate(nodes)}
    adj: list[list[tuple[int, Script]]] = [[] for _ in nodes]
    alphabet = g.alphabet
    for k, x in enumerate(nodes):
        prev: dict[int, tuple[int, object]] = {x: (-1, None)}
        frontier = [x]
        for _ in range(d):
            nxt = []
            for u in frontier:
                base = u * g.width
                steps = [(g.kids[base + c], push_left(alphabet[c]) if c < g.sigma else push_right(alphabet[c - g.sigma]))
                         for c in range(g.width) if g.kids[base + c] >= 0]
                if u:
                    steps += [(g.par_l[u], POP_LEFT), (g.par_r[u], POP_RIGHT)]
                for y, op in steps:
                    if y not in prev:
                        prev[y] = (u, op)
                        nxt.append(y)
            frontier = nxt
        for y, kk in index.items():
            if kk == k or y not in prev:
                continue
            ops = []
            z = y
            while z != x:
                pz, op = prev[z]
                ops.append(op)
                z = pz
            adj[k].append((kk, tuple(reversed(ops))))
        adj[k].sort(key=lambda e: e[0])
    graph = StratumGraph(words, adj, index=i, bound=d)
    if lad is not None and words:
        entry_w, exit_w = lad.rung(i)
        if entry_w is None:
            entry_w = "" if "" in words else next(w for w in words if w != exit_w)
        graph.set_endpoints(entry_w, exit_w)
    return graph
