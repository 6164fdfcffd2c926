"""Word DAGs annotated by an automaton, grown stratum by stratum.

Nodes are integers; node 0 is the root (the empty word).  A node never stores
its word: it has one push-left parent (the word minus its first letter) and
one push-right parent (minus its last letter), and up to 2|alphabet| children.
Completing a node creates its missing children, plus any missing "pillar"
ancestors needed to keep both parent links of the new child in place.

Each node carries the automaton state reached by its word (-1 when the run
falls off), its distance to the nearest accepted node inside the DAG when
that is below ``reach`` (``INF`` otherwise), and its length modulo ``ell``.

Growth follows phases.  Phase 1 builds the short words; phase i expands
queued nodes of length below i*ell, always from the lowest non-empty queue
B_0..B_{ell-1}, and parks nodes of length exactly i*ell in a buffer that
seeds B_0 of the next phase.  A node is queued while it is incomplete and
either within ``reach`` of an accepted node or, with ``expand_live``, a
prefix of some accepted word.

Nodes also record their length.  The growth rules never read it except to
tell the phase boundary apart from shorter words of the same residue.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .automata import Dfa

INF = 1 << 30
NO_QUEUE = -1


class WordDag:
    def __init__(
        self,
        dfa: Dfa,
        ell: int,
        reach: int,
        *,
        expand_live: bool = False,
        full_init: bool = True,
        on_work: Callable[[int], None] | None = None,
        build: bool = True,
    ):
        if dfa.is_empty:
            raise ValueError("word DAGs need a non-empty language")
        if ell < 1 or reach < 1:
            raise ValueError("ell and reach must be positive")
        self.dfa = dfa
        self.alphabet = dfa.alphabet
        self.sigma = len(dfa.alphabet)
        self.width = 2 * self.sigma
        self.ell = ell
        self.reach = reach
        self.expand_live = expand_live
        self.full_init = full_init
        self.on_work = on_work
        self._table = dfa.table
        self._final = dfa.final_mask

        self.kids: list[int] = []
        self.par_l: list[int] = []
        self.let_l: list[int] = []
        self.par_r: list[int] = []
        self.let_r: list[int] = []
        self.state: list[int] = []
        self.dist: list[int] = []
        self.mod: list[int] = []
        self.depth: list[int] = []
        self.nkids: list[int] = []
        self.qtag: list[int] = []

        self.queues: list[deque[int]] = [deque() for _ in range(ell)]
        self.buffer: deque[int] = deque()
        self._lo = ell
        self.phase = 0
        self.boundary = ell
        self.work = 0
        self.accepted: dict[int, list[int]] = {}
        self.residency_violations: list[str] = []
        self.nobad_violations: list[str] = []
        self.pillars_created = 0
        if build:
            self.initialize()

    # -- small helpers ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.depth)

    def _tick(self, units: int) -> None:
        self.work += units
        if self.on_work is not None:
            self.on_work(units)

    def is_complete(self, n: int) -> bool:
        return self.nkids[n] == self.width

    def child(self, n: int, label: int) -> int:
        return self.kids[n * self.width + label]

    def label_name(self, label: int) -> str:
        if label < self.sigma:
            return "+l:" + self.alphabet[label]
        return "+r:" + self.alphabet[label - self.sigma]

    def eligible(self, n: int) -> bool:
        return self.dist[n] < self.reach or (self.expand_live and self.state[n] >= 0)

    def word(self, n: int) -> str:
        letters = []
        par, let = self.par_r, self.let_r
        while n:
            letters.append(self.alphabet[let[n]])
            n = par[n]
        return "".join(reversed(letters))

    def find(self, word: str) -> int:
        """Node of ``word`` following push-right edges from the root, or -1."""
        n = 0
        idx = self.dfa.letter_index
        for a in word:
            n = self.kids[n * self.width + self.sigma + idx[a]]
            if n < 0:
                return -1
        return n

    def neighbours(self, n: int) -> list[int]:
        base = n * self.width
        out = [c for c in self.kids[base:base + self.width] if c >= 0]
        if n:
            out.append(self.par_l[n])
            out.append(self.par_r[n])
        return out

    # -- node creation -----------------------------------------------------------

    def _new(self, pl: int, al: int, pr: int, ar: int, state: int) -> int:
        """Create the node a.u (u = pl, a = al) which is also v.b (v = pr, b = ar)."""
        n = len(self.depth)
        w = self.width
        if pl == pr and al != ar:
            self.nobad_violations.append(f"node {pl} would get push-left {al} and push-right {ar} to one child")
        self.kids.extend([-1] * w)
        self.par_l.append(pl)
        self.let_l.append(al)
        self.par_r.append(pr)
        self.let_r.append(ar)
        self.state.append(state)
        self.dist.append(INF)
        d = self.depth[pr] + 1
        self.depth.append(d)
        self.mod.append(d % self.ell)
        self.nkids.append(0)
        self.qtag.append(NO_QUEUE)
        self._attach(pl, al, n)
        self._attach(pr, self.sigma + ar, n)
        if state >= 0 and self._final[state]:
            self.accepted.setdefault(d // self.ell + 1, []).append(n)
        self._tick(1)
        return n

    def _attach(self, parent: int, label: int, child: int) -> None:
        slot = parent * self.width + label
        self.kids[slot] = child
        self.nkids[parent] += 1
        if self.nkids[parent] == self.width:
            self.qtag[parent] = NO_QUEUE

    def _make_root(self) -> None:
        q0 = self.dfa.index[self.dfa.initial]
        self.kids.extend([-1] * self.width)
        for lst, v in ((self.par_l, -1), (self.let_l, -1), (self.par_r, -1), (self.let_r, -1)):
            lst.append(v)
        self.state.append(q0)
        self.dist.append(0 if self._final[q0] else INF)
        self.depth.append(0)
        self.mod.append(0)
        self.nkids.append(0)
        self.qtag.append(NO_QUEUE)
        if self._final[q0]:
            self.accepted.setdefault(1, []).append(0)
        self._tick(1)

    # -- completion ----------------------------------------------------------------

    def _complete_left(self, n: int, a: int) -> tuple[int, list[int]]:
        """Create a.n and the missing pillars a.n_j for push-right ancestors n_j of n."""
        kids, w = self.kids, self.width
        chain: list[tuple[int, int]] = []
        cur = n
        while True:
            p, b = self.par_r[cur], self.let_r[cur]
            chain.append((p, b))
            if kids[p * w + a] >= 0:
                break
            cur = p
        top_parent, top_letter = chain[-1]
        upper = kids[top_parent * w + a]
        upper_letter = top_letter
        pillars = []
        table = self._table
        for j in range(len(chain) - 2, -1, -1):
            nj, bj = chain[j]
            q = self.state[upper]
            state = table[q][upper_letter] if q >= 0 else -1
            upper = self._new(nj, a, upper, upper_letter, state)
            upper_letter = bj
            pillars.append(upper)
        q = self.state[upper]
        state = table[q][upper_letter] if q >= 0 else -1
        child = self._new(n, a, upper, upper_letter, state)
        return child, pillars

    def _complete_right(self, n: int, a: int) -> tuple[int, list[int]]:
        """Create n.a and the missing pillars n_j.a for push-left ancestors n_j of n."""
        kids, w, s = self.kids, self.width, self.sigma
        chain: list[tuple[int, int]] = []
        cur = n
        while True:
            p, c = self.par_l[cur], self.let_l[cur]
            chain.append((p, c))
            if kids[p * w + s + a] >= 0:
                break
            cur = p
        top_parent, top_letter = chain[-1]
        upper = kids[top_parent * w + s + a]
        upper_letter = top_letter
        pillars = []
        table = self._table
        for j in range(len(chain) - 2, -1, -1):
            nj, cj = chain[j]
            q = self.state[nj]
            state = table[q][a] if q >= 0 else -1
            upper = self._new(upper, upper_letter, nj, a, state)
            upper_letter = cj
            pillars.append(upper)
        q = self.state[n]
        state = table[q][a] if q >= 0 else -1
        child = self._new(upper, upper_letter, n, a, state)
        return child, pillars

    def complete_node(self, n: int) -> list[int]:
        """Create every missing child of ``n`` (and pillars); returns the new nodes, annotated."""
        if self.is_complete(n):
            raise ValueError(f"node {n} is already complete")
        children, pillars = self._complete(n)
        return children + pillars

    def _complete(self, n: int) -> tuple[list[int], list[int]]:
        children: list[int] = []
        pillars: list[int] = []
        base = n * self.width
        for label in range(self.width):
            if self.kids[base + label] >= 0:
                continue
            if label < self.sigma:
                child, made = self._complete_left(n, label)
            else:
                child, made = self._complete_right(n, label - self.sigma)
            self.pillars_created += len(made)
            for x in made:
                self._annotate(x)
            self._annotate(child)
            children.append(child)
            pillars.extend(made)
        return children, pillars

    # -- annotations -----------------------------------------------------------------

    def _annotate(self, x: int) -> None:
        """Set the distance of a new node and relax the neighbourhood it improves."""
        dist = self.dist
        reach = self.reach
        if self.state[x] >= 0 and self._final[self.state[x]]:
            dx = 0
        else:
            best = min(dist[self.par_l[x]], dist[self.par_r[x]])
            base = x * self.width
            for c in self.kids[base:base + self.width]:
                if c >= 0 and dist[c] < best:
                    best = dist[c]
            dx = best + 1 if best + 1 < reach else INF
        dist[x] = dx
        if dx >= reach - 1:
            self._tick(1)
            return
        todo = deque([x])
        visited = 0
        kids, w = self.kids, self.width
        while todo:
            u = todo.popleft()
            visited += 1
            du = dist[u] + 1
            if du >= reach:
                continue
            base = u * w
            nbrs = [c for c in kids[base:base + w] if c >= 0]
            if u:
                nbrs.append(self.par_l[u])
                nbrs.append(self.par_r[u])
            for y in nbrs:
                if dist[y] > du:
                    was_far = dist[y] >= reach
                    dist[y] = du
                    if was_far and y != x and self.nkids[y] < w and self.qtag[y] == NO_QUEUE:
                        self._enqueue_any(y)
                    todo.append(y)
        self._tick(visited)

    def annotate(self, new_nodes: list[int]) -> None:
        for x in new_nodes:
            self._annotate(x)

    # -- queues ------------------------------------------------------------------------

    def _to_queue(self, n: int, j: int) -> None:
        if self.depth[n] >= self.boundary or self.depth[n] % self.ell != j:
            self.residency_violations.append(
                f"phase {self.phase}: node {n} of length {self.depth[n]} put in B_{j}"
            )
        self.qtag[n] = j
        self.queues[j].append(n)
        if j < self._lo:
            self._lo = j

    def _to_buffer(self, n: int) -> None:
        if self.depth[n] % self.ell != 0:
            self.residency_violations.append(f"phase {self.phase}: node {n} of length {self.depth[n]} buffered")
        self.qtag[n] = self.ell
        self.buffer.append(n)

    def _enqueue_any(self, n: int) -> None:
        """Queue a node whose distance just dropped within reach (or a new eligible node)."""
        if self.depth[n] >= self.boundary:
            self._to_buffer(n)
        else:
            self._to_queue(n, self.mod[n])

    def _route(self, children: list[int], pillars: list[int]) -> None:
        for x in children:
            if self.qtag[x] == NO_QUEUE and self.nkids[x] < self.width and self.eligible(x):
                self._enqueue_any(x)
        for x in pillars:
            if self.qtag[x] == NO_QUEUE and self.nkids[x] < self.width and self.eligible(x):
                self._to_queue(x, self.mod[x])

    def _pop(self) -> int:
        """Pop from the lowest non-empty queue, skipping unlinked entries; -1 when all are empty."""
        queues, qtag, ell = self.queues, self.qtag, self.ell
        while self._lo < ell:
            j = self._lo
            q = queues[j]
            while q:
                n = q.popleft()
                if qtag[n] == j:
                    qtag[n] = NO_QUEUE
                    return n
            self._lo += 1
        return -1

    def _drain(self) -> None:
        while True:
            n = self._pop()
            if n < 0:
                return
            self._tick(1)
            if self.nkids[n] == self.width:
                continue
            children, pillars = self._complete(n)
            self._route(children, pillars)

    # -- phases --------------------------------------------------------------------------

    def initialize(self) -> None:
        """Phase 1: the root, its children, then every short word (or, guided, every short eligible word)."""
        if self.phase:
            raise ValueError("already initialized")
        self.phase = 1
        self.boundary = self.ell
        self._make_root()
        self.qtag[0] = NO_QUEUE
        first = []
        for a in range(self.sigma):
            q0 = self.state[0]
            state = self._table[q0][a]
            x = self._new(0, a, 0, a, state)
            self._annotate(x)
            first.append(x)
        if self.full_init:
            level = first
            for _ in range(1, self.ell):
                nxt = []
                for n in level:
                    if self.nkids[n] < self.width:
                        children, pillars = self._complete(n)
                        if pillars:
                            raise AssertionError("pillars while building complete short levels")
                        nxt.extend(children)
                level = nxt
            for n in level:
                if self.qtag[n] == NO_QUEUE and self.nkids[n] < self.width and self.eligible(n):
                    self._to_buffer(n)
            # distances drop as deeper levels appear; requeue the buffer-eligible ones only
            for n in range(len(self)):
                if self.qtag[n] != NO_QUEUE and self.depth[n] != self.ell:
                    self.qtag[n] = NO_QUEUE
            for q in self.queues:
                q.clear()
            self._lo = self.ell
        else:
            self._route(first, [])
            self._drain()

    def run_phase(self) -> None:
        """Move the buffer into B_0, then expand until every queue is empty."""
        if self.phase < 1:
            raise ValueError("initialize first")
        self.phase += 1
        self.boundary = self.phase * self.ell
        moved = self.buffer
        self.buffer = deque()
        for n in moved:
            if self.qtag[n] == self.ell:
                self._to_queue(n, 0)
        self._drain()

    def run_until(self, phase: int) -> None:
        while self.phase < phase:
            self.run_phase()

    # -- inspection -----------------------------------------------------------------------

    def words(self) -> list[str]:
        out = [""] * len(self)
        for n in range(1, len(self)):
            out[n] = out[self.par_r[n]] + self.alphabet[self.let_r[n]]
        return out

    def accepted_nodes(self, i: int) -> list[int]:
        """Nodes of accepted words in stratum ``i`` discovered so far."""
        return self.accepted.get(i, [])

    def queued(self) -> list[tuple[int, int]]:
        """(queue index, node) for linked queue entries; the buffer has index ell."""
        out = []
        for j, q in enumerate(self.queues):
            out.extend((j, n) for n in q if self.qtag[n] == j)
        out.extend((self.ell, n) for n in self.buffer if self.qtag[n] == self.ell)
        return out

    def dump(self) -> str:
        """One line per node: id state dist mod L(parent,letter) R(parent,letter) [label=child ...]."""
        lines = []
        names = self.dfa.states
        for n in range(len(self)):
            st = "_" if self.state[n] < 0 else str(names[self.state[n]])
            ds = "inf" if self.dist[n] >= INF else str(self.dist[n])
            if n == 0:
                pl = pr = "-"
            else:
                pl = f"({self.par_l[n]},{self.alphabet[self.let_l[n]]})"
                pr = f"({self.par_r[n]},{self.alphabet[self.let_r[n]]})"
            kids = " ".join(
                f"{self.label_name(lab)}={c}"
                for lab in range(self.width)
                if (c := self.kids[n * self.width + lab]) >= 0
            )
            lines.append(f"{n} {st} {ds} {self.mod[n]} L{pl} R{pr} [{kids}]")
        return "\n".join(lines) + "\n"


# -- audit (desk scale) ---------------------------------------------------------------------

@dataclass
class AuditReport:
    nodes: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit(g: WordDag, d: int | None = None, check_distance_bound: bool = True) -> AuditReport:
    """Rebuild every word and check structure and annotations against brute force.

    Checks: root shape, both parent links, edge/word consistency (so all root
    paths agree), word uniqueness, double edges only with equal letters on
    powers of that letter, completeness counters, state/length/distance
    annotations, queue residency, and that every word lies within
    max(D', 6d) of the language, D' being the worst distance of a word
    shorter than 2d.
    """
    from .oracle import distance_to_language, language_distance_profile

    d = g.reach if d is None else d
    rep = AuditReport(len(g))
    bad = rep.violations
    n_nodes = len(g)
    w = g.width
    alpha = g.alphabet

    if g.par_l[0] != -1 or g.par_r[0] != -1:
        bad.append("root has a parent")
    if g.nkids[0] != w:
        bad.append("root is not complete")

    words = [""] * n_nodes
    for n in range(1, n_nodes):
        pl, pr = g.par_l[n], g.par_r[n]
        if not (0 <= pl < n and 0 <= pr < n):
            bad.append(f"node {n} lacks a parent")
            continue
        words[n] = words[pr] + alpha[g.let_r[n]]
        if alpha[g.let_l[n]] + words[pl] != words[n]:
            bad.append(f"node {n}: left path spells {alpha[g.let_l[n]] + words[pl]!r}, right path {words[n]!r}")
    if len(set(words)) != n_nodes:
        seen: dict[str, int] = {}
        for n, word in enumerate(words):
            if word in seen:
                bad.append(f"nodes {seen[word]} and {n} both spell {word!r}")
            seen.setdefault(word, n)

    for n in range(n_nodes):
        present = 0
        into: dict[int, list[int]] = {}
        for lab in range(w):
            c = g.kids[n * w + lab]
            if c < 0:
                continue
            present += 1
            into.setdefault(c, []).append(lab)
            letter = alpha[lab % g.sigma]
            expect = letter + words[n] if lab < g.sigma else words[n] + letter
            if words[c] != expect:
                bad.append(f"edge {g.label_name(lab)} from {n} reaches {words[c]!r}, expected {expect!r}")
            parent = g.par_l[c] if lab < g.sigma else g.par_r[c]
            if parent != n:
                bad.append(f"edge {g.label_name(lab)} from {n} to {c} has no matching parent link")
        if present != g.nkids[n]:
            bad.append(f"node {n}: child counter {g.nkids[n]} but {present} children")
        for c, labs in into.items():
            if len(labs) > 1:
                letters = {lab % g.sigma for lab in labs}
                if len(letters) > 1:
                    bad.append(f"node {n} reaches {c} by push-left and push-right with different letters")
                elif set(words[c]) != {alpha[letters.pop()]}:
                    bad.append(f"double edge from {n} to {c} but {words[c]!r} is not a letter power")
    bad.extend(g.nobad_violations)

    dfa = g.dfa
    accepted = []
    for n, word in enumerate(words):
        q = dfa.initial
        for a in word:
            q = dfa.delta.get((q, a))
            if q is None:
                break
        expect = -1 if q is None else dfa.index[q]
        if g.state[n] != expect:
            bad.append(f"node {n} ({word!r}): state {g.state[n]} expected {expect}")
        if q is not None and q in dfa.finals:
            accepted.append(n)
        if g.depth[n] != len(word) or g.mod[n] != len(word) % g.ell:
            bad.append(f"node {n} ({word!r}): length annotations {g.depth[n]}/{g.mod[n]}")

    true_dist = [INF] * n_nodes
    frontier = deque(accepted)
    for n in accepted:
        true_dist[n] = 0
    while frontier:
        u = frontier.popleft()
        if true_dist[u] + 1 >= g.reach:
            continue
        for v in g.neighbours(u):
            if true_dist[v] > true_dist[u] + 1:
                true_dist[v] = true_dist[u] + 1
                frontier.append(v)
    for n in range(n_nodes):
        if g.dist[n] != true_dist[n]:
            bad.append(f"node {n} ({words[n]!r}): distance {g.dist[n]} expected {true_dist[n]}")

    bad.extend(g.residency_violations)
    for j, n in g.queued():
        if g.nkids[n] == w:
            bad.append(f"complete node {n} still linked in queue {j}")
        if not g.eligible(n):
            bad.append(f"node {n} queued but neither near the language nor live")
        if j == g.ell:
            if g.depth[n] % g.ell:
                bad.append(f"buffered node {n} has length {g.depth[n]}")
        elif g.depth[n] % g.ell != j or g.depth[n] > g.boundary - 1:
            bad.append(f"node {n} of length {g.depth[n]} in B_{j} during phase {g.phase}")

    if check_distance_bound:
        d_short = language_distance_profile(dfa, 2 * d - 1)
        bound = max(d_short, 6 * d)
        for n, word in enumerate(words):
            if len(word) >= 2 * d and distance_to_language(dfa, word) > bound:
                bad.append(f"node {n} ({word!r}) is farther than {bound} from the language")
    return rep
