"""Push-pop edit operations, edit scripts and the three word distances.

A script is a tuple of :class:`EditOp`.  Its text form is one token per op:
``+l:<x>`` push left, ``+r:<x>`` push right, ``-l`` pop left, ``-r`` pop right.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, NamedTuple, Sequence

PUSH_L = "pushL"
PUSH_R = "pushR"
POP_L = "popL"
POP_R = "popR"
KINDS = (PUSH_L, PUSH_R, POP_L, POP_R)

PUSHPOP = "pp"
PUSHPOP_RIGHT = "ppr"
LEVENSHTEIN = "lev"
METRICS = (PUSHPOP, PUSHPOP_RIGHT, LEVENSHTEIN)

_METRIC_ALIASES = {
    "pp": PUSHPOP,
    "pushpop": PUSHPOP,
    "ppr": PUSHPOP_RIGHT,
    "pushpop_right": PUSHPOP_RIGHT,
    "lev": LEVENSHTEIN,
    "levenshtein": LEVENSHTEIN,
}


def metric_name(m: str) -> str:
    try:
        return _METRIC_ALIASES[m]
    except KeyError:
        raise ValueError(f"unknown metric {m!r}; expected one of pp, ppr, lev") from None


class EditOp(NamedTuple):
    kind: str
    letter: str | None = None

    @property
    def token(self) -> str:
        if self.kind == PUSH_L:
            return "+l:" + self.letter
        if self.kind == PUSH_R:
            return "+r:" + self.letter
        return "-l" if self.kind == POP_L else "-r"

    @property
    def is_push(self) -> bool:
        return self.kind in (PUSH_L, PUSH_R)

    @property
    def is_right(self) -> bool:
        return self.kind in (PUSH_R, POP_R)


Script = tuple  # tuple[EditOp, ...]


def push_left(a: str) -> EditOp:
    return EditOp(PUSH_L, a)


def push_right(a: str) -> EditOp:
    return EditOp(PUSH_R, a)


POP_LEFT = EditOp(POP_L)
POP_RIGHT = EditOp(POP_R)


class ScriptError(ValueError):
    """A pop was attempted on the empty word, or a token could not be parsed."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(f"op {index}: {message}")


def parse_token(tok: str) -> EditOp:
    if tok == "-l":
        return POP_LEFT
    if tok == "-r":
        return POP_RIGHT
    if len(tok) == 4 and tok[0] == "+" and tok[2] == ":" and tok[1] in "lr":
        return EditOp(PUSH_L if tok[1] == "l" else PUSH_R, tok[3])
    raise ValueError(f"bad edit token {tok!r}")


def encode_script(script: Iterable[EditOp]) -> str:
    return " ".join(op.token for op in script)


def decode_script(line: str) -> Script:
    return tuple(parse_token(t) for t in line.split())


def apply(word: str, script: Iterable[EditOp]) -> str:
    """Apply ops left to right; raises :class:`ScriptError` on a pop from the empty word."""
    for i, op in enumerate(script):
        kind = op.kind
        if kind == PUSH_R:
            word = word + op.letter
        elif kind == PUSH_L:
            word = op.letter + word
        elif not word:
            raise ScriptError("pop on the empty word", i)
        elif kind == POP_R:
            word = word[:-1]
        else:
            word = word[1:]
    return word


def inverse_op(op: EditOp, word: str) -> EditOp:
    """The op undoing ``op`` when applied right after it on ``word``."""
    if op.kind == PUSH_L:
        return POP_LEFT
    if op.kind == PUSH_R:
        return POP_RIGHT
    if not word:
        raise ScriptError("pop on the empty word", 0)
    return push_left(word[0]) if op.kind == POP_L else push_right(word[-1])


# -- distances ---------------------------------------------------------------

def common_prefix(u: str, v: str) -> int:
    n = 0
    for x, y in zip(u, v):
        if x != y:
            break
        n += 1
    return n


def longest_common_factor(u: str, v: str) -> int:
    """Length of the longest common contiguous factor (dynamic programming)."""
    best = 0
    prev = [0] * (len(v) + 1)
    for x in u:
        cur = [0] * (len(v) + 1)
        for j, y in enumerate(v, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
                if cur[j] > best:
                    best = cur[j]
        prev = cur
    return best


def levenshtein(u: str, v: str) -> int:
    prev = list(range(len(v) + 1))
    for i, x in enumerate(u, start=1):
        cur = [i]
        for j, y in enumerate(v, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def distance(u: str, v: str, metric: str = PUSHPOP, exact_bfs: bool = False) -> int:
    """Minimal edit cost between ``u`` and ``v``.

    Push-pop distances use the closed forms (common factor, common prefix);
    ``exact_bfs`` searches the edit graph instead, for arbitration.
    """
    metric = metric_name(metric)
    if metric == LEVENSHTEIN:
        return levenshtein(u, v)
    if exact_bfs:
        return edit_graph_distance(u, v, right_only=metric == PUSHPOP_RIGHT)
    if metric == PUSHPOP_RIGHT:
        return len(u) + len(v) - 2 * common_prefix(u, v)
    return len(u) + len(v) - 2 * longest_common_factor(u, v)


def _neighbours(w: str, letters: Sequence[str], right_only: bool) -> Iterator[str]:
    if w:
        yield w[:-1]
        if not right_only:
            yield w[1:]
    for a in letters:
        yield w + a
        if not right_only:
            yield a + w


def edit_graph_distance(u: str, v: str, right_only: bool = False) -> int:
    """Breadth-first search over the push-pop edit graph.

    A shortest path costs D <= |u| + |v| (pop everything, push everything);
    after k steps its word is no longer than |u| + k and no longer than
    |v| + D - k, hence never longer than |u| + |v|.  The search is cut there,
    and letters outside u and v never help.
    """
    if u == v:
        return 0
    letters = sorted(set(u) | set(v))
    cap = len(u) + len(v)
    seen = {u: 0}
    queue = deque([u])
    while queue:
        w = queue.popleft()
        dw = seen[w]
        for x in _neighbours(w, letters, right_only):
            if x not in seen and len(x) <= cap:
                if x == v:
                    return dw + 1
                seen[x] = dw + 1
                queue.append(x)
    raise AssertionError("edit graph search exhausted")  # unreachable: pop-all/push-all path exists


def script_between(u: str, v: str, metric: str = PUSHPOP) -> Script:
    """A shortest script turning ``u`` into ``v``.

    Scripts pop first (left pops before right pops), then push.  Among the
    shortest scripts of that shape the lexicographically least token sequence
    is returned, which makes edge labels deterministic.
    """
    metric = metric_name(metric)
    if metric == LEVENSHTEIN:
        raise ValueError("Levenshtein distances have no push-pop witness script")
    if metric == PUSHPOP_RIGHT:
        p = common_prefix(u, v)
        return (POP_RIGHT,) * (len(u) - p) + tuple(push_right(a) for a in v[p:])
    best_len = longest_common_factor(u, v)
    best: tuple[str, ...] | None = None
    best_script: Script = ()
    for i in range(len(u) - best_len + 1):
        factor = u[i:i + best_len]
        j = v.find(factor)
        while j >= 0:
            script = (
                (POP_LEFT,) * i
                + (POP_RIGHT,) * (len(u) - i - best_len)
                + tuple(push_left(a) for a in reversed(v[:j]))
                + tuple(push_right(a) for a in v[j + best_len:])
            )
            key = tuple(op.token for op in script)
            if best is None or key < best:
                best, best_script = key, script
            j = v.find(factor, j + 1)
    return best_script
