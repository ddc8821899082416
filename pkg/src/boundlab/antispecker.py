"""Escape-schedule construction over bounded trees of compatible sequences.

The ambient data is a basic open together with an oracle that, for each
index n, decides at some tree depth whether the n-th term has escaped to
the extra point (star) or not.  Bounded subtrees see only finitely many
non-star nodes; the staged construction exploits that to shrink the open
into one whose members make the term sequence eventually star, up to a
finite frontier M, verified level by level on the requested window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import BadCandidate, OracleNotTotal, ScheduleUnsound
from .seq_opens import BasicOpen, BoundSchedule, compatible_nodes

Node = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class StarOracle:
    """Per-index decision data: deciding depth and star/non-star labels.

    With ``default_star`` set, unlisted labels count as star, which keeps
    generated oracles sparse; otherwise a missing label is a totality hole.
    """

    levels: Mapping[int, int]
    labels: Mapping[tuple[int, Node], bool]
    default_star: bool = False

    def __post_init__(self):
        object.__setattr__(self, "levels", dict(self.levels))
        object.__setattr__(
            self, "labels", {(n, tuple(node)): bool(s) for (n, node), s in self.labels.items()}
        )

    def level_of(self, n: int) -> int:
        if n not in self.levels:
            raise OracleNotTotal(f"no deciding depth for index {n}")
        return self.levels[n]

    def is_star(self, n: int, node: Node) -> bool:
        key = (n, tuple(node))
        if key in self.labels:
            return self.labels[key]
        if self.default_star:
            return True
        raise OracleNotTotal(f"no label for index {n} at node {tuple(node)}")

    def nonstar_listed(self, n: int) -> list[Node]:
        return sorted(node for (m, node), s in self.labels.items() if m == n and not s)


def all_star_oracle(levels: Mapping[int, int]) -> StarOracle:
    return StarOracle(dict(levels), {}, default_star=True)


@dataclass(frozen=True)
class BoundedTree:
    """The subtree of the ambient open's tree with all entries below the bound."""

    ambient: BasicOpen
    bound: int

    def __post_init__(self):
        if not isinstance(self.bound, int) or self.bound < 1:
            raise ValueError(f"bound must be a positive integer, got {self.bound!r}")


def _entry_cap(tree: BoundedTree, i: int) -> int:
    return min(tree.ambient.g(i), tree.bound - 1)


def enumerate_level(tree: BoundedTree, depth: int) -> list[Node]:
    """All nodes of the bounded tree at the given depth, lexicographically."""
    q = tree.ambient
    if depth < q.stem:
        raise ValueError("depth must reach the ambient stem")
    if any(q.g(i) >= tree.bound for i in range(q.stem)):
        return []
    out: list[Node] = []

    def rec(i: int, acc: list[int]) -> None:
        if i == depth:
            out.append(tuple(acc))
            return
        if i < q.stem:
            acc.append(q.g(i))
            rec(i + 1, acc)
            acc.pop()
        else:
            for v in range(_entry_cap(tree, i) + 1):
                acc.append(v)
                rec(i + 1, acc)
                acc.pop()

    rec(0, [])
    return out


def level_count(tree: BoundedTree, depth: int) -> int:
    q = tree.ambient
    if any(q.g(i) >= tree.bound for i in range(q.stem)):
        return 0
    total = 1
    for i in range(q.stem, depth):
        total *= _entry_cap(tree, i) + 1
    return total


def _in_tree(tree: BoundedTree, node: Node) -> bool:
    q = tree.ambient
    if len(node) < q.stem:
        return False
    for i, v in enumerate(node):
        if i < q.stem:
            if v != q.g(i):
                return False
        elif v > q.g(i):
            return False
        if v >= tree.bound:
            return False
    return True


def nonstar_nodes(tree: BoundedTree, oracle: StarOracle, n: int) -> list[Node]:
    """The finitely many depth-i_n nodes of the tree labeled non-star."""
    depth = oracle.level_of(n)
    if oracle.default_star:
        return [node for node in oracle.nonstar_listed(n) if len(node) == depth and _in_tree(tree, node)]
    return [node for node in enumerate_level(tree, depth) if not oracle.is_star(n, node)]


@dataclass
class StageFrame:
    """One pass of the staged construction, kept for replayable traces."""

    stage: int
    cap: int
    nonstar_max: int | None
    wrote: tuple[int, int] | None = None
    values: tuple[int, ...] = field(default_factory=tuple)


def _nonstar_beyond(
    q: BasicOpen,
    oracle: StarOracle,
    levels: dict[int, int],
    gvals: dict[int, int],
    frontier: int,
    cap: int,
) -> list[int]:
    """Lengths of non-star nodes inside the stage subtree past the frontier."""

    def bound_at(k: int) -> int:
        return gvals[k] if k <= frontier else min(cap, q.g(k))

    def inside(node: Node) -> bool:
        for i, v in enumerate(node):
            if i < q.stem:
                if v != q.g(i):
                    return False
            elif v > bound_at(i):
                return False
        return True

    lengths: list[int] = []
    for n, depth in levels.items():
        if depth <= frontier:
            continue
        if oracle.default_star:
            hits = (node for node in oracle.nonstar_listed(n) if len(node) == depth)
        else:
            tree = BoundedTree(q, cap + 1)
            hits = (node for node in enumerate_level(tree, depth) if not oracle.is_star(n, node))
        if any(inside(node) for node in hits):
            lengths.append(depth)
    return lengths


def _build(q: BasicOpen, oracle: StarOracle, I: int, horizon: int):
    if I < q.max_prefix():
        raise BadCandidate(f"target value {I} is below the pinned prefix maximum {q.max_prefix()}")
    levels = {n: oracle.level_of(n) for n in range(horizon + 1)}
    for n, depth in levels.items():
        if depth < q.stem:
            raise ValueError(f"deciding depth {depth} for index {n} is below the stem")
    top = max(levels.values())
    vis_cap = max((q.g(k) for k in range(q.stem, top + 1)), default=0)

    gvals = {k: q.g(k) for k in range(q.stem)}
    frontier = q.stem - 1
    j_first: int | None = None
    frames: list[StageFrame] = []
    stage = 0
    while True:
        cap = I + stage + 1
        lengths = _nonstar_beyond(q, oracle, levels, gvals, frontier, cap)
        if not lengths:
            frames.append(StageFrame(stage, cap, None))
            if stage == 0 and j_first is None:
                j_first = q.stem - 1
            if cap >= vis_cap:
                break
            stage += 1
            continue
        j_new = max(lengths)
        if j_new >= top:
            raise ScheduleUnsound(
                f"non-star nodes reach the top visible level {top}; escape not certifiable"
            )
        written = tuple(min(q.g(k), I + stage) for k in range(frontier + 1, j_new + 1))
        for k, v in zip(range(frontier + 1, j_new + 1), written):
            gvals[k] = v
        frames.append(StageFrame(stage, cap, j_new, (frontier + 1, j_new), written))
        if j_first is None:
            j_first = j_new
        frontier = j_new
        stage += 1

    upto = max(frontier + 1, len(q.schedule.explicit), q.stem)
    explicit = tuple(gvals.get(k, q.g(k)) for k in range(upto))
    r = BasicOpen(
        q.stem, BoundSchedule(explicit, q.schedule.value(upto), q.schedule.tail_slope)
    )

    cut = j_first if j_first is not None else q.stem - 1
    M = max([n for n, depth in levels.items() if depth <= cut], default=0)

    for m in range(M + 1, horizon + 1):
        depth = levels[m]
        if oracle.default_star:
            bad = any(
                len(node) == depth and _compatible_with(r, node)
                for node in oracle.nonstar_listed(m)
            )
        else:
            bad = any(
                not oracle.is_star(m, node) for node in compatible_nodes(r, depth)
            )
        if bad:
            raise ScheduleUnsound(
                f"index {m} past the frontier M={M} still has a compatible non-star node"
            )
    return r, M, frames


def _compatible_with(r: BasicOpen, node: Node) -> bool:
    for i, v in enumerate(node):
        if i < r.stem:
            if v != r.g(i):
                return False
        elif v > r.g(i):
            return False
    return True


def build_escape_schedule(
    q: BasicOpen, oracle: StarOracle, I: int, horizon: int
) -> tuple[BasicOpen, int]:
    """Shrink q so that, past a finite frontier M, every decided index is star.

    Stage e admits entries up to I+e+1 past the current frontier, writes the
    value I+e across the segment reaching the deepest non-star node found,
    and advances; the loop closes once the full visible tree is clean past
    the frontier.  The result keeps q's stem and is verified level by level
    up to the horizon.
    """
    r, M, _ = _build(q, oracle, I, horizon)
    return r, M


def escape_trace(q: BasicOpen, oracle: StarOracle, I: int, horizon: int) -> dict:
    """The staged construction with its full frame-by-frame trace."""
    r, M, frames = _build(q, oracle, I, horizon)
    return {
        "result": r,
        "M": M,
        "frames": [
            {
                "stage": fr.stage,
                "cap": fr.cap,
                "nonstar_max": fr.nonstar_max,
                "wrote": list(fr.wrote) if fr.wrote else None,
                "values": list(fr.values),
            }
            for fr in frames
        ],
    }
