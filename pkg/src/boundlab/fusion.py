"""Shrinking engines: bound a range-witnessed term below a candidate value,
do it while preserving a prefix of the schedule, and iterate the bound along
a stage chain so a whole term sequence ends up dominated by the index.

The core move: if every compatible full-depth node already answers <= I the
open is good as is; otherwise split the stem position into values <= I,
recurse, and merge the branches by pointwise minimum with the stem value
set to I.  Termination comes from the finite modulus: once the stem passes
the modulus there is a single node left, and its answer is one of the
pinned prefix entries, hence <= I for any candidate open.  Outputs are the
pointwise largest schedules the recursion allows, so results are stable for
golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import BadCandidate, EmptyOpenError, OracleNotTotal, PointNotInOpen
from .seq_opens import (
    EMPTY,
    BasicOpen,
    BoundSchedule,
    Open,
    Point,
    compatible_nodes,
    is_empty,
    member,
    min_schedule,
    restrict_by_seq,
    split,
)
from .terms import (
    GuardedTerm,
    Node,
    Term,
    TermNotTotal,
    TermSequence,
    amalgamate,
    decide_guarded,
    decide_term,
)


def _check_candidate(p: BasicOpen, I: int, at: int) -> None:
    if at < p.stem:
        raise BadCandidate(f"cut position {at} lies below the stem {p.stem}")
    below = max([p.g(n) for n in range(at)], default=0)
    if I < below:
        raise BadCandidate(f"candidate {I} is below the schedule maximum {below} before position {at}")
    if I > p.g(at):
        raise BadCandidate(f"candidate {I} exceeds the schedule value {p.g(at)} at position {at}")


def _all_nodes_at_most(p: BasicOpen, t: Term, bound: int) -> bool:
    for node in compatible_nodes(p, t.modulus):
        if not t.has_node(node):
            raise TermNotTotal(f"table is missing the compatible node {node}")
        if t.value_at(node) > bound:
            return False
    return True


def _good_extension(p: BasicOpen, t: Term, I: int) -> BasicOpen:
    if _all_nodes_at_most(p, t, I):
        return p
    if p.stem >= t.modulus:
        # A single fully pinned node remains; for range-witnessed terms its
        # value is a prefix entry <= I, so reaching here means t was not.
        raise BadCandidate("term value on a pinned node exceeds the candidate; not range-witnessed")
    branches = [_good_extension(split(p, i), t, I) for i in range(I + 1)]
    merged = branches[0].schedule
    for b in branches[1:]:
        merged = min_schedule(merged, b.schedule)
    upto = max(p.stem + 1, len(merged.explicit))
    explicit = merged.values(upto)
    explicit[p.stem] = I
    return BasicOpen(p.stem, BoundSchedule(tuple(explicit), merged.value(upto), merged.tail_slope))


def bound_range_term(p: Open, t: Term, I: int) -> BasicOpen:
    """Shrink p (same stem) so every compatible node answers <= I, with the
    schedule still >= I at the stem."""
    if is_empty(p):
        raise EmptyOpenError("cannot bound a term under the empty open")
    _check_candidate(p, I, p.stem)
    return _good_extension(p, t, I)


def bound_range_term_at(p: Open, t: Term, I: int, M: int) -> BasicOpen:
    """Depth-M variant: keep the schedule exactly below M, push the bound at M."""
    if is_empty(p):
        raise EmptyOpenError("cannot bound a term under the empty open")
    base = p
    _check_candidate(base, I, M)
    if M == base.stem:
        return bound_range_term(base, t, I)
    shrunk = []
    for sigma in compatible_nodes(base, M):
        shrunk.append(_good_extension(restrict_by_seq(base, sigma), t, I))
    merged = shrunk[0].schedule
    for q in shrunk[1:]:
        merged = min_schedule(merged, q.schedule)
    upto = max(M + 1, len(merged.explicit))
    explicit = base.schedule.values(M) + merged.values(upto)[M:]
    return BasicOpen(base.stem, BoundSchedule(tuple(explicit), merged.value(upto), merged.tail_slope))


def fuse_pseudobound(p: Open, a: TermSequence, f: Point, stages: int) -> tuple[int, list[BasicOpen]]:
    """Build the chain q_N >= q_{N+1} >= ... forcing a(n) <= n from N = sup rng(f) on.

    Returns (N, chain) with chain[j] forcing a(n) <= n for N <= n <= N+j and
    f a member of every chain element.
    """
    if is_empty(p):
        raise EmptyOpenError("cannot fuse below the empty open")
    if not member(f, p):
        raise PointNotInOpen("the distinguished point must lie in the open")
    N = f.sup_range()
    chain: list[BasicOpen] = []
    cur = p
    for j in range(stages + 1):
        I = N + j
        M = cur.stem
        while cur.g(M) < I + (1 if j == 0 else 0):
            M += 1
        # Stage 0 cuts at the first position whose schedule value exceeds N;
        # later stages cut where the previous schedule first reaches N+j.
        cur = bound_range_term_at(cur, a(I), I, M)
        chain.append(cur)
    return N, chain


OracleEntry = tuple[int, Term]
NodeOracle = Mapping[Node, OracleEntry]


def _oracle_depth(oracle: NodeOracle) -> int:
    depths = {len(node) for node in oracle}
    if len(depths) != 1:
        raise OracleNotTotal("oracle nodes must share a single depth")
    return depths.pop()


def extract_witness(p: Open, oracle: NodeOracle, I: int) -> tuple[BasicOpen, GuardedTerm]:
    """Amalgamate the oracle's per-node witness terms over the depth cover of p.

    The open itself needs no shrinking: the oracle is already total on the
    cover, so the pointwise largest refinement is p unchanged.
    """
    if is_empty(p):
        raise EmptyOpenError("cannot extract a witness below the empty open")
    base = p
    if I > base.g(base.stem):
        raise BadCandidate(f"candidate {I} exceeds the schedule value at the stem")
    depth = _oracle_depth(oracle)
    parts: list[tuple[BasicOpen, Term]] = []
    for node in compatible_nodes(base, depth):
        if node not in oracle:
            raise OracleNotTotal(f"oracle is missing the compatible node {node}")
        _value, term = oracle[node]
        parts.append((restrict_by_seq(base, node), term))
    return base, amalgamate(parts)


def extract_witness_at(p: Open, oracle: NodeOracle, I: int, M: int) -> tuple[BasicOpen, GuardedTerm]:
    """Depth-M composition of extract_witness over the depth-M cover of p."""
    if is_empty(p):
        raise EmptyOpenError("cannot extract a witness below the empty open")
    base = p
    if M < base.stem:
        raise BadCandidate(f"cut position {M} lies below the stem {base.stem}")
    if I > base.g(M):
        raise BadCandidate(f"candidate {I} exceeds the schedule value at position {M}")
    depth = _oracle_depth(oracle)
    if depth < M:
        raise OracleNotTotal(f"oracle depth {depth} is shallower than the cut position {M}")
    parts: list[tuple[BasicOpen, Term]] = []
    for sigma in compatible_nodes(base, M):
        piece = restrict_by_seq(base, sigma)
        suboracle = {node: oracle[node] for node in compatible_nodes(piece, depth) if node in oracle}
        _q, guarded = extract_witness(piece, suboracle, I)
        parts.extend((part.guard, part.body) for part in guarded.parts)
    return base, amalgamate(parts)


StepOracle = Callable[[int | GuardedTerm, BasicOpen], tuple[Term, int]]


def dc_chain(p: Open, step_oracle: StepOracle, a0: int, steps: int) -> tuple[list[BasicOpen], list[int | GuardedTerm]]:
    """Iterate witness extraction: each stage decides the next witness below
    the current open while an occurrence of a value >= I + stage survives in
    the schedule, so every finite stage is a valid open."""
    if is_empty(p):
        raise EmptyOpenError("cannot build a chain below the empty open")
    base = p
    I = base.g(base.stem)
    chain: list[BasicOpen] = [base]
    witnesses: list[int | GuardedTerm] = [a0]
    cur = base
    for stage in range(1, steps + 1):
        term, depth = step_oracle(witnesses[-1], cur)
        M = cur.stem
        while cur.g(M) < I + stage:
            M += 1
        oracle: NodeOracle = {}
        for node in compatible_nodes(cur, max(depth, M)):
            piece = restrict_by_seq(cur, node)
            value = decide_term(piece, term)
            if value is None:
                raise OracleNotTotal(f"step term undecided on node {node} at stage {stage}")
            oracle[node] = (value, term)
        cur, guarded = extract_witness_at(cur, oracle, I + stage, M)
        assert any(cur.g(n) >= I + stage for n in range(M + 1)), "stage invariant lost"
        decided = decide_guarded(cur, guarded)
        chain.append(cur)
        witnesses.append(decided if decided is not None else guarded)
    return chain, witnesses
