"""Decision-tree terms: deciding, restricting, amalgamating."""

import random

import pytest

from boundlab.errors import AmbiguousAmalgamation, EmptyOpenError, TermNotTotal
from boundlab.seq_opens import (
    EMPTY,
    forces_G_value,
    intersect,
    make_open,
    restrict_by_seq,
    split,
    subset,
)
from boundlab.terms import (
    GuardedPart,
    GuardedTerm,
    RangeTerm,
    amalgamate,
    constant_term,
    decide_guarded,
    decide_term,
    identity_term,
    is_pseudobounded_violation,
    range_term_from,
    restrict_term,
)

from oracles import nodes_brute, random_open, random_range_term


def _identity1(o):
    return range_term_from(1, nodes_brute(o, 1), lambda node: 0)


def test_decide_term_examples():
    p = make_open(1, [2], 3, 1)
    assert decide_term(p, _identity1(p)) == 2

    wide = make_open(0, [], 2, 1)
    assert decide_term(wide, _identity1(wide)) is None
    assert decide_term(wide, constant_term(7)) == 7
    assert decide_term(p, constant_term(7)) == 7


def test_decide_term_requires_total_table():
    wide = make_open(0, [], 2, 1)
    partial = RangeTerm(1, {(0,): (0, 0), (1,): (1, 0)})  # node (2,) missing
    with pytest.raises(TermNotTotal):
        decide_term(wide, partial)


def test_range_term_witness_equation_is_enforced():
    with pytest.raises(ValueError):
        RangeTerm(2, {(0, 1): (0, 1)})  # node[1] = 1 != value 0


def test_restrict_term_examples():
    p = make_open(0, [], 2, 1)
    t = _identity1(p)

    full = restrict_term(t, p)
    for i in range(3):
        piece = split(p, i)
        assert decide_guarded(piece, full) == decide_term(piece, t)

    disjoint = make_open(1, [9], 9, 1)
    assert decide_guarded(disjoint, restrict_term(t, split(p, 1))) == 0

    assert decide_guarded(split(p, 1), restrict_term(t, split(p, 1))) == 1


def test_amalgamate_examples():
    p = make_open(0, [], 2, 1)
    t = _identity1(p)

    single = amalgamate([(split(p, 2), t)])
    assert decide_guarded(split(p, 2), single) == 2

    parts = [(split(p, i), constant_term(i)) for i in range(3)]
    g = amalgamate(parts)
    for i in range(3):
        assert decide_guarded(split(p, i), g) == i

    with pytest.raises(AmbiguousAmalgamation):
        amalgamate([(p, constant_term(0)), (p, constant_term(1))])


def test_decide_guarded_needs_nonempty_open():
    with pytest.raises(EmptyOpenError):
        decide_guarded(EMPTY, GuardedTerm((), 0))


def test_decide_guarded_settles_full_covers():
    # guards covering the open piece-by-piece still decide when all pieces agree
    p = make_open(0, [], 1, 1)
    g = GuardedTerm(
        tuple(GuardedPart(split(p, i), constant_term(5)) for i in range(2)), 0
    )
    assert decide_guarded(p, g) == 5
    mixed = GuardedTerm(
        tuple(GuardedPart(split(p, i), constant_term(i)) for i in range(2)), 0
    )
    assert decide_guarded(p, mixed) is None


def test_is_pseudobounded_violation_examples():
    assert is_pseudobounded_violation([5, 7, 1, 2, 3]) == 2
    assert is_pseudobounded_violation([0, 0, 0]) == 0
    assert is_pseudobounded_violation([9, 9, 9]) is None


def test_decision_monotonicity():
    rng = random.Random(201)
    for _ in range(120):
        p = random_open(rng, max_value=4)
        modulus = rng.randrange(1, 4)
        t = random_range_term(rng, p, modulus)
        v = decide_term(p, t)
        if v is None:
            continue
        depth = rng.randrange(p.stem, p.stem + 2)
        sigma = rng.choice(nodes_brute(p, depth)) if depth else ()
        sub = restrict_by_seq(p, sigma)
        assert subset(sub, p)
        assert decide_term(sub, t) == v


def test_witness_soundness_on_full_depth_nodes():
    rng = random.Random(202)
    for _ in range(120):
        p = random_open(rng, max_value=4)
        modulus = rng.randrange(1, 4)
        t = random_range_term(rng, p, modulus)
        for node in nodes_brute(p, max(modulus, p.stem))[:12]:
            piece = restrict_by_seq(p, node)
            v = decide_term(piece, t)
            assert v is not None
            m = t.witness_at(node[:modulus]) if modulus <= len(node) else None
            if m is not None and modulus <= piece.stem:
                assert forces_G_value(piece, m) == v


def test_amalgamation_over_split_cover_random():
    rng = random.Random(203)
    for _ in range(80):
        p = random_open(rng, max_value=4)
        top = p.g(p.stem)
        parts = []
        values = {}
        for i in range(top + 1):
            piece = split(p, i)
            val = rng.randrange(0, 9)
            values[i] = val
            parts.append((piece, constant_term(val)))
        g = amalgamate(parts)
        for i in range(top + 1):
            assert decide_guarded(split(p, i), g) == values[i]


def test_identity_term_reads_first_value():
    rng = random.Random(204)
    for _ in range(50):
        p = random_open(rng, max_value=4)
        t = identity_term(p)
        if p.stem >= 1:
            assert decide_term(p, t) == p.g(0)
        else:
            for i in range(p.g(0) + 1):
                sub = restrict_by_seq(p, (i,))
                assert decide_term(sub, t) == i
