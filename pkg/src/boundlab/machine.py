"""A small indexed computation model with step-counted evaluation.

Programs are first-order expressions over naturals: the argument, constants,
successor/predecessor, a monotone pairing with projections, composition,
branching on zero, primitive recursion, bounded minimization, and a general
application escape hatch (the only source of partiality).  Every natural
decodes to a program and every program has a canonical index; the numbering
is surjective but not injective, which is what makes non-canonical
certificate codes possible.

Cost model (normative): evaluating a node charges max(1, bit_length(result))
once its result is known, children first.  The internal pairs built by
primitive recursion and bounded minimization are charged like pair nodes,
and application additionally charges max(1, bit_length(w)) to decode the
applied index w.  A run "converges within budget b" when the total charge
is strictly below b.  Evaluation nesting is capped at 384 levels; a run
that needs more is reported as non-convergent at every budget (the cap is
part of the machine, so results stay a pure function of (w, z, budget)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


def pair(a: int, b: int) -> int:
    """Cantor pairing; monotone in both arguments, pair(a,b) >= a, b."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(c: int) -> tuple[int, int]:
    s = (isqrt(8 * c + 1) - 1) // 2
    b = c - s * (s + 1) // 2
    return s - b, b


OPS = (
    "arg", "const", "succ", "pred", "pair", "fst", "snd",
    "comp", "if0", "primrec", "bmin", "apply",
)
TAG = {op: i for i, op in enumerate(OPS)}
ARITY = {
    "arg": 0, "const": 0, "succ": 1, "pred": 1, "pair": 2, "fst": 1,
    "snd": 1, "comp": 2, "if0": 3, "primrec": 2, "bmin": 2, "apply": 2,
}


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple[Expr, ...] = ()
    value: int = 0

    def __post_init__(self):
        if self.op not in ARITY:
            raise ValueError(f"unknown operation {self.op!r}")
        if len(self.args) != ARITY[self.op]:
            raise ValueError(f"{self.op} takes {ARITY[self.op]} arguments")


ARG = Expr("arg")


def const(n: int) -> Expr:
    if n < 0:
        raise ValueError("constants are naturals")
    return Expr("const", (), n)


def node(op: str, *args: Expr) -> Expr:
    return Expr(op, tuple(args))


E0 = const(0)
SUCC = node("succ", ARG)
LOOPER = node("apply", ARG, ARG)


def encode(e: Expr) -> int:
    """Canonical index: payload * 12 + tag, payloads paired left to right."""
    tag = TAG[e.op]
    if e.op == "arg":
        payload = 0
    elif e.op == "const":
        payload = e.value
    elif ARITY[e.op] == 1:
        payload = encode(e.args[0])
    elif e.op == "if0":
        c, a, b = (encode(s) for s in e.args)
        payload = pair(c, pair(a, b))
    else:
        payload = pair(encode(e.args[0]), encode(e.args[1]))
    return payload * 12 + tag


def decode(code: int) -> Expr:
    """Total inverse-ish of encode: every natural is some program."""
    if code < 0:
        raise ValueError("indices are naturals")
    payload, tag = divmod(code, 12)
    op = OPS[tag]
    if op == "arg":
        return ARG
    if op == "const":
        return const(payload)
    if ARITY[op] == 1:
        return Expr(op, (decode(payload),))
    if op == "if0":
        c, rest = unpair(payload)
        a, b = unpair(rest)
        return Expr("if0", (decode(c), decode(a), decode(b)))
    left, right = unpair(payload)
    return Expr(op, (decode(left), decode(right)))


def format_program(e: Expr) -> str:
    if e.op == "arg":
        return "arg"
    if e.op == "const":
        return f"(const {e.value})"
    return "(" + " ".join([e.op] + [format_program(a) for a in e.args]) + ")"


def parse_program(text: str) -> Expr:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()

    def parse(pos: int) -> tuple[Expr, int]:
        if pos >= len(tokens):
            raise ValueError("unexpected end of program text")
        tok = tokens[pos]
        if tok == "arg":
            return ARG, pos + 1
        if tok != "(":
            raise ValueError(f"unexpected token {tok!r}")
        pos += 1
        if pos >= len(tokens):
            raise ValueError("unexpected end of program text")
        op = tokens[pos]
        pos += 1
        if op == "const":
            if pos >= len(tokens) or not tokens[pos].isdigit():
                raise ValueError("const needs a numeral")
            e: Expr = const(int(tokens[pos]))
            pos += 1
        else:
            if op not in ARITY or ARITY[op] == 0:
                raise ValueError(f"unknown operation {op!r}")
            args = []
            for _ in range(ARITY[op]):
                sub, pos = parse(pos)
                args.append(sub)
            e = Expr(op, tuple(args))
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("missing closing parenthesis")
        return e, pos + 1

    e, pos = parse(0)
    if pos != len(tokens):
        raise ValueError("trailing tokens after program")
    return e


class OutOfFuel(Exception):
    """Internal: the step budget ran out mid-evaluation."""


_MAX_DEPTH = 384


class _Fuel:
    __slots__ = ("remaining", "depth")

    def __init__(self, budget: int):
        self.remaining = budget
        self.depth = 0

    def charge(self, result: int) -> int:
        self.remaining -= max(1, result.bit_length())
        if self.remaining <= 0:
            raise OutOfFuel
        return result

    def charge_pair(self, a: int, b: int) -> int:
        # A pair has about 2*max(bits) bits; refuse to materialize giants the
        # budget could never pay for.  Triggers only where the exact charge
        # would exhaust the budget anyway, so observable results are unchanged.
        hi = max(a.bit_length(), b.bit_length())
        if hi > 64 and 2 * hi - 2 >= self.remaining:
            raise OutOfFuel
        return self.charge(pair(a, b))


def _eval(e: Expr, z: int, fuel: _Fuel) -> int:
    fuel.depth += 1
    if fuel.depth > _MAX_DEPTH:
        raise OutOfFuel
    try:
        return _eval_node(e, z, fuel)
    finally:
        fuel.depth -= 1


def _eval_node(e: Expr, z: int, fuel: _Fuel) -> int:
    op = e.op
    if op == "arg":
        return fuel.charge(z)
    if op == "const":
        return fuel.charge(e.value)
    if op == "succ":
        return fuel.charge(_eval(e.args[0], z, fuel) + 1)
    if op == "pred":
        return fuel.charge(max(_eval(e.args[0], z, fuel) - 1, 0))
    if op == "pair":
        a = _eval(e.args[0], z, fuel)
        b = _eval(e.args[1], z, fuel)
        return fuel.charge_pair(a, b)
    if op == "fst":
        return fuel.charge(unpair(_eval(e.args[0], z, fuel))[0])
    if op == "snd":
        return fuel.charge(unpair(_eval(e.args[0], z, fuel))[1])
    if op == "comp":
        inner = _eval(e.args[1], z, fuel)
        return fuel.charge(_eval(e.args[0], inner, fuel))
    if op == "if0":
        cond = _eval(e.args[0], z, fuel)
        branch = e.args[1] if cond == 0 else e.args[2]
        return fuel.charge(_eval(branch, z, fuel))
    if op == "primrec":
        acc = _eval(e.args[0], 0, fuel)
        for k in range(z):
            acc = _eval(e.args[1], fuel.charge_pair(k, acc), fuel)
        return fuel.charge(acc)
    if op == "bmin":
        bound = _eval(e.args[1], z, fuel)
        result = bound + 1
        for k in range(bound + 1):
            if _eval(e.args[0], fuel.charge_pair(k, z), fuel) == 0:
                result = k
                break
        return fuel.charge(result)
    # apply: evaluate both sides, pay to decode the index, run the body
    w = _eval(e.args[0], z, fuel)
    x = _eval(e.args[1], z, fuel)
    fuel.charge(w)
    return fuel.charge(_eval(decode(w), x, fuel))


def eval_profile(e: Expr, z: int, budget: int) -> tuple[int, int] | None:
    """Run the expression on z: (value, steps) if it converges strictly
    within the budget, else None."""
    if budget <= 0:
        return None
    fuel = _Fuel(budget)
    try:
        value = _eval(e, z, fuel)
    except OutOfFuel:
        return None
    return value, budget - fuel.remaining


def eval_steps(w: int, z: int, budget: int) -> int | None:
    """The machine proper: run the program with index w on input z."""
    out = eval_profile(decode(w), z, budget)
    return None if out is None else out[0]


def apply_free(e: Expr) -> bool:
    return e.op != "apply" and all(apply_free(a) for a in e.args)


def check_proof(j: int, w: int) -> bool:
    """Does j certify that program w is total?

    A certificate is a (possibly non-canonical) index of an application-free
    build of the program; it is valid for w exactly when that build's
    canonical index is w.  Application-free programs always terminate, so
    accepted certificates only ever certify genuinely total programs.
    """
    if j < 0 or w < 0:
        return False
    p = decode(j)
    return apply_free(p) and encode(p) == w


@dataclass(frozen=True)
class TotalityCertificate:
    """A checkable totality claim: derivation code and the certified index."""

    derivation: int
    index: int

    def valid(self) -> bool:
        return check_proof(self.derivation, self.index)


def certificate_for(e: Expr) -> TotalityCertificate:
    if not apply_free(e):
        raise ValueError("only application-free programs are certifiable")
    code = encode(e)
    return TotalityCertificate(code, code)


def alias_certificate(e: Expr) -> TotalityCertificate | None:
    """A strictly larger, non-canonical certificate for the same program.

    Re-encodes the build with the first argument node carried by payload 1
    instead of 0; monotonicity of the pairing pushes every enclosing code up,
    so the alias always exceeds the canonical index.  None if the program
    has no argument node (or is not certifiable).
    """
    if not apply_free(e):
        return None

    found = [False]

    def rebuild(s: Expr) -> int:
        if s.op == "arg" and not found[0]:
            found[0] = True
            return 12
        tag = TAG[s.op]
        if s.op == "arg":
            return tag
        if s.op == "const":
            return s.value * 12 + tag
        if ARITY[s.op] == 1:
            return rebuild(s.args[0]) * 12 + tag
        if s.op == "if0":
            c, a, b = (rebuild(x) for x in s.args)
            return pair(c, pair(a, b)) * 12 + tag
        return pair(rebuild(s.args[0]), rebuild(s.args[1])) * 12 + tag

    j = rebuild(e)
    if not found[0]:
        return None
    return TotalityCertificate(j, encode(e))
