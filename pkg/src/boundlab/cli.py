"""Command-line surface for the workbench.

All results are printed as canonical JSON (sorted keys) on stdout.  Exit
codes: 0 on success, 2 on domain errors (with a ``{code, message}``
object), 64 on usage errors such as unknown subcommands, 65 on unreadable
or malformed input files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .certificates import build, verify
from .errors import DomainError, EmptyOpenError
from .machine import encode, format_program, parse_program
from .realizability import enumerate_Az, make_F_beta, unbounded_witness, v
from .seq_opens import force_value_into_range, intersect, is_empty, member, split
from .serialize import (
    FormatError,
    dumps,
    open_from_json,
    open_to_json,
    point_from_json,
    pset_from_json,
    setopen_from_json,
    setopen_to_json,
)
from .set_opens import intersect_set, member_set, sequential_bound


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_dict(path: str) -> dict:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise FormatError(f"{path} must contain a JSON object")
    return data


def _load_program(arg: str):
    text = arg
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return parse_program(text)
    except ValueError as e:
        raise FormatError(f"bad program text: {e}") from e


# --- handlers -------------------------------------------------------------

def _seq_intersect(args) -> Any:
    a = open_from_json(_load_json(args.a))
    b = open_from_json(_load_json(args.b))
    return open_to_json(intersect(a, b))


def _seq_split(args) -> Any:
    r = open_from_json(_load_json(args.open))
    if is_empty(r):
        raise EmptyOpenError("cannot split the empty open")
    if args.at is not None:
        return open_to_json(split(r, args.at))
    return {"pieces": [open_to_json(split(r, i)) for i in range(r.g(r.stem) + 1)]}


def _seq_member(args) -> Any:
    o = open_from_json(_load_json(args.open))
    f = point_from_json(_load_json(args.point))
    return {"member": member(f, o)}


def _seq_force_range(args) -> Any:
    p = open_from_json(_load_json(args.open))
    return open_to_json(force_value_into_range(p, args.value))


def _fuse_bound(args) -> Any:
    inputs = {
        "p": _load_json(args.p),
        "term": _load_json(args.term),
        "level": args.level,
    }
    if args.at is not None:
        inputs["at"] = args.at
    return build("fuse.bound", inputs)


def _fuse_pseudo(args) -> Any:
    return build("fuse.pseudo", _load_dict(args.job))


def _fuse_dc(args) -> Any:
    inputs = {
        "p": _load_json(args.p),
        "start": args.start,
        "steps": args.steps,
        "oracle": args.oracle,
    }
    return build("fuse.dc", inputs)


def _set_intersect(args) -> Any:
    a = setopen_from_json(_load_json(args.a))
    b = setopen_from_json(_load_json(args.b))
    return setopen_to_json(intersect_set(a, b))


def _set_member(args) -> Any:
    X = pset_from_json(_load_json(args.point))
    O = setopen_from_json(_load_json(args.open))
    return {"member": member_set(X, O)}


def _set_seqbound(args) -> Any:
    job = _load_dict(args.job)
    if "open" not in job:
        raise FormatError("job is missing field 'open'")
    O = setopen_from_json(job["open"])
    rows = job.get("decided", [])
    if not isinstance(rows, list):
        raise FormatError("field 'decided' must be a list")
    decided = []
    for row in rows:
        if not isinstance(row, dict) or "neighborhood" not in row or "value" not in row:
            raise FormatError("decided rows need 'neighborhood' and 'value'")
        decided.append((row["neighborhood"], row["value"]))
    return {"bound": sequential_bound(O, decided)}


def _as_schedule(args) -> Any:
    inputs = {
        "q": _load_json(args.q),
        "oracle": _load_json(args.oracle),
        "level": args.level,
        "horizon": args.horizon,
    }
    return build("as.schedule", inputs)


def _fp_v(args) -> Any:
    return [
        {"n": t.n, "qualifying_ks": list(t.qualifying_ks), "value": t.value}
        for t in (v(n) for n in range(args.max_n + 1))
    ]


def _fp_witness(args) -> Any:
    return {"k": args.k, "witness": unbounded_witness(args.k)}


def _fp_scenario(args) -> Any:
    inputs = {"seed": args.seed, "count": args.count, "window": args.window}
    if args.budget is not None:
        inputs["budget"] = args.budget
    return build("fp.scenario", inputs)


def _ext_az(args) -> Any:
    z = _load_program(args.program)
    budget = args.budget if args.budget is not None else 1_000_000
    A = enumerate_Az(z, args.support_bound, args.value_bound, budget)
    return {"program": format_program(z), "Az": sorted(A)}


def _ext_fbeta(args) -> Any:
    beta = _load_program(args.beta)
    F = make_F_beta(beta, args.m)
    support = args.support_bound if args.support_bound is not None else args.m + 2
    budget = args.budget if args.budget is not None else 1_000_000
    A = enumerate_Az(F, support, args.value_bound, budget)
    return {
        "beta": format_program(beta),
        "m": args.m,
        "program": format_program(F),
        "index": encode(F),
        "Az": sorted(A),
    }


def _verify(args) -> Any:
    cert = _load_json(args.certificate)
    verify(cert)
    op = cert.get("operation") if isinstance(cert, dict) else None
    return {"ok": True, "operation": op}


# --- parser ---------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="boundlab", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized demos")
    parser.add_argument("--budget", type=int, default=None, help="machine step cap")
    sub = parser.add_subparsers(dest="group", metavar="GROUP")

    seq = sub.add_parser("seq", help="basic opens of the sequence space")
    seqsub = seq.add_subparsers(dest="cmd", metavar="CMD")
    c = seqsub.add_parser("intersect")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(handler=_seq_intersect)
    c = seqsub.add_parser("split")
    c.add_argument("open")
    c.add_argument("--at", type=int, default=None)
    c.set_defaults(handler=_seq_split)
    c = seqsub.add_parser("member")
    c.add_argument("open")
    c.add_argument("point")
    c.set_defaults(handler=_seq_member)
    c = seqsub.add_parser("force-range")
    c.add_argument("open")
    c.add_argument("--value", type=int, required=True)
    c.set_defaults(handler=_seq_force_range)

    fuse = sub.add_parser("fuse", help="good-extension and fusion constructions")
    fusesub = fuse.add_subparsers(dest="cmd", metavar="CMD")
    c = fusesub.add_parser("bound")
    c.add_argument("p")
    c.add_argument("term")
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--at", type=int, default=None)
    c.set_defaults(handler=_fuse_bound)
    c = fusesub.add_parser("pseudo")
    c.add_argument("job")
    c.set_defaults(handler=_fuse_pseudo)
    c = fusesub.add_parser("dc")
    c.add_argument("p")
    c.add_argument("--start", type=int, required=True)
    c.add_argument("--steps", type=int, required=True)
    c.add_argument("--oracle", default="successor")
    c.set_defaults(handler=_fuse_dc)

    sets = sub.add_parser("set", help="opens over eventually periodic sets")
    setsub = sets.add_subparsers(dest="cmd", metavar="CMD")
    c = setsub.add_parser("intersect")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(handler=_set_intersect)
    c = setsub.add_parser("member")
    c.add_argument("point")
    c.add_argument("open")
    c.set_defaults(handler=_set_member)
    c = setsub.add_parser("seqbound")
    c.add_argument("job")
    c.set_defaults(handler=_set_seqbound)

    asx = sub.add_parser("as", help="escape schedules for starred sequences")
    assub = asx.add_subparsers(dest="cmd", metavar="CMD")
    c = assub.add_parser("schedule")
    c.add_argument("q")
    c.add_argument("oracle")
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--horizon", type=int, required=True)
    c.set_defaults(handler=_as_schedule)

    fp = sub.add_parser("fp", help="certified-convergence counterexample lab")
    fpsub = fp.add_subparsers(dest="cmd", metavar="CMD")
    c = fpsub.add_parser("v")
    c.add_argument("--max-n", type=int, required=True)
    c.set_defaults(handler=_fp_v)
    c = fpsub.add_parser("witness")
    c.add_argument("--k", type=int, required=True)
    c.set_defaults(handler=_fp_witness)
    c = fpsub.add_parser("scenario")
    c.add_argument("--count", type=int, default=5)
    c.add_argument("--window", type=int, default=20)
    c.set_defaults(handler=_fp_scenario)

    ext = sub.add_parser("ext", help="functional-probing counterexample lab")
    extsub = ext.add_subparsers(dest="cmd", metavar="CMD")
    c = extsub.add_parser("az")
    c.add_argument("program")
    c.add_argument("--support-bound", type=int, required=True)
    c.add_argument("--value-bound", type=int, default=4)
    c.set_defaults(handler=_ext_az)
    c = extsub.add_parser("fbeta")
    c.add_argument("beta")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--support-bound", type=int, default=None)
    c.add_argument("--value-bound", type=int, default=4)
    c.set_defaults(handler=_ext_fbeta)

    ver = sub.add_parser("verify", help="replay an emitted certificate")
    ver.add_argument("certificate")
    ver.set_defaults(handler=_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(dumps({"code": "Usage", "message": str(e)}), file=sys.stderr)
        return 64
    if not hasattr(args, "handler"):
        print(dumps({"code": "Usage", "message": "missing subcommand"}), file=sys.stderr)
        return 64
    try:
        result = args.handler(args)
    except DomainError as e:
        print(dumps(e.to_json()))
        return 2
    except (FormatError, json.JSONDecodeError, OSError) as e:
        print(dumps({"code": "MalformedInput", "message": str(e)}))
        return 65
    except ValueError as e:
        print(dumps({"code": "BadInput", "message": str(e)}))
        return 2
    print(dumps(result))
    return 0
