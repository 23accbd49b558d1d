"""Command line front end.

Exit codes: 0 result produced, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any, Sequence

import numpy as np

from triwit import __version__
from triwit.qcore import (
    InvalidInputError,
    NumericalError,
    Party,
    Tolerances,
    max_subtractable_weight,
    rank_signature,
)
from triwit.puretri import GHZ, W, GhzGenParams, WGenParams, gen_ghz_type, gen_w_type
from triwit.overlap import OptimizerConfig, max_bisep_overlap, max_w_overlap
from triwit.witness import evaluate, std_witness
from triwit.pptedge import (
    EdgeFamilyParams,
    edge_family,
    edge_family_bisep_decomposition,
    edge_family_is_edge,
    ppt_signature,
    product_in_ranges_search,
    recognize_edge_family,
)
from triwit.verdict import (
    MixedClass,
    classify_mixed,
    detection_interval,
    family_state,
    family_state_decomposition,
    w1_analog,
)
from triwit.statefile import (
    StateFile,
    dumps_decomposition,
    dumps_state,
    loads_decomposition,
    read_state,
    write_atomic,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _default_seed() -> int:
    env = os.environ.get("TRIWIT_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise InvalidInputError(f"TRIWIT_SEED must be an integer, got {env!r}") from None


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise InvalidInputError(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise InvalidInputError(f"expected {n} comma-separated numbers, got {len(vals)}")
    return vals


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return str(obj)


def _base_report(command: str, args, tol: Tolerances) -> dict[str, Any]:
    return {
        "tool": "triwit",
        "version": __version__,
        "command": command,
        "seed": args.seed,
        "tolerances": {"psd_tol": tol.psd_tol, "rank_rel_tol": tol.rank_rel_tol, "zero_tol": tol.zero_tol},
    }


def _render(report: dict[str, Any], style: str) -> str:
    if style == "machine":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    lines = []
    for key, value in report.items():
        if key == "certificates":
            lines.append("certificates:")
            for cert in value:
                payload = ", ".join(f"{k}={_short(v)}" for k, v in sorted(cert["payload"].items()))
                lines.append(f"  - {cert['kind']} [{cert['bound']} {cert['class']}] {payload}")
        else:
            lines.append(f"{key}: {_short(value)}")
    return "\n".join(lines) + "\n"


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, dict):
        return ", ".join(f"{k}={_short(v)}" for k, v in value.items())
    return str(_jsonable(value))


def _tolerances(args) -> Tolerances:
    tol = getattr(args, "tol", None)
    return Tolerances(psd_tol=tol) if tol is not None else Tolerances()


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(starts=args.starts, seed=args.seed)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    if args.ghz_params is not None:
        vals = _floats(args.ghz_params, 6)
        state = StateFile("pure", gen_ghz_type(GhzGenParams(tuple(vals[:5]), vals[5])), f"ghz-params {args.ghz_params}")
    elif args.w_params is not None:
        state = StateFile("pure", gen_w_type(WGenParams(tuple(_floats(args.w_params, 4)))), f"w-params {args.w_params}")
    elif args.family_p is not None:
        state = StateFile("density", family_state(args.family_p), f"noisy W family p={args.family_p!r}")
        parts, claimed = family_state_decomposition(args.family_p), "W"
    elif args.edge is not None:
        params = EdgeFamilyParams(*_floats(args.edge, 3))
        state = StateFile("density", edge_family(params), f"edge family a,b,c={args.edge}")
        parts, claimed = edge_family_bisep_decomposition(params), "B"
    else:
        vec = {"ghz": GHZ, "w": W}[args.named]
        state = StateFile("pure", vec.copy(), f"named {args.named}")
    if args.decomposition:
        if state.is_pure or args.family_p is None and args.edge is None:
            raise InvalidInputError("--decomposition is available for --family-p and --edge only")
        write_atomic(args.decomposition, dumps_decomposition(parts, claimed))
    _emit(dumps_state(state), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    tol = _tolerances(args)
    state = read_state(args.input, tol)
    rho = state.density()
    decomposition = None
    if args.decomposition:
        with open(args.decomposition) as fh:
            parts, claimed = loads_decomposition(fh.read())
        try:
            decomposition = (parts, MixedClass[claimed])
        except KeyError:
            raise InvalidInputError(f"unknown class {claimed!r} in decomposition file") from None
    verdict = classify_mixed(rho, _config(args), tol, decomposition)
    report = _base_report("classify", args, tol)
    report["starts"] = args.starts
    report["class_interval"] = {
        "lower": verdict.lower.name,
        "upper": verdict.upper.name,
        "description": verdict.describe(),
    }
    report["rank_signature"] = list(rank_signature(rho, tol))
    report["ppt_signature"] = list(ppt_signature(rho, tol))
    report["certificates"] = [
        {"kind": c.kind.value, "bound": c.bound, "class": c.cls.name, "payload": c.payload} for c in verdict.evidence
    ]
    _emit(_render(report, args.report), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if not 0.0 <= args.p_min < args.p_max <= 1.0:
        raise InvalidInputError("need 0 <= p-min < p-max <= 1")
    if args.steps < 2:
        raise InvalidInputError("need at least two steps")
    wit = {"ghz": std_witness("GHZ"), "w1": w1_analog(), "w2": std_witness("W2")}[args.witness]
    ps = np.linspace(args.p_min, args.p_max, args.steps)
    tol = Tolerances()
    rows = ["p,value,detected"]
    for p in ps:
        v = evaluate(wit, family_state(float(p)))
        rows.append(f"{float(p)!r},{v!r},{int(v < -tol.zero_tol)}")
    interval = detection_interval(wit, family_state, args.p_min, args.p_max, args.steps, tol)
    if interval is not None:
        for edge, at_end in ((interval.lo, args.p_min), (interval.hi, args.p_max)):
            if edge != at_end:
                rows.append(f"{edge!r},{evaluate(wit, family_state(edge))!r},boundary")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_edge_check(args) -> int:
    tol = _tolerances(args)
    state = read_state(args.input, tol)
    if state.is_pure:
        raise InvalidInputError("edge-check needs a density state file")
    rho = state.data
    verdict = product_in_ranges_search(rho, _config(args), tol)
    report = _base_report("edge-check", args, tol)
    report["starts"] = args.starts
    report["ppt_signature"] = list(ppt_signature(rho, tol))
    report["rank_signature"] = list(rank_signature(rho, tol))
    report["residual"] = verdict.residual
    report["is_edge"] = verdict.is_edge
    report["product_vector"] = verdict.witness_vector
    params = recognize_edge_family(rho)
    if params is not None:
        report["edge_family"] = {"a": params.a, "b": params.b, "c": params.c, "analytic_is_edge": edge_family_is_edge(params, tol)}
    _emit(_render(report, args.report), args.out)
    return EXIT_OK


def cmd_overlap(args) -> int:
    tol = Tolerances()
    state = read_state(args.input, tol)
    if not state.is_pure:
        raise InvalidInputError("overlap needs a pure state file")
    report = _base_report("overlap", args, tol)
    report["class"] = args.cls
    if args.cls == "bisep":
        value, partition = max_bisep_overlap(state.data)
        report["value"] = value
        report["partition"] = partition.value
    else:
        value, vec = max_w_overlap(state.data, _config(args))
        report["starts"] = args.starts
        report["value"] = value
        report["achiever"] = vec
    _emit(_render(report, args.report), args.out)
    return EXIT_OK


def cmd_subtract(args) -> int:
    tol = _tolerances(args)
    state = read_state(args.input, tol)
    vec = read_state(args.vector, tol)
    if not vec.is_pure:
        raise InvalidInputError("--vector must name a pure state file")
    lam = max_subtractable_weight(state.density(), vec.data, tol)
    report = _base_report("subtract", args, tol)
    report["weight"] = lam
    _emit(_render(report, args.report), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triwit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"triwit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    def common(p, optimizer=True, report=True, tol=True):
        p.add_argument("--out", help="write output here instead of stdout")
        if optimizer:
            p.add_argument("--seed", type=int, default=seed)
            p.add_argument("--starts", type=int, default=OptimizerConfig().starts)
        else:
            p.set_defaults(seed=seed)
        if report:
            p.add_argument("--report", choices=("text", "machine"), default="text")
        if tol:
            p.add_argument("--tol", type=float, help="positivity tolerance (default 1e-9)")

    g = sub.add_parser("gen", help="write a state file")
    which = g.add_mutually_exclusive_group(required=True)
    which.add_argument("--ghz-params", metavar="L0,L1,L2,L3,L4,THETA")
    which.add_argument("--w-params", metavar="L0,L1,L2,L3")
    which.add_argument("--family-p", type=float, metavar="P")
    which.add_argument("--edge", metavar="A,B,C")
    which.add_argument("--named", choices=("ghz", "w"))
    g.add_argument("--decomposition", metavar="PATH", help="also write the state's explicit decomposition")
    common(g, optimizer=False, report=False, tol=False)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("classify", help="bracket the class of a state")
    c.add_argument("input")
    c.add_argument("--decomposition", metavar="PATH")
    common(c)
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("scan", help="witness values along the noisy W family, as CSV")
    s.add_argument("--witness", choices=("ghz", "w1", "w2"), default="w2")
    s.add_argument("--family", choices=("w",), default="w")
    s.add_argument("--p-min", type=float, default=0.0)
    s.add_argument("--p-max", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=1001)
    common(s, optimizer=False, report=False, tol=False)
    s.set_defaults(func=cmd_scan)

    e = sub.add_parser("edge-check", help="search for a product vector compatible with all ranges")
    e.add_argument("input")
    common(e)
    e.set_defaults(func=cmd_edge_check)

    o = sub.add_parser("overlap", help="maximal squared overlap with the W-type or biseparable vectors")
    o.add_argument("input")
    o.add_argument("--class", dest="cls", choices=("w", "bisep"), default="w")
    common(o, tol=False)
    o.set_defaults(func=cmd_overlap)

    m = sub.add_parser("subtract", help="largest weight of a pure projector inside a state")
    m.add_argument("input")
    m.add_argument("--vector", required=True)
    common(m, optimizer=False)
    m.set_defaults(func=cmd_subtract)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
    except InvalidInputError as exc:
        print(f"triwit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, OSError) as exc:
        print(f"triwit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"triwit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
