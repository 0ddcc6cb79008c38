"""Command-line front end: ``polar-automorph <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .automorphism import automorphism_group, is_automorphism, perm_from_affine
from .gf2 import AffineMap, BlockStructure, block_structure, blta_order, format_factored, sample_blta
from .invariance import commute_oracle, count_classes, dec_aut, dec_group, sample_ensemble
from .monomial import (
    InfoSet,
    Monomial,
    PolarCode,
    closure_from_z,
    decreasing_closure,
    describe_code,
    load_code_spec,
)
from .sc import sc_decode
from .simulation import MODES, SimConfig, ae_decode, run_bler

SCHEMA = 1


class DomainError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, (np.floating, np.integer)):
        return _jsonable(v.item())
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


_ECHO: dict = {}


def _emit(payload: dict) -> None:
    print(json.dumps(_jsonable({"schema": SCHEMA, **_ECHO, **payload}), indent=2))


def _echo_labels(m: int, name: str, values: list[int], a_space: bool) -> None:
    """Record the code input in both labelings, so a flipped convention is visible."""
    top = (1 << m) - 1
    zs = [top - v for v in values] if a_space else list(values)
    _ECHO["input"] = {"m": m, f"{name}_z": zs, f"{name}_a": [top - z for z in zs]}


def _resolve_code(args) -> InfoSet:
    if args.code_file:
        return load_code_spec(Path(args.code_file).read_text())
    if args.m is None:
        raise DomainError("give --code-file, or --m together with --i-min or --info")
    if (args.i_min is None) == (args.info is None):
        raise DomainError("give exactly one of --i-min and --info")
    m = args.m
    given = args.i_min if args.i_min is not None else args.info
    if any(not 0 <= v < (1 << m) for v in given):
        raise DomainError(f"labels must lie in [0, {(1 << m) - 1}] for m={m}")
    _echo_labels(m, "i_min" if args.i_min is not None else "info", given, args.a_space)
    if args.i_min is not None:
        if args.a_space:
            return decreasing_closure([Monomial(m, a) for a in args.i_min], m)
        return closure_from_z(m, args.i_min)
    return InfoSet(m, frozenset(args.info)) if args.a_space else InfoSet.from_z(m, args.info)


def _code_block(info: InfoSet) -> dict:
    return describe_code(info)


def _map_json(t: AffineMap) -> dict:
    text = t.matrix.to_text().split()
    return {"matrix": text[1:], "shift": "".join(map(str, t.shift_bits())),
            "perm": list(perm_from_affine(t).table)}


def _baseline(m: int) -> BlockStructure:
    return BlockStructure([2] + [1] * (m - 2)) if m >= 2 else BlockStructure([1])


def cmd_construct(args) -> None:
    _emit({"code": _code_block(_resolve_code(args))})


def cmd_autgroup(args) -> None:
    info = _resolve_code(args)
    s = automorphism_group(info)
    _emit({"structure": list(s.sizes), "order": format_factored(blta_order(s)), "K": info.k})


def cmd_invgroup(args) -> None:
    info = _resolve_code(args)
    s = dec_group(info)
    odd, pow2 = blta_order(s)
    base = blta_order(_baseline(info.m))
    _emit({
        "structure": list(s.sizes),
        "order": format_factored((odd, pow2)),
        "order_affine": format_factored((odd, pow2 + info.m)),
        "baseline_2_1_order": format_factored(base),
        "aut_structure": list(automorphism_group(info).sizes),
        "K": info.k,
    })


def cmd_count_classes(args) -> None:
    info = _resolve_code(args)
    summary = count_classes(info)
    aut = summary.aut_structure
    base = _baseline(info.m)
    baseline = None
    if aut.breakpoints() <= base.breakpoints():
        baseline = count_classes(info, inv_structure=base).classes
    _emit({
        "classes": summary.classes,
        "baseline_2_1": baseline,
        "aut_structure": list(aut.sizes),
        "inv_structure": list(summary.inv_structure.sizes),
    })


def cmd_check(args) -> None:
    info = _resolve_code(args)
    if not args.matrix_file:
        raise DomainError("check needs --matrix-file")
    t = AffineMap.from_text(Path(args.matrix_file).read_text())
    if t.m != info.m:
        raise DomainError(f"matrix has m={t.m}, code has m={info.m}")
    if not is_automorphism(t.matrix, info):
        raise DomainError("matrix is not an automorphism of the code")
    s = block_structure(t.matrix)
    verdict = dec_aut(s, info)
    res = commute_oracle(t.matrix, t.shift, info, args.trials, np.random.default_rng(args.seed))
    _emit({
        "structure": list(s.sizes),
        "dec_aut": verdict.value,
        "oracle": "commutes" if res.commutes else "counterexample",
        "probes": res.trials,
        "probe_counterexample": None if res.commutes else res.counterexample,
    })


def cmd_sample(args) -> None:
    info = _resolve_code(args)
    try:
        maps = sample_ensemble(info, args.t, np.random.default_rng(args.seed))
    except ValueError as exc:
        raise DomainError(str(exc))
    payload = {"t": args.t, "maps": [_map_json(t) for t in maps]}
    if args.out:
        Path(args.out).write_text(json.dumps({"schema": SCHEMA, **payload}, indent=2))
        _emit({"written": args.out, "t": args.t})
    else:
        _emit(payload)


def _read_llrs(args) -> np.ndarray:
    text = Path(args.llr_file).read_text() if args.llr_file else (args.llr or "")
    toks = text.replace(",", " ").split()
    if not toks:
        raise DomainError("decode needs --llr or --llr-file")
    try:
        return np.array([float(tok) for tok in toks])
    except ValueError as exc:
        raise DomainError(f"bad LLR token: {exc}")


def cmd_decode(args) -> None:
    info = _resolve_code(args)
    code = PolarCode(info)
    y = _read_llrs(args)
    if y.size != code.n:
        raise DomainError(f"got {y.size} LLRs, code length is {code.n}")
    minsum = args.decoder == "minsum"
    if args.t > 1:
        maps = sample_ensemble(info, args.t, np.random.default_rng(args.seed))
        x = ae_decode(code, maps, y, minsum=minsum)
        _emit({"codeword": x.tolist(), "t": args.t})
    else:
        res = sc_decode(code, y, minsum=minsum)
        _emit({"codeword": res.codeword.tolist(), "message": res.info_bits(code).tolist()})


def cmd_simulate(args) -> None:
    if args.config:
        cfg = SimConfig.from_json(Path(args.config).read_text())
    else:
        code = json.loads(Path(args.code_file).read_text()) if args.code_file else None
        if code is None:
            if args.m is None or args.i_min is None:
                raise DomainError("simulate needs --config, --code-file, or --m with --i-min")
            code = {"m": args.m, "i_min_z": args.i_min}
        cfg = SimConfig(code=code, t=args.t, mode=args.mode, ebn0_db=args.ebn0 or [2.0],
                        max_frames=args.frames, max_errors=args.max_errors, seed=args.seed,
                        decoder=args.decoder)
    report = run_bler(cfg)
    if args.csv:
        sys.stdout.write(report.to_csv())
    else:
        print(report.to_json())


def cmd_oracle(args) -> None:
    info = _resolve_code(args)
    rng = np.random.default_rng(args.seed)
    aut = automorphism_group(info)
    agree = disagree = 0
    cases = []
    for _ in range(args.samples):
        t = sample_blta(aut, rng)
        s = block_structure(t.matrix)
        verdict = dec_aut(s, info).value
        res = commute_oracle(t.matrix, t.shift, info, args.trials, rng)
        ok = verdict == res.commutes
        agree += ok
        disagree += not ok
        cases.append({"structure": list(s.sizes), "dec_aut": verdict, "oracle_commutes": res.commutes})
    _emit({"samples": args.samples, "agree": agree, "disagree": disagree, "cases": cases})


COMMANDS = {
    "construct": cmd_construct,
    "autgroup": cmd_autgroup,
    "invgroup": cmd_invgroup,
    "check": cmd_check,
    "count-classes": cmd_count_classes,
    "sample": cmd_sample,
    "decode": cmd_decode,
    "simulate": cmd_simulate,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int)
    common.add_argument("--i-min", type=_int_list, help="generator monomials as z-labels")
    common.add_argument("--info", type=_int_list, help="full information set as z-labels")
    common.add_argument("--code-file", help="JSON code description")
    common.add_argument("--a-space", action="store_true", help="read --i-min/--info as a-vectors")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="polar-automorph")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("construct", "autgroup", "invgroup", "count-classes"):
        sub.add_parser(name, parents=[common])
    sp = sub.add_parser("check", parents=[common])
    sp.add_argument("--matrix-file")
    sp.add_argument("--trials", type=int, default=1000)
    sp = sub.add_parser("sample", parents=[common])
    sp.add_argument("--t", type=int, default=8)
    sp.add_argument("--out")
    sp = sub.add_parser("decode", parents=[common])
    sp.add_argument("--llr")
    sp.add_argument("--llr-file")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--decoder", choices=("minsum", "exact"), default="minsum")
    sp = sub.add_parser("simulate", parents=[common])
    sp.add_argument("--config")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--mode", choices=MODES, default="distinct_classes")
    sp.add_argument("--ebn0", type=_float_list)
    sp.add_argument("--frames", type=int, default=10_000)
    sp.add_argument("--max-errors", type=int, default=100)
    sp.add_argument("--decoder", choices=("minsum", "exact"), default="minsum")
    sp.add_argument("--csv", action="store_true")
    sp = sub.add_parser("oracle", parents=[common])
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--trials", type=int, default=200)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _ECHO.clear()
    try:
        COMMANDS[args.command](args)
    except (DomainError, ValueError, ArithmeticError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
