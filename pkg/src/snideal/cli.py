"""snideal command line: norms, cross norms, series and verification campaigns.

Exit codes: 0 success or passing campaign, 1 failing campaign, 2 usage or
input error.  Output is JSON on stdout unless --out is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import cb
from .mcn import MCNConfig, MatrixTuple, col_norm, mcn_norm, oh_norm, row_norm
from .seqnorm import (
    BudgetError,
    MultiplicatorConfig,
    Spectrum,
    boyd_estimate,
    dual_evaluate,
    evaluate,
    format_spec,
    multiplicator_norm,
    parse_spec,
    tensor_power_trace,
)
from .verify import CAMPAIGNS, CampaignSpec, oracle_mcn_bruteforce, plain, run_campaign

COMMANDS = ("norm", "dual", "mcn", "multiplicator", "cb-row", "boyd", "tensor-power", "verify", "oracle")


class UsageError(Exception):
    pass


def _seq(text: str) -> Spectrum:
    try:
        return Spectrum.of([float(t) for t in text.split(",") if t.strip()])
    except ValueError as exc:
        raise UsageError(f"bad sequence {text!r}: {exc}") from None


def _load_tuple(path: str) -> MatrixTuple:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return MatrixTuple.from_json(obj, where=os.path.basename(path))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_"), None) is None]
    if missing:
        raise UsageError(f"{args.command}: missing --{', --'.join(missing)}")


def _mcn_config(args) -> MCNConfig:
    return MCNConfig(restarts=args.restarts, max_iters=args.max_iters, tol=args.tol, seed=args.seed)


def _series_csv(path: str, rows, header=("n", "value")):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for a, b in rows:
        w.writerow([a, repr(float(b))])
    _atomic_write(path, buf.getvalue())


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".snideal-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_norm(args):
    _need(args, "spec", "seq")
    spec = parse_spec(args.spec)
    return {"spec": format_spec(spec), "value": evaluate(spec, _seq(args.seq))}, 0


def cmd_dual(args):
    _need(args, "spec", "seq")
    spec = parse_spec(args.spec)
    return {"spec": format_spec(spec.dual()), "value": dual_evaluate(spec, _seq(args.seq))}, 0


def cmd_mcn(args):
    _need(args, "phi", "psi", "tuple")
    phi, psi = parse_spec(args.phi), parse_spec(args.psi)
    T = _load_tuple(args.tuple)
    est = mcn_norm(T, phi, psi, _mcn_config(args))
    out = est.to_dict(with_trace=args.trace)
    if not args.witnesses:
        out.pop("witness_a")
        out.pop("witness_b")
    out["closed_forms"] = {"row": row_norm(T), "column": col_norm(T), "oh": oh_norm(T)}
    out["phi"], out["psi"] = format_spec(phi), format_spec(psi)
    return out, 0


def cmd_multiplicator(args):
    _need(args, "x", "phi", "psi")
    cfg = MultiplicatorConfig(seed=args.seed)
    est = multiplicator_norm(_seq(args.x), parse_spec(args.phi), parse_spec(args.psi), cfg)
    out = est.to_dict()
    out.pop("witness_b")
    return out, 0


def cmd_cb_row(args):
    _need(args, "x", "phi", "psi")
    cfg = MultiplicatorConfig(seed=args.seed)
    return {"value": cb.cb_from_row(_seq(args.x), parse_spec(args.phi), parse_spec(args.psi), cfg)}, 0


def cmd_boyd(args):
    _need(args, "spec")
    est = boyd_estimate(parse_spec(args.spec), args.n_max)
    if args.emit_csv:
        _series_csv(args.emit_csv, est.series, ("n", "log_n_over_log_phi"))
    return {
        "spec": args.spec,
        "p_estimate": est.p_estimate,
        "raw_estimate": est.raw_estimate,
        "trend": est.trend,
        "series": est.series,
        "slopes": est.slopes,
    }, 0


def cmd_tensor_power(args):
    _need(args, "spec", "x")
    spec = parse_spec(args.spec)
    x = _seq(args.x)
    series = tensor_power_trace(spec, x, args.n_max)
    if args.emit_csv:
        _series_csv(args.emit_csv, series, ("n", "root_norm"))
    return {"spec": format_spec(spec), "x": x.tolist(), "eval": evaluate(spec, x), "series": series}, 0


def _campaign_params(args) -> dict:
    params = {}
    allowed = CAMPAIGNS[args.campaign].defaults
    for key in ("phi", "psi", "spec", "x"):
        val = getattr(args, key)
        if val is not None:
            if key not in allowed:
                raise UsageError(f"campaign {args.campaign} takes no --{key}")
            params[key] = val
    for item in args.param or ():
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = _coerce(v.strip(), allowed.get(k.strip()))
    return params


def _coerce(text: str, default):
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(float(text))
    if isinstance(default, float):
        return float(text)
    return text


def cmd_verify(args):
    _need(args, "campaign")
    if args.campaign not in CAMPAIGNS:
        raise UsageError(f"unknown campaign {args.campaign!r}; choose from {', '.join(sorted(CAMPAIGNS))}")
    rep = run_campaign(CampaignSpec(args.campaign, _campaign_params(args), args.seed))
    if args.emit_csv:
        rows = _campaign_series(rep)
        if rows is None:
            raise UsageError(f"campaign {args.campaign} has no series to export")
        _series_csv(args.emit_csv, rows, ("n", "value"))
    return rep.to_dict(with_cases=not args.summary_only), 1 if rep.verdict == "fail" else 0


def _campaign_series(rep):
    name = rep.spec.name
    if name in ("boyd", "tensor_power"):
        return rep.cases[0].values["series"]
    if name == "hsharp":
        return [(N, v) for c in rep.cases for row in c.values["by_theta"] for N, v in row["truncated"]]
    return None


def cmd_oracle(args):
    _need(args, "phi", "psi", "tuple")
    T = _load_tuple(args.tuple)
    val = oracle_mcn_bruteforce(T, parse_spec(args.phi), parse_spec(args.psi), grid=args.grid, seed=args.seed)
    return {"value": val, "method": "grid+lbfgs"}, 0


HANDLERS = {
    "norm": cmd_norm,
    "dual": cmd_dual,
    "mcn": cmd_mcn,
    "multiplicator": cmd_multiplicator,
    "cb-row": cmd_cb_row,
    "boyd": cmd_boyd,
    "tensor-power": cmd_tensor_power,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="snideal", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="file of key=value lines using the long option names")
    ap.add_argument("--spec")
    ap.add_argument("--seq")
    ap.add_argument("--x")
    ap.add_argument("--phi")
    ap.add_argument("--psi")
    ap.add_argument("--tuple", help="MatrixTuple JSON file")
    ap.add_argument("--campaign")
    ap.add_argument("--param", action="append", help="campaign parameter key=value (repeatable)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    ap.add_argument("--emit-csv")
    ap.add_argument("--restarts", type=int, default=16)
    ap.add_argument("--max-iters", type=int, default=500)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--grid", type=int, default=9)
    ap.add_argument("--witnesses", action="store_true", help="include witness matrices")
    ap.add_argument("--trace", action="store_true", help="include the objective trace")
    ap.add_argument("--summary-only", action="store_true", help="omit per-case records")
    return ap


def _config_lines(path: str, parser: argparse.ArgumentParser) -> list:
    known = {a.dest: a for a in parser._actions if a.option_strings}
    argv = []
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for no, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in known or dest in ("config", "help"):
            raise UsageError(f"{path}:{no}: unknown key {key!r}")
        act = known[dest]
        flag = act.option_strings[-1]
        if isinstance(act, argparse._StoreTrueAction):
            if val.lower() in ("1", "true", "yes"):
                argv.append(flag)
        elif isinstance(act, argparse._AppendAction):
            for part in val.split(";"):
                argv += [flag, part.strip()]
        else:
            argv += [flag, val]
    return argv


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # command-line flags win over the config file
        args = parser.parse_args(_config_lines(args.config, parser) + list(argv))
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        out, code = HANDLERS[args.command](args)
    except (UsageError, BudgetError, ValueError) as exc:
        print(f"snideal: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, dict):
        out = {"command": args.command, "seed": args.seed, **out}
    text = json.dumps(plain(out), indent=2) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
