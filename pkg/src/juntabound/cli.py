"""Command-line entry point.

Exit codes: 0 success, 1 a verification or certificate check failed,
2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__, lp, oracle
from .boolfn import parse, to_text
from .measures import ArityLimitError, measure_report, REPORT_ARITY_LIMIT
from .rational import ceil_decimal, frac_str
from .wrec import BsCapTable, LP, WORST, w_star_bound, w_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    dmax: int = lp.LP_DMAX
    depth: int = 14
    caps: str = LP
    digits: int = 6
    format: str = "text"
    jobs: int = 1
    persist: str | None = None
    bs_records: str | None = None
    n: int = 4
    input: str | None = None

    def __post_init__(self):
        if self.digits < 1:
            raise UsageError("--digits must be >= 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")


def _header(cfg: RunConfig) -> str:
    return f"# juntabound {__version__} {cfg.command}"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(cfg: RunConfig, payload: dict) -> str:
    return json.dumps({"version": __version__, "command": cfg.command, **payload}, indent=2) + "\n"


def _caps(cfg: RunConfig) -> BsCapTable:
    if cfg.caps == WORST:
        return BsCapTable.worst()
    if cfg.bs_records:
        try:
            records = lp.read_records(cfg.bs_records)
            dmax = max((int(r["d"]) for r in records), default=0)
            table = lp.table_from_records(records, dmax)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot use {cfg.bs_records}: {exc}") from None
        return BsCapTable.lp(table.caps())
    return BsCapTable.lp()


# -- commands ---------------------------------------------------------------


def cmd_bs_table(cfg: RunConfig, out) -> int:
    if cfg.dmax < 1:
        raise UsageError("--dmax must be >= 1")
    if cfg.dmax > lp.LP_DMAX:
        print(f"warning: --dmax {cfg.dmax} is above {lp.LP_DMAX}; expect long runtimes", file=sys.stderr)
    table = lp.bs_table(cfg.dmax, jobs=cfg.jobs)
    caps = table.caps()
    ratios, c0 = lp.c0_ratios(caps)
    if cfg.persist:
        n = lp.write_records(cfg.persist, table.records())
        print(f"wrote {n} records to {cfg.persist}", file=sys.stderr)
    if cfg.format == "json":
        rows = []
        for d, b in caps.items():
            wit = table.entries[d].witness()
            rows.append({"d": d, "b": b, "ratio": frac_str(ratios[d]),
                         "witness": None if wit is None else [frac_str(x) for x in wit.witness]})
        out.write(_json(cfg, {"rows": rows, "c0": None if c0 is None else frac_str(c0)}))
    elif cfg.format == "csv":
        out.write(_csv(["d", "b", "ratio", "ratio_decimal"],
                       [[d, b, frac_str(ratios[d]), ceil_decimal(ratios[d], cfg.digits)] for d, b in caps.items()]))
    else:
        out.write(_header(cfg) + "\n")
        for d, b in caps.items():
            out.write(f"{d} → {b}\n")
        if c0 is not None:
            out.write(f"max b(d)/d^2 over d >= 4: {frac_str(c0)} <= {ceil_decimal(c0, cfg.digits)}\n")
    return EXIT_OK


def cmd_w_table(cfg: RunConfig, out) -> int:
    if cfg.depth < 1:
        raise UsageError("--depth must be >= 1")
    caps = _caps(cfg)
    table = w_table(cfg.depth, caps)
    rows = [(d, caps(d), table.head(d)) for d in range(1, cfg.depth + 1)]
    if cfg.format == "json":
        out.write(_json(cfg, {"caps": cfg.caps, "half_degree": True, "rows": [
            {"d": d, "b": b, "w": frac_str(w), "decimal": ceil_decimal(w, cfg.digits)} for d, b, w in rows]}))
    elif cfg.format == "csv":
        out.write(_csv(["d", "b", "w", "decimal"], [[d, b, frac_str(w), ceil_decimal(w, cfg.digits)] for d, b, w in rows]))
    else:
        out.write(_header(cfg) + f" caps={cfg.caps}\n")
        for d, b, w in rows:
            out.write(f"d={d:<3} b={b:<5} W <= {ceil_decimal(w, cfg.digits)}  ({frac_str(w)})\n")
    return EXIT_OK


def cmd_w_star(cfg: RunConfig, out) -> int:
    if cfg.depth < 1:
        raise UsageError("--depth must be >= 1")
    caps = _caps(cfg)
    res = w_star_bound(cfg.depth, caps)
    rec = res.record(cfg.digits)
    if cfg.format == "json":
        out.write(_json(cfg, rec))
    elif cfg.format == "csv":
        out.write(_csv(list(rec), [list(rec.values())]))
    else:
        out.write(_header(cfg) + f" caps={cfg.caps} depth={cfg.depth} half_degree=on\n")
        for part in ("head", "tail", "total"):
            out.write(f"{part:<5} <= {rec[part + '_decimal']}  ({rec[part]})\n")
        out.write(f"junta: |R(f)| <= {rec['total_decimal']} * 2^deg(f)\n")
    return EXIT_OK


def _read_function(spec: str):
    text = spec
    if ":" not in spec and os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read().strip()
    try:
        return parse(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse function: {exc}") from None


def _coords(d: dict) -> dict:
    return {str(k): frac_str(v) if isinstance(v, Fraction) else v for k, v in sorted(d.items())}


def cmd_analyze(cfg: RunConfig, out) -> int:
    if not cfg.input:
        raise UsageError("analyze needs a truth table, e.g. 2:0001")
    f = _read_function(cfg.input)
    try:
        rep = measure_report(f)
    except ArityLimitError as exc:
        raise UsageError(str(exc)) from None
    payload = {
        "function": to_text(f),
        "arity": rep.arity,
        "degree": rep.degree,
        "deg_i": _coords(rep.deg_i),
        "relevant": sorted(rep.relevant),
        "influence_i": _coords(rep.influence_i),
        "total_influence": frac_str(rep.total_influence),
        "sensitivity": rep.sensitivity,
        "block_sensitivity": rep.block_sensitivity,
        "bs_witness": {"base_input": list(rep.bs_witness.base_input),
                       "blocks": [sorted(B) for B in rep.bs_witness.blocks]},
        "w": frac_str(rep.w_value),
        "s": frac_str(rep.s_value),
        "s_i": _coords(rep.s_index),
    }
    if cfg.format == "json":
        out.write(_json(cfg, payload))
    elif cfg.format == "csv":
        scalar = [k for k, v in payload.items() if not isinstance(v, (dict, list))]
        out.write(_csv(scalar, [[payload[k] for k in scalar]]))
    else:
        out.write(_header(cfg) + "\n")
        out.write(f"function           {payload['function']}\n")
        out.write(f"degree             {rep.degree}\n")
        out.write(f"relevant           {payload['relevant']}\n")
        out.write(f"deg_i              {payload['deg_i']}\n")
        out.write(f"influence_i        {payload['influence_i']}\n")
        out.write(f"total influence    {payload['total_influence']}\n")
        out.write(f"sensitivity        {rep.sensitivity}\n")
        out.write(f"block sensitivity  {rep.block_sensitivity}  at {payload['bs_witness']['base_input']}"
                  f" blocks {payload['bs_witness']['blocks']}\n")
        out.write(f"W                  {payload['w']}\n")
        out.write(f"S                  {payload['s']}\n")
        out.write(f"s_i                {payload['s_i']}\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out) -> int:
    if not 0 <= cfg.n <= oracle.EXHAUSTIVE_LIMIT:
        raise UsageError(f"--n must be in [0, {oracle.EXHAUSTIVE_LIMIT}]")
    wtables, bstable = oracle.default_tables(cfg.n)
    report = oracle.run_suite(cfg.n, wtables, bstable, jobs=cfg.jobs)
    tensor = oracle.run_tensor_suite(2)
    return _emit_report(cfg, out, report, tensor)


def _emit_report(cfg: RunConfig, out, report, tensor) -> int:
    ok = report.ok and tensor.ok
    if cfg.format == "json":
        out.write(_json(cfg, {"ok": ok, "suite": report.record(), "tensor": tensor.record()}))
    elif cfg.format == "csv":
        rows = [["suite", k, report.checks[k], report.vacuous.get(k, 0)] for k in report.checks]
        rows += [["tensor", k, tensor.checks[k], tensor.vacuous.get(k, 0)] for k in tensor.checks]
        out.write(_csv(["suite", "check", "passed", "vacuous"], rows))
    else:
        out.write(_header(cfg) + f" n={report.arity}\n")
        out.write(f"functions checked: {report.functions_checked}\n")
        for k, v in report.checks.items():
            out.write(f"  {k:<20} {v:>7} passed ({report.vacuous.get(k, 0)} vacuous)\n")
        out.write(f"composition pairs checked (arity <= 2): {tensor.functions_checked}\n")
        for k, v in tensor.checks.items():
            out.write(f"  {k:<20} {v:>7} passed ({tensor.vacuous.get(k, 0)} vacuous)\n")
        bad = report.counterexamples + tensor.counterexamples
        out.write(f"counterexamples: {len(bad)}\n")
        for fn, check, details in bad:
            out.write(f"  {check}: {fn} {details}\n".rstrip() + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lp_check(cfg: RunConfig, out) -> int:
    if not cfg.input:
        raise UsageError("lp-check needs a record file")
    try:
        records = lp.read_records(cfg.input)
        outcomes = [lp.LpOutcome.from_record(r) for r in records]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read {cfg.input}: {exc}") from None
    failed = []
    for o in outcomes:
        try:
            good = lp.check_outcome(o)
        except ValueError:
            good = False
        if not good:
            failed.append(o)
    if not outcomes:
        out.write("0 records\n")
        return EXIT_OK
    out.write(f"{len(outcomes)} records, {len(outcomes) - len(failed)} verified, {len(failed)} failed\n")
    for o in failed:
        out.write(f"  FAILED d={o.d} b={o.b} tau={o.tau} ({'feasible' if o.feasible else 'infeasible'})\n")
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "bs-table": cmd_bs_table,
    "w-table": cmd_w_table,
    "w-star": cmd_w_star,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "lp-check": cmd_lp_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="juntabound", description="Block-sensitivity caps, W(b,d) bounds and junta-size constants.")
    p.add_argument("--version", action="version", version=f"juntabound {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, caps=False):
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--digits", type=int, default=6, help="decimal digits, always rounded up")
        sp.add_argument("--jobs", type=int, default=1)
        if caps:
            sp.add_argument("--caps", choices=(WORST, LP), default=LP)
            sp.add_argument("--bs-records", dest="bs_records",
                            help="take LP caps from a persisted, re-verified record file instead of the built-in table")

    sp = sub.add_parser("bs-table", help="largest feasible b(d) of the moment LP")
    sp.add_argument("--dmax", type=int, default=lp.LP_DMAX)
    sp.add_argument("--persist", help="write every witness/certificate as JSON lines")
    common(sp)

    for name, helptext, depth in (("w-table", "bounds on W(cap(d), d)", 14), ("w-star", "bound on the limit W*", 30)):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--depth", type=int, default=depth)
        common(sp, caps=True)

    sp = sub.add_parser("analyze", help=f"all measures of one function (arity <= {REPORT_ARITY_LIMIT})")
    sp.add_argument("input", nargs="?", help="'n:BITS', 'n:0xHEX', or a file holding one")
    common(sp)

    sp = sub.add_parser("verify", help="exhaustive inequality suite over all functions of arity n")
    sp.add_argument("--n", type=int, default=4)
    common(sp)

    sp = sub.add_parser("lp-check", help="re-verify persisted LP witnesses and certificates")
    sp.add_argument("input", nargs="?", help="record file written by bs-table --persist")
    common(sp)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    try:
        cfg = RunConfig(**fields)
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"juntabound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
