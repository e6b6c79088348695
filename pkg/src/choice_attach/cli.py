"""Command line interface: ``choice-attach <command> [options]``.

Every output (CSV or JSON) carries the schema version and the full run
configuration, so the command that produced a file can be read back from it.
Exit codes: 0 ok, 2 bad configuration, 3 analytic search/solve failure,
4 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ConvergenceError, MemoryCapError, NotFoundError
from .kernel import ModelParams, Sampling
from .recurrence import DEFAULT_TOL, classify_tail, cutoff_k0, pk_sequence, pstar, threshold_r
from .simulator import DEFAULT_KMAX, DEFAULT_MEMORY_CAP, run_sim
from .verification import convergence_report

SCHEMA_VERSION = "1"
OUT_ENV = "CHOICE_ATTACH_OUT"

EXIT_OK, EXIT_CONFIG, EXIT_ANALYTIC, EXIT_RESOURCE = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    r: int | None = None
    s: int | None = None
    kmax: int | None = None
    steps: int | None = None
    seeds: int | None = None
    base_seed: int | None = None
    tol: float | None = None
    mode: str | None = None
    format: str = "csv"
    out: str | None = None
    checkpoints: list[int] | None = None
    r_cap: int | None = None
    k_search_max: int | None = None
    memory_cap_mb: int | None = None

    def params(self) -> ModelParams:
        return ModelParams(self.r, self.s, Sampling(self.mode or Sampling.WITH_REPLACEMENT.value))


# ---------------------------------------------------------------------------
# table formatting


def format_cell(value, kind: str) -> str:
    if value is None:
        return ""
    if kind == "float":
        value = float(value)
        return "" if math.isnan(value) else format(value, ".17g")
    if kind == "int":
        return str(int(value))
    return str(value)


def parse_cell(text: str, kind: str):
    if text == "":
        return None
    if kind == "float":
        return float(text)
    if kind == "int":
        return int(text)
    return text


@dataclass
class Table:
    config: dict
    columns: list[str]
    types: list[str]
    rows: list[list]


def dump_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    buf.write(f"# config: {json.dumps(table.config, sort_keys=True)}\n")
    buf.write(f"# types: {','.join(table.types)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(v, t) for v, t in zip(row, table.types)])
    return buf.getvalue()


def load_csv(text: str) -> Table:
    lines = text.splitlines()
    meta = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("# "):
            body_start = i
            break
        key, _, value = line[2:].partition(": ")
        meta[key] = value
    if meta.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {meta.get('schema_version')!r}")
    types = meta["types"].split(",")
    reader = csv.reader(lines[body_start:])
    columns = next(reader)
    rows = [[parse_cell(c, t) for c, t in zip(row, types)] for row in reader]
    return Table(json.loads(meta["config"]), columns, types, rows)


def dump_json(table: Table) -> str:
    def clean(v, t):
        if v is None:
            return None
        if t == "float":
            v = float(v)
            return None if math.isnan(v) else float(format(v, ".17g"))
        if t == "int":
            return int(v)
        return str(v)

    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": table.config,
        "columns": table.columns,
        "types": table.types,
        "rows": [[clean(v, t) for v, t in zip(row, table.types)] for row in table.rows],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def load_json(text: str) -> Table:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    return Table(doc["config"], doc["columns"], doc["types"], doc["rows"])


def exact_decimal(x: Fraction) -> str:
    """Exact decimal expansion of a rational whose denominator is 2^a 5^b."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    e2 = e5 = 0
    while den % 2 == 0:
        den //= 2
        e2 += 1
    while den % 5 == 0:
        den //= 5
        e5 += 1
    if den != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    e = max(e2, e5)
    scaled = num * 2 ** (e - e2) * 5 ** (e - e5)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(e + 1, "0")
    if e == 0:
        return sign + digits
    return f"{sign}{digits[:-e]}.{digits[-e:]}"


# ---------------------------------------------------------------------------
# commands


def cmd_pk(cfg: RunConfig) -> Table:
    table = pk_sequence(cfg.params(), cfg.kmax, cfg.tol)
    rows = [[k, p, q, rep.label, lq, res]
            for k, p, q, rep, lq, res in table.rows()]
    return Table(asdict(cfg), ["k", "p_k", "q_k", "repr", "log_q", "residual"],
                 ["int", "float", "float", "str", "float", "float"], rows)


def cmd_pstar(cfg: RunConfig) -> Table:
    res = pstar(cfg.params())
    lo, hi = res.bracket if res.bracket else (None, None)
    row = [cfg.r, cfg.s, res.kind.value, res.value,
           exact_decimal(lo) if lo is not None else None,
           exact_decimal(hi) if hi is not None else None,
           res.certificate[0], res.certificate[1]]
    return Table(asdict(cfg), ["r", "s", "kind", "value", "bracket_lo", "bracket_hi", "sturm_v0", "sturm_v1"],
                 ["int", "int", "str", "float", "str", "str", "int", "int"], [row])


def cmd_threshold(cfg: RunConfig) -> Table:
    r = threshold_r(cfg.s, cfg.r_cap)
    return Table(asdict(cfg), ["s", "r_threshold"], ["int", "int"], [[cfg.s, r]])


def cmd_cutoff(cfg: RunConfig) -> Table:
    res = cutoff_k0(cfg.params(), cfg.k_search_max, cfg.tol)
    return Table(asdict(cfg), ["r", "s", "k0", "p_k0", "q_k0", "bound_rhs"],
                 ["int", "int", "int", "float", "float", "float"],
                 [[cfg.r, cfg.s, res.k0, res.p_k0, res.q_k0, res.bound_rhs]])


def cmd_classify(cfg: RunConfig) -> Table:
    params = cfg.params()
    return Table(asdict(cfg), ["r", "s", "tail_class", "pstar_kind"], ["int", "int", "str", "str"],
                 [[cfg.r, cfg.s, classify_tail(params).value, pstar(params).kind.value]])


def cmd_simulate(cfg: RunConfig) -> Table:
    params = cfg.params()
    rows = []
    cap = cfg.memory_cap_mb * 1024**2
    for i in range(cfg.seeds):
        seed = cfg.base_seed + i
        sim = run_sim(params, cfg.steps, seed, cfg.checkpoints, cfg.kmax, memory_cap=cap)
        for c, pm in zip(sim.checkpoints, sim.pm_history):
            for k in range(1, c.kmax + 1):
                rows.append([c.m, k, int(c.F[k]), int(c.N[k]), c.max_degree, pm, seed])
    return Table(asdict(cfg), ["m", "k", "F", "N", "max_degree", "pm_estimate", "seed"],
                 ["int", "int", "int", "int", "int", "float", "int"], rows)


def cmd_compare(cfg: RunConfig) -> Table:
    rep = convergence_report(cfg.params(), cfg.steps, cfg.seeds, cfg.kmax, cfg.tol, cfg.base_seed)
    rows = [[row.k, row.p_theory, row.p_empirical, row.stderr, row.gap] for row in rep.rows]
    return Table(asdict(cfg), ["k", "p_theory", "p_empirical", "stderr", "gap"],
                 ["int", "float", "float", "float", "float"], rows)


COMMANDS = {
    "pk": cmd_pk,
    "pstar": cmd_pstar,
    "threshold": cmd_threshold,
    "cutoff": cmd_cutoff,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
}


# ---------------------------------------------------------------------------
# argument parsing


def _checkpoint_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="choice-attach", allow_abbrev=False,
                                     description="Preferential attachment with choice: limits and simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rs=True, s_only=False):
        if rs:
            p.add_argument("--r", type=int, required=True, help="number of sampled vertices")
            p.add_argument("--s", type=int, required=True, help="rank (by degree) of the chosen vertex")
        if s_only:
            p.add_argument("--s", type=int, required=True)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("pk", help="the limit sequence p_k", allow_abbrev=False)
    common(p)
    p.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("pstar", help="the limit p_* (exact Sturm isolation)", allow_abbrev=False)
    common(p)

    p = sub.add_parser("threshold", help="smallest r with p_* < 1", allow_abbrev=False)
    common(p, rs=False, s_only=True)
    p.add_argument("--r-cap", type=int, default=None)

    p = sub.add_parser("cutoff", help="first k0 of the doubly-exponential regime", allow_abbrev=False)
    common(p)
    p.add_argument("--k-search-max", type=int, default=10**6)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("classify", help="tail class of (r, s)", allow_abbrev=False)
    common(p)

    for name, helptext in (("simulate", "grow trees and dump degree censuses"),
                           ("compare", "seed-averaged simulation against p_k")):
        p = sub.add_parser(name, help=helptext, allow_abbrev=False)
        common(p)
        p.add_argument("--steps", type=int, required=True)
        p.add_argument("--seeds", type=int, default=1, help="number of independent runs")
        p.add_argument("--base-seed", type=int, default=0, help="run i uses seed base_seed + i")
        p.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
        p.add_argument("--mode", choices=[m.value for m in Sampling], default=Sampling.WITH_REPLACEMENT.value)
        p.add_argument("--memory-cap-mb", type=int, default=DEFAULT_MEMORY_CAP // 1024**2)
        if name == "simulate":
            p.add_argument("--checkpoints", type=_checkpoint_list, default=None,
                           help="comma-separated times m (default: powers of 10 and the final time)")
        else:
            p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    if cfg.r is not None:
        cfg.params()  # validates r, s, mode
    elif cfg.s is not None and cfg.s < 1:
        raise ValueError("s must be >= 1")
    for name in ("kmax", "steps", "seeds"):
        v = getattr(cfg, name)
        if v is not None and v < (0 if name == "kmax" else 1):
            raise ValueError(f"--{name} out of range: {v}")
    if cfg.command in ("simulate", "compare") and cfg.kmax < 1:
        raise ValueError("--kmax must be >= 1 for simulations")
    return cfg


def output_path(cfg: RunConfig) -> Path | None:
    out_dir = os.environ.get(OUT_ENV)
    if out_dir:
        name = Path(cfg.out).name if cfg.out else f"{cfg.command}.{cfg.format}"
        return Path(out_dir) / name
    return Path(cfg.out) if cfg.out else None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ValueError, TypeError) as exc:
        print(f"choice-attach: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = COMMANDS[cfg.command](cfg)
    except (NotFoundError, ConvergenceError) as exc:
        print(f"choice-attach: {exc}", file=sys.stderr)
        return EXIT_ANALYTIC
    except MemoryCapError as exc:
        print(f"choice-attach: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"choice-attach: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = dump_json(table) if cfg.format == "json" else dump_csv(table)
    path = output_path(cfg)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
