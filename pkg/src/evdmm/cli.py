"""Command-line entry point: ``evdmm <subcommand> [flags]``.

Reports go to standard output, diagnostics to standard error.  Exit status is
0 on success, 1 when ``validate`` finds a gap above tolerance, 2 on input
errors and 3 when a request exceeds a capacity limit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .coefficients import check_weights, max_min_R
from .errors import CapacityError, InputError
from .estimate import (
    TABLE1_BLOCKS,
    TABLE1_M_BAR,
    TABLE1_PUBLISHED_R,
    block_labels,
    block_maxima,
    estimate_R,
    neg_log_returns,
    read_csv,
    rank_transform,
    sample_from_csv,
    table1_estimates,
    write_csv,
    SampleMatrix,
)
from .partition import Partition, parse_partition
from .simulate import SimulationSpec, frechet_cdf, sample
from .tail_models import Comonotone, Independence, Logistic, load_m4_csv

EXIT_OK, EXIT_GAP, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _g(v: float) -> float:
    return float(f"{v:.10g}")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True,
                   choices=["logistic", "m4", "independence", "comonotone"])
    p.add_argument("--theta", type=float, help="logistic dependence parameter in (0, 1]")
    p.add_argument("--dim", type=int, help="number of components (not needed for m4)")
    p.add_argument("--alpha-file", help="CSV with signature_id, component_index, alpha")


def _add_structure_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--groups", help='blocks as "1,2|3" (1-based) or column names; '
                                    "default: one block per component")
    p.add_argument("--lambda", dest="lam", help="comma-separated block weights (default all 1)")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evdmm", description="Max-min dependence coefficients for MEV vectors.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="exact coefficient for a parametric model")
    _add_model_flags(p)
    _add_structure_flags(p)
    _add_format(p)

    p = sub.add_parser("estimate", help="rank-based estimate from a CSV of maxima")
    p.add_argument("--input", required=True)
    p.add_argument("--date-column", help="column to ignore (e.g. the block label)")
    p.add_argument("--plus-one", action="store_true", help="use n+1 in the empirical cdf")
    _add_structure_flags(p)
    _add_format(p)

    p = sub.add_parser("simulate", help="draw MEV samples with unit Frechet margins")
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output CSV path (default: standard output)")

    p = sub.add_parser("validate", help="exact values against Monte Carlo")
    _add_model_flags(p)
    _add_structure_flags(p)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.01, help="tolerance for the coefficient")
    _add_format(p)

    p = sub.add_parser("ingest", help="block maxima of negative log-returns from prices")
    p.add_argument("--input", required=True)
    p.add_argument("--date-column", default="date")
    p.add_argument("--block", default="month", help="month | year | column:<name>")
    p.add_argument("--out", help="output CSV path (default: standard output)")

    p = sub.add_parser("table1", help="estimates from the published stock-index means")
    _add_format(p)
    return parser


def _model_from_args(args):
    if args.model == "m4":
        if not args.alpha_file:
            raise InputError("--model m4 needs --alpha-file")
        model = load_m4_csv(args.alpha_file)
        if args.dim is not None and args.dim != model.dimension:
            raise InputError(f"--dim {args.dim} disagrees with alpha file ({model.dimension})")
        return model
    if args.dim is None:
        raise InputError(f"--model {args.model} needs --dim")
    if args.model == "logistic":
        if args.theta is None:
            raise InputError("--model logistic needs --theta")
        return Logistic(args.theta, args.dim)
    if args.model == "independence":
        return Independence(args.dim)
    return Comonotone(args.dim)


def _structure(args, dimension: int, names=None) -> tuple[Partition, np.ndarray]:
    if args.groups:
        partition = parse_partition(args.groups, names, dimension)
    else:
        partition = Partition.singletons(dimension)
    if args.lam:
        try:
            values = [float(v) for v in args.lam.split(",")]
        except ValueError:
            raise InputError(f"malformed --lambda {args.lam!r}") from None
        lam = check_weights(values, partition.p)
    else:
        lam = check_weights(None, partition.p)
    return partition, lam


def _emit_mapping(out, payload: dict, fmt: str) -> None:
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
        return
    rows = []
    for key, value in payload.items():
        if isinstance(value, dict):
            rows.extend((f"{key}[{k}]", v) for k, v in value.items())
        elif isinstance(value, (int, float)):
            rows.append((key, value))
    write_csv(out, ["quantity", "value"], rows)


def _cmd_eval(args, out) -> int:
    model = _model_from_args(args)
    partition, lam = _structure(args, model.dimension)
    report = max_min_R(model, partition, lam)
    _emit_mapping(out, report.to_dict(), args.format)
    return EXIT_OK


def _cmd_estimate(args, out) -> int:
    drop = [args.date_column] if args.date_column else []
    data = sample_from_csv(args.input, drop=drop)
    names = data.column_names
    if args.groups and not all(ch.isdigit() or ch in ",| " for ch in args.groups):
        # named groups may use a subset of the columns
        wanted = [item.strip() for chunk in args.groups.split("|") for item in chunk.split(",")]
        missing = [w for w in wanted if w not in names]
        if missing:
            raise InputError(f"unknown column name(s): {', '.join(missing)}")
        keep = [j for j, name in enumerate(names) if name in wanted]
        data = SampleMatrix(data.values[:, keep], tuple(names[j] for j in keep))
        names = data.column_names
    partition, lam = _structure(args, data.d, names)
    ranks = rank_transform(data, plus_one=args.plus_one)
    report = estimate_R(ranks, partition, lam)
    _emit_mapping(out, report.to_dict(), args.format)
    return EXIT_OK


def _cmd_simulate(args, out) -> int:
    model = _model_from_args(args)
    x = sample(SimulationSpec(model, args.n, args.seed))
    header = [f"x{j + 1}" for j in range(model.dimension)]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                write_csv(fh, header, x.tolist())
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from None
    else:
        write_csv(out, header, x.tolist())
    return EXIT_OK


def _cmd_validate(args, out) -> int:
    model = _model_from_args(args)
    partition, lam = _structure(args, model.dimension)
    exact = max_min_R(model, partition, lam, with_bounds=False)
    x = sample(SimulationSpec(model, args.n, args.seed))
    # known margins give unbiased Monte Carlo means of every e-term
    u = frechet_cdf(x)
    v = np.stack([u[:, list(b)].max(axis=1) ** lam[j] for j, b in enumerate(partition.blocks)],
                 axis=1)
    e_tol = 4.0 / math.sqrt(args.n)
    rows = [("R_rank_estimate", exact.R, estimate_R(x, partition, lam).R_hat, args.tol),
            ("R_known_margins", exact.R, float(np.mean(v.max(axis=1) - v.min(axis=1))), args.tol)]
    for t, e in sorted(exact.e_terms.items()):
        sel = [j for j in range(partition.p) if t >> j & 1]
        rows.append((f"e[{t}]", e, float(np.mean(v[:, sel].max(axis=1))), e_tol))
    table = [(name, ex, mc, abs(ex - mc), tol, abs(ex - mc) <= tol) for name, ex, mc, tol in rows]
    ok = all(r[-1] for r in table)
    if args.format == "json":
        payload = {
            "model": model.to_dict(),
            "partition": partition.to_list(),
            "lambda": [_g(v) for v in lam],
            "n": args.n,
            "seed": args.seed,
            "rows": [{"quantity": name, "exact": _g(ex), "monte_carlo": _g(mc), "gap": _g(gap),
                      "tolerance": _g(tol), "pass": bool(passed)}
                     for name, ex, mc, gap, tol, passed in table],
            "pass": ok,
        }
        out.write(json.dumps(payload) + "\n")
    else:
        write_csv(out, ["quantity", "exact", "monte_carlo", "gap", "tolerance", "pass"],
                  [(n, ex, mc, gap, tol, str(p).lower()) for n, ex, mc, gap, tol, p in table])
    return EXIT_OK if ok else EXIT_GAP


def _cmd_ingest(args, out) -> int:
    header, body = read_csv(args.input)
    columns = {h: [row[j] for row in body] for j, h in enumerate(header)}
    dates = columns.get(args.date_column)
    labels = block_labels(args.block, dates, columns)[1:]
    skip = {args.date_column}
    if args.block.startswith("column:"):
        skip.add(args.block[len("column:"):])
    price_cols = [h for h in header if h not in skip]
    if not price_cols:
        raise InputError("no price columns")
    maxima = []
    block_ids = None
    for name in price_cols:
        try:
            prices = [float(v) for v in columns[name]]
        except ValueError as exc:
            raise InputError(f"column {name!r}: {exc}") from None
        block_ids, m = block_maxima(neg_log_returns(prices), labels)
        maxima.append(m)
    rows = [[label, *(float(m[k]) for m in maxima)] for k, label in enumerate(block_ids)]
    out_header = ["block", *price_cols]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                write_csv(fh, out_header, rows)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from None
    else:
        write_csv(out, out_header, rows)
    return EXIT_OK


def _cmd_table1(args, out) -> int:
    estimates = table1_estimates()
    if args.format == "json":
        payload = {
            "blocks": list(TABLE1_BLOCKS),
            "m_bar": {str(k): _g(v) for k, v in sorted(TABLE1_M_BAR.items())},
            "estimates": [{"groups": list(names), "R": _g(r),
                           "published": TABLE1_PUBLISHED_R[names]}
                          for names, r in estimates.items()],
        }
        out.write(json.dumps(payload) + "\n")
    else:
        write_csv(out, ["groups", "R", "published"],
                  [("|".join(names), r, str(TABLE1_PUBLISHED_R[names]))
                   for names, r in estimates.items()])
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
    "ingest": _cmd_ingest,
    "table1": _cmd_table1,
}


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, stdout)
    except CapacityError as exc:
        stderr.write(f"evdmm: capacity error: {exc}\n")
        return EXIT_CAPACITY
    except InputError as exc:
        stderr.write(f"evdmm: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
