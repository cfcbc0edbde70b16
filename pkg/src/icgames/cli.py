"""Command line interface.

Subcommands
-----------
rac             evaluate a strategy on the random-access game
inner-product   evaluate a box on the inner-product game
bounds          run the quadratic bound checks on a bias vector
entropy-suite   property-test the entropy inequalities on random joints
oracle          exhaustively scan deterministic classical strategies
tsirelson-demo  squared-bias growth of the nested protocol vs the bound

Output formats: ``table`` (human readable, 6 decimal places), ``json``
(full precision, sorted keys, byte-identical for identical configs) and
``csv``.  ``--plot-dir DIR`` additionally renders the report's figures as
PNG files.  Exit codes: 0 on success, 2 when ``--expect-holds`` is set and a
checked bound is violated, 64 on usage errors, 65 when an exact enumeration
would exceed the size cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import analysis, games, gram, strategies
from .boxes import isotropic_box
from .distributions import (
    apply_channel,
    discard_slack,
    entropy_inequality_suite,
    mutual_information_chain_gap,
    random_channel,
    random_joint,
)
from .errors import GameToolError, ResourceLimitError, SpecFormatError

EXIT_OK = 0
EXIT_BOUND_VIOLATED = 2
EXIT_USAGE = 64
EXIT_RESOURCE = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise SpecFormatError(message)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _emit_csv(rows) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    sys.stdout.write(buffer.getvalue())


def _emit_table(lines) -> None:
    for line in lines:
        sys.stdout.write(line + "\n")


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path} is not valid JSON: {exc}") from exc


def _load_probs(path: str) -> np.ndarray:
    data = _load_json_file(path)
    if isinstance(data, dict):
        data = data.get("probabilities", data.get("table"))
    if not isinstance(data, list):
        raise SpecFormatError(
            f"{path} must hold a JSON list of probabilities "
            "(or an object with a 'probabilities' or 'table' list)")
    return np.asarray(data, dtype=float)


def _load_biases(path: str) -> list[float]:
    data = _load_json_file(path)
    if isinstance(data, dict):
        data = data.get("biases")
    if not isinstance(data, list):
        raise SpecFormatError(
            f"{path} must hold a JSON list of biases (or an object with 'biases')")
    return [float(v) for v in data]


def _config_dict(args: argparse.Namespace) -> dict:
    keys = ("command", "n", "m", "strategy", "bias", "levels", "trials",
            "fmt", "seed", "cap", "dist", "biases", "saturator",
            "weight_one", "expect_holds", "plot_dir")
    out = {}
    for key in keys:
        if hasattr(args, key):
            out[key] = getattr(args, key)
    return out


# -- rac -----------------------------------------------------------------


def cmd_rac(args: argparse.Namespace) -> int:
    input_probs = _load_probs(args.dist) if args.dist else None
    game = games.RacGame(args.n, args.m, input_probs=input_probs)
    strategy = strategies.parse_strategy(args.strategy, args.n, args.m)
    report = games.evaluate_rac(game, strategy, n_cap=args.cap)
    verdict = analysis.ic_verdict(report)
    chain = analysis.entropic_chain(report)

    if args.fmt == "json":
        _emit_json({
            "config": _config_dict(args),
            "report": report.to_json_dict(),
            "verdict": verdict.to_json_dict(),
            "chain": chain.to_json_dict(),
        })
    elif args.fmt == "csv":
        _emit_csv(report.csv_rows())
    else:
        lines = [
            f"game rac n={report.n} m={report.m} strategy={report.strategy_label}",
            f"success_probability {_fmt(report.success_probability)}",
        ]
        for k, e, i in zip(report.biases.labels, report.biases.values,
                           report.per_target_information):
            lines.append(f"k={k} E={_fmt(e)} I={_fmt(i)} bits")
        lines.append(f"I_bits {_fmt(report.information_bits)}")
        lines.append(
            f"verdict {verdict.kind} I={_fmt(verdict.i_value)} "
            f"bound={_fmt(verdict.bound)} {verdict.satisfied}")
        for name, slack in chain.chain_slacks:
            lines.append(f"chain_slack {name} {_fmt(slack)}")
        _emit_table(lines)

    if args.plot_dir:
        from . import figures
        figures.save_figure(
            figures.bias_figure(report.biases.labels, report.biases.values,
                                f"per-target bias, {report.strategy_label}"),
            args.plot_dir, "rac_biases.png")
        figures.save_figure(
            figures.information_figure(report.information_bits, float(report.m),
                                       report.per_target_information),
            args.plot_dir, "rac_information.png")

    if args.expect_holds and verdict.satisfied == "violated":
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


# -- inner-product ---------------------------------------------------------


def _build_inner_product_box(args: argparse.Namespace):
    sources = [s for s in (args.bias is not None, args.biases is not None,
                           args.saturator is not None) if s]
    if len(sources) != 1:
        raise SpecFormatError(
            "choose exactly one box source: --bias, --biases or --saturator")
    if args.bias is not None:
        if args.n != 1:
            raise SpecFormatError("--bias builds a binary-input box; it needs --n 1")
        return isotropic_box(args.bias), f"isotropic:{args.bias:g}"
    if args.biases is not None:
        targets = _load_biases(args.biases)
        system = gram.gram_construct(targets, args.n)
        return gram.gram_to_box(system), "gram"
    return (games.classical_saturator_box(args.n, args.saturator),
            f"saturator:{args.saturator}")


def cmd_inner_product(args: argparse.Namespace) -> int:
    box, box_label = _build_inner_product_box(args)
    x_probs = _load_probs(args.dist) if args.dist else None
    game = games.InnerProductGame(args.n, x_probs=x_probs)
    if args.weight_one:
        game = games.restrict_to_hamming_weight_one(game)
    report = games.evaluate_inner_product(game, box, n_cap=args.cap)
    checks = [
        gram.vector_quadratic_bound(report.biases.values),
        gram.generalized_quadratic_bound(report.biases.values, game.x_probs),
    ]

    if args.fmt == "json":
        _emit_json({
            "config": _config_dict(args),
            "box": box_label,
            "report": report.to_json_dict(),
            "bounds": [c.to_json_dict() for c in checks],
        })
    elif args.fmt == "csv":
        _emit_csv(report.csv_rows())
    else:
        lines = [
            f"game inner-product n={report.n} box={box_label}",
            f"success_probability {_fmt(report.success_probability)}",
        ]
        for y, e in zip(report.biases.labels, report.biases.values):
            lines.append(f"y={y} E={_fmt(e)}")
        lines.append(f"sum_sq_bias {_fmt(report.biases.sum_of_squares())}")
        for check in checks:
            lines.append(
                f"bound {check.kind} lhs={_fmt(check.lhs)} "
                f"rhs={_fmt(check.rhs)} {check.status}")
        _emit_table(lines)

    if args.plot_dir:
        from . import figures
        figures.save_figure(
            figures.bias_figure(report.biases.labels, report.biases.values,
                                f"per-input bias, {box_label} box"),
            args.plot_dir, "inner_product_biases.png")

    if args.expect_holds and any(c.status == "violated" for c in checks):
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


# -- bounds ------------------------------------------------------------------


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.biases is not None and args.strategy is not None:
        raise SpecFormatError("bounds takes --biases FILE or --strategy SPEC, not both")
    if args.biases is not None:
        biases = _load_biases(args.biases)
        if args.dist:
            input_probs = _load_probs(args.dist)
        else:
            size = 1 << len(biases)
            input_probs = np.full(size, 1.0 / size)
        source = f"file:{args.biases}"
    elif args.strategy is not None:
        if args.n is None:
            raise SpecFormatError("--strategy needs --n")
        input_probs = _load_probs(args.dist) if args.dist else None
        game = games.RacGame(args.n, args.m, input_probs=input_probs)
        strategy = strategies.parse_strategy(args.strategy, args.n, args.m)
        report = games.evaluate_rac(game, strategy, n_cap=args.cap)
        biases = list(report.biases.values)
        input_probs = game.input_probs
        source = f"strategy:{args.strategy}"
    else:
        raise SpecFormatError("bounds needs --biases FILE or --strategy SPEC")

    checks = [
        gram.information_quadratic_bound(biases, args.m),
        gram.vector_quadratic_bound(biases),
        gram.generalized_quadratic_bound(biases, input_probs),
    ]

    if args.fmt == "json":
        _emit_json({
            "config": _config_dict(args),
            "source": source,
            "biases": [float(v) for v in biases],
            "bounds": [c.to_json_dict() for c in checks],
        })
    elif args.fmt == "csv":
        rows = [["kind", "lhs", "rhs", "status"]]
        rows += [[c.kind, c.lhs, c.rhs, c.status] for c in checks]
        _emit_csv(rows)
    else:
        lines = [f"biases from {source}: " + " ".join(_fmt(v) for v in biases)]
        for check in checks:
            lines.append(
                f"bound {check.kind} lhs={_fmt(check.lhs)} "
                f"rhs={_fmt(check.rhs)} {check.status}")
        _emit_table(lines)

    if args.plot_dir:
        from . import figures
        figures.save_figure(figures.bound_figure(checks),
                            args.plot_dir, "bounds_checks.png")

    if args.expect_holds and any(c.status == "violated" for c in checks):
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


# -- entropy-suite -------------------------------------------------------------


def cmd_entropy_suite(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    slack_names = ("subadditivity", "strong_subadditivity",
                   "iterated_conditional_subadditivity",
                   "conditional_entropy_positivity")
    slacks: dict[str, list[float]] = {name: [] for name in slack_names}
    slacks["channel_discard"] = []
    identity_gaps = []
    for _ in range(args.trials):
        dist = random_joint(rng, (2, 2, 2, 2))
        # X is a two-variable block so that no suite line is an identity
        for entry in entropy_inequality_suite(dist, ("v0", "v1"), ("v2",), ("v3",)):
            slacks[entry.name].append(entry.value)
        identity_gaps.append(
            abs(mutual_information_chain_gap(dist, ("v0",), ("v1",), ("v2",))))
        out_card = int(rng.integers(2, 4))
        channel = random_channel(rng, out_card, 2)
        pushed = apply_channel(dist, "v1", channel)
        slacks["channel_discard"].append(
            discard_slack(dist, pushed, ("v1",), ("v0", "v2", "v3")))

    summary = {
        name: {"min": float(np.min(values)), "mean": float(np.mean(values))}
        for name, values in slacks.items()
    }
    max_gap = float(np.max(identity_gaps))
    healthy = all(v["min"] >= -1e-9 for v in summary.values()) and max_gap <= 1e-9

    if args.fmt == "json":
        _emit_json({
            "config": _config_dict(args),
            "slacks": summary,
            "chain_identity_max_gap": max_gap,
            "all_hold": healthy,
        })
    elif args.fmt == "csv":
        rows = [["inequality", "min_slack", "mean_slack"]]
        rows += [[name, summary[name]["min"], summary[name]["mean"]]
                 for name in summary]
        rows.append(["chain_identity_max_gap", max_gap, max_gap])
        _emit_csv(rows)
    else:
        lines = [f"trials {args.trials} seed {args.seed}"]
        for name, stats in summary.items():
            lines.append(
                f"{name} min_slack={stats['min']:.3e} mean={_fmt(stats['mean'])}")
        lines.append(f"chain_identity max_abs_gap={max_gap:.3e}")
        lines.append(f"all_hold {healthy}")
        _emit_table(lines)

    if args.plot_dir:
        from . import figures
        figures.save_figure(figures.slack_histogram_figure(slacks),
                            args.plot_dir, "entropy_suite_slacks.png")

    if args.expect_holds and not healthy:
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


# -- oracle --------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    summary = strategies.classical_oracle(args.n, args.m)
    formula = strategies.classical_success_formula(args.n)
    data = summary.to_json_dict()
    data["formula_success"] = formula
    data["matches_formula"] = bool(abs(summary.max_success - formula) < 1e-12)
    data["information_within_message_bound"] = bool(
        summary.max_information <= args.m + 1e-9)

    if args.fmt == "json":
        _emit_json({"config": _config_dict(args), "oracle": data})
    elif args.fmt == "csv":
        rows = [["field", "value"]]
        rows += [[key, data[key]] for key in sorted(data)]
        _emit_csv(rows)
    else:
        lines = [f"oracle n={args.n} m={args.m} strategies={summary.count}"]
        lines.append(
            f"max_success {_fmt(summary.max_success)} "
            f"(formula {_fmt(formula)}) by {summary.best_success_label}")
        lines.append(
            f"max_I {_fmt(summary.max_information)} bits "
            f"by {summary.best_information_label}")
        lines.append(f"max_sum_sq_bias {_fmt(summary.max_sum_sq_bias)}")
        lines.append(f"min_endpoint_slack {summary.min_endpoint_slack:.3e}")
        _emit_table(lines)

    if args.expect_holds and summary.max_information > args.m + 1e-9:
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


# -- tsirelson-demo --------------------------------------------------------------


def cmd_tsirelson_demo(args: argparse.Namespace) -> int:
    rows = analysis.pyramid_growth_table(args.bias, args.levels)
    crossover = analysis.crossover_levels(args.bias)

    if args.fmt == "json":
        _emit_json({
            "config": _config_dict(args),
            "rows": rows,
            "crossover_levels": crossover,
        })
    elif args.fmt == "csv":
        out = [["levels", "n", "per_target_bias", "sum_sq_bias",
                "threshold", "exceeds"]]
        out += [[r["levels"], r["n"], r["per_target_bias"], r["sum_sq_bias"],
                 r["threshold"], r["exceeds"]] for r in rows]
        _emit_csv(out)
    else:
        lines = [f"bias {args.bias:g}: squared-bias total (2 E^2)^L vs 2 ln 2 = "
                 f"{_fmt(2 * math.log(2))}"]
        for r in rows:
            marker = "EXCEEDS" if r["exceeds"] else "below"
            lines.append(
                f"L={r['levels']} n={r['n']} per_target_bias="
                f"{_fmt(r['per_target_bias'])} sum_sq={_fmt(r['sum_sq_bias'])} "
                f"{marker}")
        lines.append(f"crossover_levels {crossover}")
        _emit_table(lines)

    if args.plot_dir:
        from . import figures
        figures.save_figure(figures.growth_figure(rows, args.bias),
                            args.plot_dir, "tsirelson_growth.png")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icgames", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", dest="fmt", choices=("table", "json", "csv"),
                       default="table", help="output format (default table)")
        p.add_argument("--cap", type=int, default=games.DEFAULT_N_CAP,
                       help="largest n the exact enumerations accept")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized subcommands")
        p.add_argument("--expect-holds", action="store_true",
                       help="exit 2 when a checked bound is violated")
        p.add_argument("--plot-dir", default=None,
                       help="also render report figures as PNGs into this directory")

    p_rac = sub.add_parser("rac", help="evaluate a strategy on the access game")
    p_rac.add_argument("--n", type=int, required=True)
    p_rac.add_argument("--m", type=int, default=1)
    p_rac.add_argument("--strategy", required=True,
                       help="send-first:m | send-bit:i | majority | chsh:E "
                            "| pyramid:E:L | mix:spec,w;spec,w")
    p_rac.add_argument("--dist", default=None,
                       help="JSON file with Alice's input distribution")
    common(p_rac)
    p_rac.set_defaults(func=cmd_rac)

    p_ip = sub.add_parser("inner-product", help="evaluate a box on the inner-product game")
    p_ip.add_argument("--n", type=int, required=True)
    p_ip.add_argument("--bias", type=float, default=None,
                      help="isotropic box bias (binary inputs, n = 1)")
    p_ip.add_argument("--biases", default=None,
                      help="JSON file with target biases; realized by vectors")
    p_ip.add_argument("--saturator", type=int, default=None,
                      help="classical box a = alpha.x with this alpha")
    p_ip.add_argument("--weight-one", action="store_true",
                      help="restrict Bob's input to weight-1 strings")
    p_ip.add_argument("--dist", default=None,
                      help="JSON file with Alice's input distribution")
    common(p_ip)
    p_ip.set_defaults(func=cmd_inner_product)

    p_bounds = sub.add_parser("bounds", help="quadratic bound checks on a bias vector")
    p_bounds.add_argument("--biases", default=None,
                          help="JSON file with the bias vector")
    p_bounds.add_argument("--strategy", default=None,
                          help="derive biases by evaluating this strategy")
    p_bounds.add_argument("--n", type=int, default=None)
    p_bounds.add_argument("--m", type=int, default=1)
    p_bounds.add_argument("--dist", default=None,
                          help="JSON file with Alice's input distribution")
    common(p_bounds)
    p_bounds.set_defaults(func=cmd_bounds)

    p_suite = sub.add_parser("entropy-suite",
                             help="random-joint property suite for the entropy inequalities")
    p_suite.add_argument("--trials", type=int, default=1000)
    common(p_suite)
    p_suite.set_defaults(func=cmd_entropy_suite)

    p_oracle = sub.add_parser("oracle", help="exhaustive deterministic-strategy scan")
    p_oracle.add_argument("--n", type=int, required=True)
    p_oracle.add_argument("--m", type=int, default=1)
    common(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_demo = sub.add_parser("tsirelson-demo",
                            help="squared-bias growth of the nested protocol")
    p_demo.add_argument("--bias", type=float, default=0.75,
                        help="per-box bias E (default 0.75)")
    p_demo.add_argument("--levels", type=int, default=6,
                        help="deepest nesting level to tabulate")
    common(p_demo)
    p_demo.set_defaults(func=cmd_tsirelson_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except GameToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
