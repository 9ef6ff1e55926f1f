"""Command-line interface.

Subcommands: ``fit``, ``derive``, ``plan``, ``project``, ``solve``, ``plot``.

Values can also come from a ``--config`` file of ``key = value`` lines
(``#`` starts a comment); keys are long flag names with ``-`` replaced by
``_``. Flags given on the command line win over the file.

Exit status: 0 on success, 1 on input or usage errors, 2 when a target
loss is not above the irreducible floor.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .allocation import derive_compute_law
from .efficiency import EfficiencyState, required_burden, required_compute
from .errors import InfeasibleTargetError, InputError, RangeError, ScalingError
from .fitting import FitConfig, fit_compute_law, fit_separable
from .lawcore import ComputeLawParams, CostModel, SeparableLawParams
from .plot import PlotSpec, emit_plot, sample_curves
from .projection import DynamicsParams, sample_trajectory, time_to_excess
from .runlog import format_number, ingest_runs

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2

_fmt = format_number


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # --E and --e-logical must never be guessed from a prefix
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _rates(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _shared_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("shared options")
    for flag, help_ in [
        ("--E", "irreducible loss floor"),
        ("--K", "compute-law amplitude"),
        ("--kappa", "compute-law exponent"),
        ("--A", "parameter-term coefficient"),
        ("--B", "data-term coefficient"),
        ("--alpha", "parameter exponent"),
        ("--beta-data", "data exponent"),
        ("--cost-const", "C = cost_const * N * D (default 6)"),
        ("--e-logical", "logical FLOPs per joule (initial efficiency for project/solve)"),
        ("--p0", "annual energy budget, joules per year"),
        ("--beta-dbl", "efficiency doublings per year"),
        ("--c0", "initial logical compute (default e_logical * p0)"),
        ("--t-max", "projection horizon in years"),
        ("--target", "target loss (plan) or target relative excess (solve)"),
    ]:
        g.add_argument(flag, type=float, default=None, help=help_)
    g.add_argument("--samples", type=int, default=None, help="number of time samples")
    g.add_argument("--out", default=None, help="output path")
    g.add_argument("--config", default=None, help="key = value config file")
    g.add_argument("--seed", type=int, default=None, help="seed recorded with fit results")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = _Parser(prog="logiscale", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("fit", parents=[shared], help="fit law constants to a run log")
    p.add_argument("runs", help="CSV run log")
    p.add_argument("--form", choices=("separable", "compute"), default=None)
    p.add_argument("--fixed-E", type=float, default=None, dest="fixed_E", help="pin the floor E")
    p.add_argument("--huber-delta", type=float, default=None)

    sub.add_parser("derive", parents=[shared], help="compute-only law from separable constants")

    sub.add_parser("plan", parents=[shared], help="compute and energy needed for a target loss")

    p = sub.add_parser("project", parents=[shared], help="sample the efficiency-doubling trajectory to CSV")
    p.add_argument("--l0", type=float, default=None, help="loss at t=0; adds an l_t column with --E")

    p = sub.add_parser("solve", parents=[shared], help="years until a target relative excess")
    p.add_argument("--l0", type=float, default=None, help="treat --target as an absolute loss, with --E")

    p = sub.add_parser("plot", parents=[shared], help="SVG of relative excess loss curves")
    p.add_argument("--rates", type=_rates, default=None, help="comma-separated doubling rates")
    p.add_argument("--csv", default=None, help="also write the sampled curves to this CSV")
    return parser


def _read_config(path: str) -> dict[str, str]:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip()] = value.strip()
    return values


def _apply_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if not args.config:
        return
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    for key, text in _read_config(args.config).items():
        action = actions.get(key)
        if action is None or key in ("config", "help", "runs"):
            raise InputError(f"{args.config}: unknown key {key!r} for {args.command}")
        if getattr(args, key) is not None:
            continue
        try:
            value = action.type(text) if action.type else text
        except (ValueError, argparse.ArgumentTypeError):
            raise InputError(f"{args.config}: bad value for {key}: {text!r}") from None
        if action.choices and value not in action.choices:
            raise InputError(f"{args.config}: {key} must be one of {sorted(action.choices)}")
        setattr(args, key, value)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise _UsageError(f"logiscale {args.command}: missing required option(s): {flags}")


def _kv(out, key, value):
    if isinstance(value, float):
        value = _fmt(value)
    out.write(f"{key}={value}\n")


def _cost(args) -> CostModel:
    return CostModel(6.0 if args.cost_const is None else args.cost_const)


def _cmd_fit(args, out):
    log = ingest_runs(args.runs)
    form = args.form or "separable"
    cfg = FitConfig(
        huber_delta=1e-3 if args.huber_delta is None else args.huber_delta,
        seed=0 if args.seed is None else args.seed,
        fixed_E=args.fixed_E,
    )
    result = (fit_separable if form == "separable" else fit_compute_law)(log.records, cfg)
    params = vars(result.params)
    _kv(out, "form", form)
    for k, v in params.items():
        _kv(out, k, v)
    if form == "separable":
        _kv(out, "kappa", derive_compute_law(result.params, _cost(args)).kappa)
    _kv(out, "objective", result.objective)
    _kv(out, "converged", str(result.converged).lower())
    _kv(out, "n_restarts_used", result.n_restarts_used)
    _kv(out, "n_records", len(log.records))

    doc = {
        "form": form,
        "params": params,
        "objective": result.objective,
        "residuals": list(result.residuals),
        "converged": result.converged,
        "n_restarts_used": result.n_restarts_used,
        "huber_delta": cfg.huber_delta,
        "fixed_E": cfg.fixed_E,
        "seed": cfg.seed,
        "n_records": len(log.records),
    }
    path = Path(args.out or "fit_result.json")
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8", newline="\n")
    _kv(out, "result_file", str(path))


def _separable(args) -> SeparableLawParams:
    _need(args, "A", "alpha", "B", "beta_data")
    return SeparableLawParams(
        E=0.0 if args.E is None else args.E, A=args.A, alpha=args.alpha, B=args.B, beta_data=args.beta_data
    )


def _cmd_derive(args, out):
    law = derive_compute_law(_separable(args), _cost(args))
    _kv(out, "E", law.E)
    _kv(out, "K", law.K)
    _kv(out, "kappa", law.kappa)


def _compute_law(args) -> ComputeLawParams:
    if args.K is None and args.A is not None:
        return derive_compute_law(_separable(args), _cost(args))
    _need(args, "E", "K", "kappa")
    return ComputeLawParams(E=args.E, K=args.K, kappa=args.kappa)


def _cmd_plan(args, out):
    law = _compute_law(args)
    _need(args, "target")
    if args.e_logical is None:
        c_required = required_compute(law, args.target)
        _kv(out, "l_target", args.target)
        _kv(out, "c_required", c_required)
        return
    report = required_burden(law, args.target, EfficiencyState(args.e_logical))
    _kv(out, "l_target", args.target)
    _kv(out, "c_required", report.c_required)
    _kv(out, "e_logical", args.e_logical)
    _kv(out, "energy_joules", report.energy)


def _dynamics(args) -> DynamicsParams:
    _need(args, "kappa")
    return DynamicsParams(
        e0=1.0 if args.e_logical is None else args.e_logical,
        p0=1.0 if args.p0 is None else args.p0,
        beta_dbl=0.0 if args.beta_dbl is None else args.beta_dbl,
        kappa=args.kappa,
        c0=args.c0,
    )


def _open_out(path):
    if path is None or path == "-":
        return None
    return open(path, "w", encoding="utf-8", newline="\n")


def _cmd_project(args, out):
    dyn = _dynamics(args)
    t_max = 20.0 if args.t_max is None else args.t_max
    samples = 201 if args.samples is None else args.samples
    if samples < 2 or not t_max > 0:
        raise InputError("project needs --samples >= 2 and --t-max > 0")
    times = [t_max * i / (samples - 1) for i in range(samples)]
    law = None
    if args.l0 is not None:
        _need(args, "E")
        # only the floor enters the loss trajectory
        law = ComputeLawParams(E=args.E, K=1.0 if args.K is None else args.K, kappa=dyn.kappa)
    points = sample_trajectory(dyn, times, law=law, l0=args.l0)
    cols = ["t", "c_t", "x_t"] + (["l_t"] if law is not None else [])
    lines = [",".join(cols)]
    for p in points:
        row = [p.t, p.c_t, p.x_t] + ([p.l_t] if law is not None else [])
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    fh = _open_out(args.out)
    if fh is None:
        out.write(text)
    else:
        with fh:
            fh.write(text)


def _cmd_solve(args, out):
    dyn = _dynamics(args)
    _need(args, "target")
    x_target = args.target
    if args.l0 is not None:
        _need(args, "E")
        if args.target <= args.E:
            raise InfeasibleTargetError(args.target, args.E)
        if args.l0 <= args.E:
            raise InfeasibleTargetError(args.l0, args.E)
        x_target = (args.target - args.E) / (args.l0 - args.E)
        _kv(out, "x_target", x_target)
    _kv(out, "t_years", time_to_excess(dyn, x_target))


def _cmd_plot(args, out):
    kwargs = {}
    if args.kappa is not None:
        kwargs["kappa"] = args.kappa
    if args.rates is not None:
        kwargs["rates"] = args.rates
    elif args.beta_dbl is not None:
        kwargs["rates"] = (args.beta_dbl,)
    if args.t_max is not None:
        kwargs["t_max"] = args.t_max
    if args.samples is not None:
        kwargs["samples"] = args.samples
    spec = PlotSpec(**kwargs)
    path = args.out or "excess_loss.svg"
    emit_plot(spec, path)
    _kv(out, "svg", path)
    if args.csv:
        curves = sample_curves(spec)
        lines = ["beta_dbl,t,x_t"]
        for rate, ts, xs in curves:
            lines.extend(f"{_fmt(rate)},{_fmt(t)},{_fmt(x)}" for t, x in zip(ts, xs))
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        _kv(out, "csv", args.csv)


_COMMANDS = {
    "fit": _cmd_fit,
    "derive": _cmd_derive,
    "plan": _cmd_plan,
    "project": _cmd_project,
    "solve": _cmd_solve,
    "plot": _cmd_plot,
}


def run_cli(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Run one command and return its exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return EXIT_OK if not exc.code else EXIT_INPUT
        _apply_config(parser, args)
        _COMMANDS[args.command](args, stdout)
    except _UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_INPUT
    except InfeasibleTargetError as exc:
        stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except (ScalingError, OSError) as exc:
        kind = "range" if isinstance(exc, RangeError) else "error"
        stderr.write(f"{kind}: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
