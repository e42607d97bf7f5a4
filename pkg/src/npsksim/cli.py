"""Command-line front end: analytic prediction, experiments, figure sweeps.

Output is CSV plus an adjacent key=value manifest that records the resolved
configuration, tool version, seed and timestamp, so every table can be
regenerated bit-exactly. Files are written to a temporary name and renamed,
so a failed run never leaves a partial table behind.
"""

import argparse
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .analytics import ber_floor_with_eepn, log10_ber_floor, log10_ser_floor
from .montecarlo import ExperimentConfig, run_experiment, sweep
from .noisemodels import LinkParams, eepn_variance, intrinsic_variance, total_variance

__all__ = ["main", "build_parser", "figure_preset", "SWEEP_CSV_HEADER"]

SWEEP_CSV_HEADER = (
    "axis_value,n,sigma_sq_total,analytic_ber_floor,analytic_log10_ber_floor,"
    "measured_ber,ci_lo,ci_hi,measured_flag"
)

SIMULATE_CSV_HEADER = (
    "receiver,n,lw_tx_hz,lw_lo_hz,baud,disp_ps_nm_km,length_km,lambda_nm,q,mu,"
    "symbols_per_trial,trials,seed,awgn_variance,training_len,reference,"
    "sigma_sq_total,analytic_ber_floor,ber,ser,ci95_lo,ci95_hi,"
    "bit_errors,symbol_errors,bits_counted,symbols_counted"
)

DEFAULT_ORDERS = "4,8,16,32"


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _fmt_opt(x) -> str:
    return "" if x is None else _fmt(x)


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else -math.inf


def figure_preset(figure: int):
    """Axis, grid, oversampling and pinned link fields for a preset sweep.

    The presets reconstruct the shape of the reference parameter sweeps; the
    exact grids are tool defaults, not published values. The variance sweep
    stops at 1e-1 rad^2: beyond roughly 0.2 rad^2 the erfc saturates and the
    per-bit normalization inverts the ordering of the floors in n.
    """
    if figure == 1:
        return "sigma_sq", np.logspace(-4.0, -1.0, 25), 1, {"length_km": 0.0}
    if figure == 2:
        return "linewidth", np.logspace(4.0, 8.0, 25), 1, {"length_km": 0.0}
    if figure == 3:
        return "distance", np.linspace(0.0, 5000.0, 21), 2, {"lw_tx": 2e6, "lw_lo": 2e6}
    raise ValueError("figure must be 1, 2 or 3")


def _add_link_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--n", type=int, default=4, help="PSK constellation size (power of two)")
    sp.add_argument("--lw-tx", type=float, default=2e6, help="Tx laser linewidth [Hz]")
    sp.add_argument("--lw-lo", type=float, default=2e6, help="LO laser linewidth [Hz]")
    sp.add_argument("--baud", type=float, default=28e9, help="symbol rate [Baud]")
    sp.add_argument("--disp", type=float, default=16.0, help="dispersion [ps/(nm km)]")
    sp.add_argument("--length-km", type=float, default=0.0, help="fiber length [km]")
    sp.add_argument("--lambda-nm", type=float, default=1550.0, help="carrier wavelength [nm]")
    sp.add_argument("--config", type=str, default=None,
                    help="key=value file mirroring the flags; flags override it")


def _add_experiment_flags(sp: argparse.ArgumentParser, symbols_default: int) -> None:
    sp.add_argument("--receiver", choices=("lms", "differential"), default="lms")
    sp.add_argument("--mu", type=float, default=1.0, help="LMS step size in (0, 2)")
    sp.add_argument("--symbols", type=int, default=symbols_default,
                    help="symbols per trial (>= 1000)")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, default=1234)
    sp.add_argument("--q", type=int, default=None,
                    help="samples per symbol (default: 1 without fiber, else 2)")
    sp.add_argument("--training", type=int, default=64,
                    help="leading symbols excluded from error counts")
    sp.add_argument("--awgn-variance", type=float, default=0.0,
                    help="additive noise variance per dimension (0 = floor regime)")
    sp.add_argument("--reference", choices=("data-aided", "decision-directed"),
                    default="data-aided",
                    help="LMS tap reference after the training preamble")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="npsksim",
        description="Coherent n-PSK phase-noise floors: closed forms and Monte Carlo",
    )
    parser.add_argument("--version", action="version", version=f"npsksim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_predict = sub.add_parser("predict", help="print closed-form variances and floors")
    _add_link_flags(p_predict)
    p_predict.set_defaults(func=cmd_predict)

    p_sim = sub.add_parser("simulate", help="run one error-counting experiment")
    _add_link_flags(p_sim)
    _add_experiment_flags(p_sim, symbols_default=100_000)
    p_sim.add_argument("--out", type=str, default=None, help="CSV to append the result row to")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="analytic + measured floors over a grid")
    _add_link_flags(p_sweep)
    _add_experiment_flags(p_sweep, symbols_default=10_000)
    p_sweep.add_argument("--figure", type=int, choices=(1, 2, 3), default=None,
                         help="preset axis/grid reconstruction")
    p_sweep.add_argument("--axis", choices=("sigma-sq", "linewidth", "distance"),
                         default=None, help="custom sweep axis")
    p_sweep.add_argument("--start", type=float, default=None)
    p_sweep.add_argument("--stop", type=float, default=None)
    p_sweep.add_argument("--points", type=int, default=21)
    p_sweep.add_argument("--spacing", choices=("log", "linear"), default="log")
    p_sweep.add_argument("--orders", type=str, default=DEFAULT_ORDERS,
                         help="comma-separated constellation sizes")
    p_sweep.add_argument("--threshold", type=float, default=1e-5,
                         help="smallest analytic floor worth simulating")
    p_sweep.add_argument("--out", type=str, required=True, help="output CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser, {"predict": p_predict, "simulate": p_sim, "sweep": p_sweep}


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(argv, subparsers) -> None:
    """Load --config (if present) into the active subcommand's defaults."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return
    command = argv[0] if argv and not argv[0].startswith("-") else None
    sp = subparsers.get(command)
    if sp is None:
        return
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, raw in _load_config_file(path).items():
        action = actions.get(key)
        if action is None:
            raise ValueError(f"unknown config key {key!r} for command {command!r}")
        defaults[key] = action.type(raw) if action.type else raw
    sp.set_defaults(**defaults)


def _write_text_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_manifest(path: str, entries: dict) -> None:
    lines = [f"{k}={v}" for k, v in entries.items()]
    _write_text_atomic(path, "\n".join(lines) + "\n")


def _manifest_base(args, command: str) -> dict:
    entries = {
        "tool": "npsksim",
        "version": __version__,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    skip = {"func", "command", "config"}
    for key, value in sorted(vars(args).items()):
        if key not in skip and value is not None:
            entries[key] = value
    return entries


def _resolve_q(args, link: LinkParams) -> int:
    if args.q is not None:
        return args.q
    return 1 if (link.length == 0 or link.disp == 0) else 2


def _link_from_args(args) -> LinkParams:
    return LinkParams.from_engineering(
        order=args.n,
        lw_tx=args.lw_tx,
        lw_lo=args.lw_lo,
        baud=args.baud,
        disp_ps_nm_km=args.disp,
        length_km=args.length_km,
        lambda_nm=args.lambda_nm,
    )


def cmd_predict(args) -> int:
    link = _link_from_args(args)
    v_int = intrinsic_variance(link)
    v_eepn = eepn_variance(link)
    v_tot = total_variance(link)
    pred = ber_floor_with_eepn(link)
    rows = [
        ("sigma_sq_intrinsic_rad2", v_int, _log10(v_int)),
        ("sigma_sq_eepn_rad2", v_eepn, _log10(v_eepn)),
        ("sigma_sq_total_rad2", v_tot, _log10(v_tot)),
        ("ser_floor", pred.ser, log10_ser_floor(v_tot, link.order)),
        ("ber_floor", pred.ber_floor, log10_ber_floor(v_tot, link.order)),
    ]
    for name, value, lg in rows:
        print(f"{name} = {_fmt(value)} (log10 = {_fmt(lg)})")
    return 0


def _experiment_config(args, link: LinkParams) -> ExperimentConfig:
    return ExperimentConfig(
        link=link,
        receiver=args.receiver,
        mu=args.mu,
        q=_resolve_q(args, link),
        symbols_per_trial=args.symbols,
        trials=args.trials,
        awgn_variance=args.awgn_variance,
        base_seed=args.seed,
        training_len=args.training,
        data_aided=args.reference == "data-aided",
    )


def cmd_simulate(args) -> int:
    link = _link_from_args(args)
    cfg = _experiment_config(args, link)
    est = run_experiment(cfg)
    pred = ber_floor_with_eepn(link)
    print(f"receiver = {cfg.receiver} (mu = {_fmt(cfg.mu)}, q = {cfg.q})")
    print(f"sigma_sq_total_rad2 = {_fmt(pred.sigma_sq)}")
    print(f"analytic_ber_floor = {_fmt(pred.ber_floor)}")
    print(f"ber = {_fmt(est.ber)} (95% CI [{_fmt(est.ci95_lo)}, {_fmt(est.ci95_hi)}])")
    print(f"ser = {_fmt(est.ser)}")
    print(
        f"counts: {est.bit_errors} bit errors / {est.bits_counted} bits, "
        f"{est.symbol_errors} symbol errors / {est.symbols_counted} symbols"
    )
    if args.out:
        row = ",".join(
            [
                cfg.receiver,
                str(link.order),
                _fmt(link.lw_tx),
                _fmt(link.lw_lo),
                _fmt(link.symbol_rate),
                _fmt(args.disp),
                _fmt(args.length_km),
                _fmt(args.lambda_nm),
                str(cfg.q),
                _fmt(cfg.mu),
                str(cfg.symbols_per_trial),
                str(cfg.trials),
                str(cfg.base_seed),
                _fmt(cfg.awgn_variance),
                str(cfg.training_len),
                args.reference,
                _fmt(pred.sigma_sq),
                _fmt(pred.ber_floor),
                _fmt(est.ber),
                _fmt(est.ser),
                _fmt(est.ci95_lo),
                _fmt(est.ci95_hi),
                str(est.bit_errors),
                str(est.symbol_errors),
                str(est.bits_counted),
                str(est.symbols_counted),
            ]
        )
        if os.path.exists(args.out):
            with open(args.out) as fh:
                existing = fh.read().splitlines()
            if not existing or existing[0] != SIMULATE_CSV_HEADER:
                raise ValueError(f"{args.out} exists with an unexpected header")
            lines = existing + [row]
        else:
            lines = [SIMULATE_CSV_HEADER, row]
        _write_text_atomic(args.out, "\n".join(lines) + "\n")
        _write_manifest(args.out + ".manifest", {**_manifest_base(args, "simulate"),
                                                 "out": args.out})
    return 0


def _sweep_rows_to_csv(rows) -> str:
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.axis_value),
                    str(r.order),
                    _fmt(r.sigma_sq_total),
                    _fmt(r.analytic_ber_floor),
                    _fmt(r.analytic_log10_ber_floor),
                    _fmt_opt(r.measured_ber),
                    _fmt_opt(r.ci_lo),
                    _fmt_opt(r.ci_hi),
                    "1" if r.measured else "0",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    if (args.figure is None) == (args.axis is None):
        raise ValueError("choose exactly one of --figure or --axis")
    if args.figure is not None:
        axis, grid, preset_q, overrides = figure_preset(args.figure)
        for key, value in overrides.items():
            setattr(args, key, value)
        if args.q is None:
            args.q = preset_q
    else:
        axis = args.axis.replace("-", "_")
        if args.start is None or args.stop is None:
            raise ValueError("custom sweeps need --start and --stop")
        if args.points < 1:
            raise ValueError("points must be >= 1")
        if args.spacing == "log":
            if args.start <= 0 or args.stop <= 0:
                raise ValueError("log spacing needs positive --start/--stop")
            grid = np.logspace(math.log10(args.start), math.log10(args.stop), args.points)
        else:
            grid = np.linspace(args.start, args.stop, args.points)

    orders = [int(tok) for tok in args.orders.split(",") if tok.strip()]
    if not orders:
        raise ValueError("orders must name at least one constellation size")

    link = _link_from_args(args)
    cfg = _experiment_config(args, link)
    rows = sweep(cfg, axis, grid, orders, measurable_floor=args.threshold)
    _write_text_atomic(args.out, _sweep_rows_to_csv(rows))
    _write_manifest(
        args.out + ".manifest",
        {**_manifest_base(args, "sweep"), "axis": axis, "orders": ",".join(map(str, orders)),
         "grid_points": len(grid), "out": args.out},
    )
    measured = sum(1 for r in rows if r.measured)
    print(f"wrote {len(rows)} rows ({measured} measured) to {args.out}")
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        _apply_config(argv, subparsers)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
