"""Command-line entry point.

Subcommands::

    transfer-curve  modulator transfer with/without PE (CSV)
    pe-phase        per-arm and differential PE phase, PE index at the bias (JSON)
    generate        synthetic quadrature batch (CSV)
    estimate        naive channel estimate from a batch file (JSON)
    keyrate         key-rate report for the configured channel (JSON)
    sweep           K / K_p / K_e over the configured grid (CSV)
    monitor         variance-monitor verdicts for batch files (JSON lines)
    reproduce       fig1 | fig3 | fig4 bundled recipes

Failures exit nonzero and print one JSON error record on stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import io, keyrate, monitor, mzm, pe_model, scenario
from .channel import distance_from_transmittance, generate
from .errors import DomainError
from .estimation import estimate_naive

COMMANDS = ("transfer-curve", "pe-phase", "generate", "estimate", "keyrate", "sweep",
            "monitor", "reproduce")
FIGURES = ("fig1", "fig3", "fig4")

TRANSFER_COLUMNS = ["v_dc", "i_out_nominal", "i_out_pe", "k"]
SWEEP_COLUMNS = ["T", "k", "eps", "K_nominal", "K_practical", "K_estimated", "gap", "status"]

EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_IO = 4


class UnknownSubcommand(Exception):
    code = "unknown_subcommand"


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--out", metavar="PATH", help="output file (directory for reproduce); default stdout")
    common.add_argument("--format", choices=("csv", "json"), help="output format where both apply")

    p = argparse.ArgumentParser(prog="pecvqkd", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    sub.add_parser("transfer-curve", parents=[common], help="modulator transfer curve")
    sub.add_parser("pe-phase", parents=[common], help="PE phase deviation")
    g = sub.add_parser("generate", parents=[common], help="generate a quadrature batch")
    g.add_argument("--k", type=float, help="PE index applied to Alice's output")
    g.add_argument("-n", type=int, help="number of samples")
    e = sub.add_parser("estimate", parents=[common], help="estimate (T, eps) from a batch")
    e.add_argument("batch", help="batch CSV written by 'generate'")
    sub.add_parser("keyrate", parents=[common], help="secret key rate report")
    s = sub.add_parser("sweep", parents=[common], help="scenario sweep")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--clamp", action="store_true", help="clamp negative rates to 0 in the output")
    m = sub.add_parser("monitor", parents=[common], help="monitor verdicts")
    m.add_argument("batches", nargs="+", help="batch CSV files")
    m.add_argument("--monitored-variance", type=float,
                   help="tap reading of Alice's output variance; default: per-window tap from the batch")
    r = sub.add_parser("reproduce", parents=[common], help="run a bundled figure recipe")
    r.add_argument("figure", choices=FIGURES)
    return p


def _error(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message}, sort_keys=True) + "\n")
    return status


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is None or first not in COMMANDS:
        if any(a in ("-h", "--help") for a in argv):
            _parser().print_help()
            return 0
        return _error(UnknownSubcommand.code,
                      f"expected one of {', '.join(COMMANDS)}, got {first!r}", EXIT_USAGE)
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[args.command](args)
    except cfgmod.ConfigParse as exc:
        return _error(exc.code, str(exc), EXIT_CONFIG)
    except DomainError as exc:
        return _error(exc.code, str(exc), EXIT_DOMAIN)
    except (OSError, ValueError) as exc:
        return _error("io_error", str(exc), EXIT_IO)


def main() -> None:
    sys.exit(run())


# --- handlers ---------------------------------------------------------------


def _load(args) -> cfgmod.RunConfig:
    return cfgmod.load(args.config, args.seed)


def _out(args, cfg):
    return args.out if args.out is not None else cfg.output_path


def _transfer_rows(cfg, dphi_p):
    t = cfg.raw.get("transfer") or {}
    grid = np.linspace(float(t.get("v_min", -cfg.modulator.V_pi)),
                       float(t.get("v_max", 2 * cfg.modulator.V_pi)),
                       int(t.get("points", 301)))
    return mzm.transfer_curve(cfg.modulator, dphi_p, grid, float(t.get("i_in", 1.0)))


def _configured_dphi(cfg) -> float:
    t = cfg.raw.get("transfer") or {}
    if t.get("dphi_p") is not None:
        return float(t["dphi_p"])
    return pe_model.differential_phase(cfg.material, *cfg.arms)


def cmd_transfer_curve(args) -> int:
    cfg = _load(args)
    dphi = _configured_dphi(cfg)
    rows = _transfer_rows(cfg, dphi)
    meta = io.metadata("transfer-curve", cfg.raw, dphi_p=dphi)
    if args.format == "json":
        text = io.dumps({"meta": meta, "rows": [dict(zip(TRANSFER_COLUMNS, r)) for r in rows]})
    else:
        text = io.csv_text(TRANSFER_COLUMNS, rows, meta)
    io.write_text(_out(args, cfg), text)
    return 0


def cmd_pe_phase(args) -> int:
    cfg = _load(args)
    m, (a1, a2) = cfg.material, cfg.arms
    a2_field = pe_model.ArmState(a2.I_ir, -a2.V_app)
    dphi = pe_model.differential_phase(m, a1, a2)
    result = {
        "arm1": {"I_ir": a1.I_ir, "E_s": pe_model.saturated_field(m, a1),
                 "dphi_d": pe_model.arm_phase_deviation(m, a1)},
        "arm2": {"I_ir": a2.I_ir, "E_s": pe_model.saturated_field(m, a2_field),
                 "dphi_d": pe_model.arm_phase_deviation(m, a2_field)},
        "dphi_p": dphi,
        "dphi_p_grouped": pe_model.differential_phase_grouped(m, a1, a2),
    }
    v_dc = (cfg.raw.get("transfer") or {}).get("v_dc")
    if v_dc is not None:
        result["k"] = mzm.pe_index(cfg.modulator, mzm.TransferPoint(V_DC=float(v_dc), dphi_p=dphi))
    io.write_text(_out(args, cfg), io.dumps({"meta": io.metadata("pe-phase", cfg.raw), **result}))
    return 0


def cmd_generate(args) -> int:
    cfg = _load(args)
    gen = cfg.raw.get("generate") or {}
    k = args.k if args.k is not None else float(gen.get("k", 1.0))
    n = args.n if args.n is not None else int(gen.get("n", 100_000))
    batch = generate(cfg.channel, k, n, cfg.seed)
    io.write_text(_out(args, cfg), io.batch_csv(batch, io.metadata("generate", cfg.raw)))
    return 0


def cmd_estimate(args) -> int:
    cfg = _load(args)
    batch = io.read_batch(args.batch)
    est = estimate_naive(batch, cfg.channel)
    payload = {"meta": io.metadata("estimate", cfg.raw, source=str(args.batch)), **est.to_dict()}
    io.write_text(_out(args, cfg), io.dumps(payload))
    return 0


def cmd_keyrate(args) -> int:
    cfg = _load(args)
    report = keyrate.secret_key_rate(cfg.channel)
    meta = io.metadata("keyrate", cfg.raw,
                       distance_km=float(distance_from_transmittance(cfg.channel.T, cfg.db_per_km)))
    io.write_text(_out(args, cfg), io.dumps({"meta": meta, **report.to_dict()}))
    return 0


def _sweep_rows(rows, clamp=False):
    def c(x):
        return max(x, 0.0) if clamp and not math.isnan(x) else x
    return [(r.T, r.k, r.eps, c(r.K_nominal), c(r.K_practical), c(r.K_estimated), r.gap, r.status)
            for r in rows]


def _convention_meta(rows, base):
    params = []
    for r in rows:
        for leg in (base.with_(T=r.T, eps=r.eps), base.with_(T=r.T, eps=r.eps, V_A=r.k * base.V_A)):
            params.append(leg)
        if r.k * r.T <= 1:
            params.append(base.with_(T=r.k * r.T, eps=r.eps / r.k))
    try:
        return keyrate.survey_conventions(params)
    except DomainError as exc:
        return {"adopted": keyrate.CONVENTION_SQUARED, "survey_error": exc.code}


def _sweep_text(rows, cfg, command, fmt, clamp=False, **extra):
    meta = io.metadata(command, cfg.raw, eigenvalue_convention=_convention_meta(rows, cfg.channel),
                       clamped=clamp, **extra)
    if fmt == "json":
        return io.dumps({"meta": meta, "rows": [dict(zip(SWEEP_COLUMNS, r)) for r in _sweep_rows(rows, clamp)]})
    return io.csv_text(SWEEP_COLUMNS, _sweep_rows(rows, clamp), meta)


def cmd_sweep(args) -> int:
    cfg = _load(args)
    rows = scenario.sweep(cfg.grid, workers=args.workers)
    io.write_text(_out(args, cfg), _sweep_text(rows, cfg, "sweep", args.format, args.clamp))
    return 0


def cmd_monitor(args) -> int:
    cfg = _load(args)
    lines = []
    index = 0
    for path in args.batches:
        batch = io.read_batch(path)
        if args.monitored_variance is not None:
            verdicts = [monitor.assess_window(cfg.monitor, batch, args.monitored_variance)]
        else:
            verdicts = list(monitor.stream(cfg.monitor, batch))
            if not verdicts:
                monitor.assess_window(cfg.monitor, batch, batch.tap_variance())
        for v in verdicts:
            rec = {**v.to_dict(), "window_index": index, "source": str(path)}
            lines.append(json.dumps(io.jsonable(rec), sort_keys=True))
            index += 1
    io.write_text(_out(args, cfg), "\n".join(lines) + "\n")
    return 0


def cmd_reproduce(args) -> int:
    cfg = cfgmod.load_recipe(args.figure, args.seed)
    out_dir = Path(args.out or ".")
    rep = cfg.raw.get("reproduce") or {}
    written = []
    if args.figure == "fig1":
        for dphi in rep.get("dphi_p_values", [0.0]):
            rows = _transfer_rows(cfg, float(dphi))
            name = f"fig1_dphi_{float(dphi):+.2f}.csv"
            meta = io.metadata("reproduce fig1", cfg.raw, dphi_p=float(dphi))
            io.write_text(out_dir / name, io.csv_text(TRANSFER_COLUMNS, rows, meta))
            written.append(name)
    else:
        rows = scenario.sweep(cfg.grid)
        if rep.get("split_by_k"):
            for k in cfg.grid.k_values:
                sel = [r for r in rows if r.k == k]
                name = f"{args.figure}_k{k:g}.csv"
                io.write_text(out_dir / name, _sweep_text(sel, cfg, f"reproduce {args.figure}", "csv", k=k))
                written.append(name)
        else:
            name = f"{args.figure}.csv"
            io.write_text(out_dir / name, _sweep_text(rows, cfg, f"reproduce {args.figure}", "csv"))
            written.append(name)
    sys.stdout.write(json.dumps({"figure": args.figure, "written": written}) + "\n")
    return 0


HANDLERS = {
    "transfer-curve": cmd_transfer_curve,
    "pe-phase": cmd_pe_phase,
    "generate": cmd_generate,
    "estimate": cmd_estimate,
    "keyrate": cmd_keyrate,
    "sweep": cmd_sweep,
    "monitor": cmd_monitor,
    "reproduce": cmd_reproduce,
}

if __name__ == "__main__":
    main()
