"""Experiment driver: one subcommand per workflow, deterministic artifacts.

Exit codes: 0 success, 2 configuration error, 3 numerical instability
(the last finite diagnostics row is flushed first), 4 I/O failure.
Output directory resolution: --output-dir flag, else ZKLAB_OUTPUT_DIR,
else the current directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .config import RunConfig, load_config
from .dynamics import evolve
from .errors import (ConfigurationError, DataError, InstabilityError,
                     ResolutionError, UsageError)
from .forms import DispersionForm
from .ic import make_initial
from .imethod import gwp_iteration, increment_scan
from .norms import NormReport, besov_norm_2_1, lebesgue_norm, sobolev_norm
from .picard import picard_horizon, picard_iterate
from . import probes
from .reporting import (DiagnosticsRecorder, build_manifest, read_frame_csv,
                        write_csv, write_frame_csv, write_json)
from .spectral import Grid2D

__all__ = ["main"]


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zklab",
        description="Pseudospectral lab for the 2D Zakharov-Kuznetsov equation")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="flat-key JSON config file")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--seed", type=int)
        p.add_argument("--nx", type=int)
        p.add_argument("--ny", type=int)
        p.add_argument("--lx", type=float)
        p.add_argument("--ly", type=float)
        p.add_argument("--form", choices=["original", "symmetrized"])
        p.add_argument("--preset")
        p.add_argument("--amplitude", type=float)
        p.add_argument("--sigma", type=float)
        p.add_argument("--kmax", type=float)
        p.add_argument("--envelope", type=float)
        p.add_argument("--norm")
        p.add_argument("--norm-s", dest="norm_s", type=float)

    p = sub.add_parser("simulate", help="time-step an initial condition")
    common(p)
    p.add_argument("--T", dest="t_final", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--sample-every", dest="sample_every", type=int)
    p.add_argument("--dump-frames", dest="dump_frames", action="store_true",
                   default=None)

    p = sub.add_parser("picard", help="Duhamel fixed-point iteration")
    common(p)
    p.add_argument("--horizon", type=float)
    p.add_argument("--n-iter", dest="n_iter", type=int)
    p.add_argument("--num-nodes", dest="num_nodes", type=int)
    p.add_argument("--c0", type=float)

    p = sub.add_parser("imethod-scan", help="modified-energy increments over N")
    common(p)
    p.add_argument("--s", type=float)
    p.add_argument("--N-list", dest="n_list")
    p.add_argument("--delta", type=float)
    p.add_argument("--dt", type=float)

    p = sub.add_parser("gwp", help="rescale-and-iterate globalization run")
    common(p)
    p.add_argument("--s", type=float)
    p.add_argument("--T", dest="t_target", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--N", dest="n_block", type=float)
    p.add_argument("--max-windows", dest="max_windows", type=int)

    p = sub.add_parser("probe", help="randomized estimate probes")
    common(p)
    p.add_argument("--estimate", choices=["strichartz", "maximal", "bilinear",
                                          "gh-bilinear", "l4", "cutoff",
                                          "trilinear"])
    p.add_argument("--q", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--N1", dest="n1", type=float)
    p.add_argument("--N2", dest="n2", type=float)
    p.add_argument("--N3", dest="n3", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--span", type=float)
    p.add_argument("--frames", type=int)
    p.add_argument("--T-grid", dest="t_grid")
    p.add_argument("--L-grid", dest="l_grid")
    p.add_argument("--T", dest="t_length", type=float)
    p.add_argument("--num-steps", dest="num_steps", type=int)

    p = sub.add_parser("norms", help="norms of a stored frame")
    common(p)
    p.add_argument("--input")
    p.add_argument("--norm-name", dest="norm_name",
                   choices=["sobolev", "homogeneous-sobolev", "besov", "lebesgue"])
    p.add_argument("--s", dest="s", type=float)
    p.add_argument("--p", type=float)
    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("config", "subcommand") and v is not None}
    return load_config(args.config, overrides)


def _output_dir(config: RunConfig) -> str:
    return config.output_dir or os.environ.get("ZKLAB_OUTPUT_DIR") or os.getcwd()


def _grid(config: RunConfig) -> Grid2D:
    return Grid2D(config.nx, config.resolved_ny(), config.lx, config.resolved_ly())


def _initial(config: RunConfig, grid: Grid2D):
    params: dict = {}
    if config.preset == "gaussian":
        params = {"amplitude": config.amplitude, "sigma": config.sigma}
    elif config.preset == "cosine-mode":
        params = {"amplitude": config.amplitude, "jx": config.jx, "jy": config.jy}
    elif config.preset == "random":
        params = {"seed": config.seed, "amplitude": config.amplitude}
        if config.kmax:
            params["kmax"] = config.kmax
        if config.envelope:
            params["envelope"] = config.envelope
        if config.norm:
            params["norm"] = config.norm
            params["norm_s"] = config.norm_s
    return make_initial(grid, config.preset, **params)


def _finish(subcommand: str, config: RunConfig, outdir: str, started: float,
            outputs: list[str], extra: dict | None = None) -> None:
    echo = os.path.join(outdir, "config.json")
    write_json(echo, config.to_dict())
    manifest = build_manifest(subcommand, config.to_dict(),
                              time.monotonic() - started,
                              [os.path.basename(p) for p in outputs + [echo]],
                              extra)
    write_json(os.path.join(outdir, "manifest.json"), manifest)


def _run_simulate(config: RunConfig, outdir: str) -> None:
    started = time.monotonic()
    grid = _grid(config)
    u0 = _initial(config, grid)
    recorder = DiagnosticsRecorder()
    form = DispersionForm.parse(config.form)
    try:
        traj = evolve(u0, config.t_final, config.dt, form,
                      sample_every=config.sample_every, diagnostics=recorder)
    except InstabilityError:
        if recorder.rows:
            write_csv(os.path.join(outdir, "diagnostics.csv"),
                      DiagnosticsRecorder.HEADER, recorder.rows)
        raise
    outputs = [os.path.join(outdir, "diagnostics.csv"),
               os.path.join(outdir, "frame_final.csv")]
    write_csv(outputs[0], DiagnosticsRecorder.HEADER, recorder.rows)
    write_frame_csv(outputs[1], traj.frame(-1))
    if config.dump_frames:
        for idx in range(traj.num_frames):
            path = os.path.join(outdir, f"frame_{idx:05d}.csv")
            write_frame_csv(path, traj.frame(idx))
            outputs.append(path)
    _finish("simulate", config, outdir, started, outputs,
            {"num_frames": traj.num_frames})


def _run_picard(config: RunConfig, outdir: str) -> None:
    started = time.monotonic()
    grid = _grid(config)
    u0 = _initial(config, grid)
    horizon = config.horizon or picard_horizon(besov_norm_2_1(u0, 0.5), config.c0)
    form = DispersionForm.parse(config.form)
    result = picard_iterate(u0, horizon, config.n_iter, form,
                            num_nodes=config.num_nodes)
    rows = [(n, result.diffs[n], result.ratios[n] if n < len(result.ratios) else "")
            for n in range(len(result.diffs))]
    out = os.path.join(outdir, "picard.csv")
    write_csv(out, ["iteration", "difference (Y-proxy norm)", "ratio"], rows)
    _finish("picard", config, outdir, started, [out],
            {"horizon": horizon, "contraction_failed": result.contraction_failed})


def _run_scan(config: RunConfig, outdir: str) -> None:
    started = time.monotonic()
    grid = _grid(config)
    u0 = _initial(config, grid)
    result = increment_scan(u0, config.s, config.n_list, config.delta, config.dt)
    out = os.path.join(outdir, "imethod_scan.csv")
    write_csv(out, ["N (dyadic block)", "abs_increment (modified energy)"],
              result.rows)
    _finish("imethod-scan", config, outdir, started, [out],
            {"slope": result.slope, "caveat": result.caveat})


def _run_gwp(config: RunConfig, outdir: str) -> None:
    started = time.monotonic()
    grid = _grid(config)
    u0 = _initial(config, grid)
    ledger = gwp_iteration(u0, config.s, config.t_target, delta=config.delta,
                           dt=config.dt,
                           n=config.n_block or None,
                           max_windows=config.max_windows)
    out = os.path.join(outdir, "gwp_ledger.json")
    write_json(out, json.loads(ledger.to_json()))
    _finish("gwp", config, outdir, started, [out], {"status": ledger.status})


def _run_probe(config: RunConfig, outdir: str) -> None:
    started = time.monotonic()
    grid = _grid(config)
    kind = config.estimate
    out = os.path.join(outdir, "probe.csv")
    if kind == "cutoff":
        rows, report = probes.cutoff_probe(config.t_grid, config.l_grid)
        write_csv(out, ["T", "L", "high_l32", "normalized", "recon_error",
                        "high_sup", "low_sup"],
                  [[r["T"], r["L"], r["high_l32"], r["normalized"],
                    r["recon_error"], r["high_sup"], r["low_sup"]] for r in rows])
        _finish("probe", config, outdir, started, [out],
                {"drift": report.drift, "estimate": report.estimate})
        return
    if kind == "strichartz":
        report = probes.strichartz_probe(config.q, config.r, grid,
                                         samples=config.samples, seed=config.seed,
                                         span=config.span, frames=config.frames)
    elif kind == "maximal":
        report = probes.maximal_derivative_probe(grid, samples=config.samples,
                                                 seed=config.seed, span=config.span,
                                                 frames=config.frames)
    elif kind == "bilinear":
        report = probes.bilinear_probe(config.n1, config.n2, grid,
                                       samples=config.samples, seed=config.seed,
                                       span=config.span, frames=config.frames)
    elif kind == "gh-bilinear":
        report = probes.gh_bilinear_probe(config.n1, config.n2, grid,
                                          samples=config.samples, seed=config.seed,
                                          span=config.span, frames=config.frames)
    elif kind == "l4":
        report = probes.l4_probe(grid, samples=config.samples, seed=config.seed,
                                 span=config.span, frames=config.frames)
    elif kind == "trilinear":
        report = probes.trilinear_form_probe(config.n1, config.n2, config.n3,
                                             config.t_length, grid,
                                             samples=config.samples,
                                             seed=config.seed,
                                             num_steps=config.num_steps)
    else:
        raise ConfigurationError(f"unknown estimate {kind!r}")
    row = report.to_row()
    write_csv(out, list(row.keys()), [list(row.values())])
    _finish("probe", config, outdir, started, [out],
            {"drift": report.drift, "estimate": report.estimate})


def _run_norms(config: RunConfig, outdir: str) -> None:
    started = time.monotonic()
    if not config.input:
        raise ConfigurationError("config key 'input': a frame file is required")
    field = read_frame_csv(config.input)
    name = config.norm_name
    if name == "sobolev":
        report = NormReport("sobolev", sobolev_norm(field, config.s),
                            {"s": config.s}, "")
    elif name == "homogeneous-sobolev":
        report = NormReport("homogeneous-sobolev",
                            sobolev_norm(field, config.s, homogeneous=True),
                            {"s": config.s}, "seminorm: zero mode dropped")
    elif name == "besov":
        report = NormReport("besov-2-1", besov_norm_2_1(field, config.s),
                            {"s": config.s}, "")
    elif name == "lebesgue":
        report = NormReport("lebesgue", lebesgue_norm(field, config.p),
                            {"r": config.p}, "")
    else:
        raise ConfigurationError(f"unknown norm {name!r}")
    out = os.path.join(outdir, "norms.csv")
    row = report.to_row()
    write_csv(out, list(row.keys()), [list(row.values())])
    print(f"{report.name} = {report.value:.17g}")
    _finish("norms", config, outdir, started, [out], {"value": report.value})


_RUNNERS = {
    "simulate": _run_simulate,
    "picard": _run_picard,
    "imethod-scan": _run_scan,
    "gwp": _run_gwp,
    "probe": _run_probe,
    "norms": _run_norms,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        outdir = _output_dir(config)
        os.makedirs(outdir, exist_ok=True)
        _RUNNERS[args.subcommand](config, outdir)
    except (ConfigurationError, UsageError, ResolutionError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        if exc.last_diagnostics:
            print(f"last diagnostics: {exc.last_diagnostics}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
