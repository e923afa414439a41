"""Command-line front end.

Every subcommand resolves its parameters as defaults < JSON config file <
command-line flags, writes CSV/JSON (and PNG unless --no-figures) into the
output directory, then a manifest with SHA-256 hashes and the resolved config.

Exit codes: 0 ok, 2 configuration error, 3 compute error, 4 --check failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, lattice, scattering
from .errors import ConfigInvalid, SubradiantError
from .geometry import LatticeDescriptor, LatticeKind, Polarization, generate_array
from .green import build_hamiltonian, dump_matrix
from .io import (RunConfig, load_config, resolve_output_dir, resolve_threads, write_csv, write_json,
                 write_manifest)
from .spectrum import diagonalize

log = logging.getLogger("subradiant")

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_CHECK = 0, 2, 3, 4
REQUIRED = object()


# --- parameter parsing -------------------------------------------------------

def _floatrange(v):
    """Validate 'a:b:count' (kept as text) or an explicit JSON list of floats."""
    if isinstance(v, (list, tuple)):
        return [float(x) for x in v]
    parts = str(v).split(":")
    if len(parts) != 3:
        raise ValueError("expected start:stop:count")
    float(parts[0]), float(parts[1])
    if int(parts[2]) < 2:
        raise ValueError("count must be at least 2")
    return str(v)


def expand(v) -> list:
    """Values of a validated float range."""
    if isinstance(v, list):
        return v
    a, b, n = str(v).split(":")
    return np.linspace(float(a), float(b), int(n)).tolist()


def _interval(v):
    if isinstance(v, (list, tuple)):
        lo, hi = (float(x) for x in v)
    else:
        lo, hi = (float(x) for x in str(v).split(":"))
    if not lo < hi:
        raise ValueError("expected lo < hi")
    return [lo, hi]


def _intlist(v):
    """'8:20:2' (inclusive) or '8,10,12' or a JSON list."""
    if isinstance(v, (list, tuple)):
        return [int(x) for x in v]
    s = str(v)
    if ":" in s:
        parts = [int(x) for x in s.split(":")]
        step = parts[2] if len(parts) == 3 else 1
        return list(range(parts[0], parts[1] + 1, step))
    return [int(x) for x in s.split(",") if x.strip()]


def _strlist(v):
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return [x.strip() for x in str(v).split(",") if x.strip()]


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _beam(v):
    if isinstance(v, dict):
        d = dict(v)
    else:
        d = {}
        for item in str(v).split(","):
            key, _, val = item.partition("=")
            d[key.strip()] = val.strip()
    out = {"l": int(d.pop("l")), "s": int(d.pop("s", 1)), "na": float(d.pop("na", 1.0)),
           "beta": float(d.pop("beta", 0.5))}
    if d:
        raise ValueError(f"unknown beam keys {sorted(d)}")
    scattering.BeamParams(**out)
    return out


def _opt_float(v):
    return None if v is None or v == "" else float(v)


def _opt_int(v):
    return None if v is None or v == "" else int(v)


def _opt_str(v):
    return None if v is None or v == "" else str(v)


GEOMETRY = {"geometry": (str, "square"), "n": (int, REQUIRED), "n_y": (_opt_int, None),
            "period": (float, REQUIRED), "period_y": (_opt_float, None), "pol": (str, "z")}

SCHEMAS = {
    "spectrum": dict(GEOMETRY, amplitudes=(int, 0), dump_matrix=(_bool, False)),
    "modes": dict(GEOMETRY, irrep=(_opt_str, None), max_gamma=(_opt_float, None), top=(int, 10),
                  amplitudes=(_bool, False)),
    "sweep": {"geometry": (str, "square"), "n": (int, REQUIRED), "pol": (str, "z"),
              "periods": (_floatrange, "0.45:0.26:39"), "seeds": (_strlist, "NN,NN-2-"),
              "threshold": (float, 0.5)},
    "dispersion": {"period": (float, REQUIRED), "period_y": (_opt_float, None), "pol": (str, "z"),
                   "path": (str, "GXMG"), "samples": (int, 50)},
    "dispersion-map": {"period": (float, REQUIRED), "pol": (str, "z"), "samples": (int, 21)},
    "flat-band": {"pol": (str, "z"), "search": (_interval, "0.15:0.45"), "step": (float, 0.02),
                  "tol": (float, 1e-4)},
    "scaling": {"geometry": (str, "square"), "pol": (str, "z"), "ns": (_intlist, "8:20:2"),
                "period": (float, 0.4), "optimize": (_bool, False), "branch": (str, "min"),
                "search": (_interval, "0.26:0.34"), "skip": (int, 2)},
    "optimize-period": {"geometry": (str, "square"), "n": (int, REQUIRED), "pol": (str, "z"),
                        "branch": (str, "NN"), "search": (_interval, "0.26:0.34"), "step": (float, 0.002),
                        "tol": (float, 1e-4)},
    "scatter": dict(GEOMETRY, beam=(_beam, "l=9,s=1"), detunings=(_floatrange, "-40:40:2000"),
                    modes=(int, 3), narrow=(float, scattering.NARROW_DECAY)),
    "deform": {"n": (int, 12), "period_x": (float, 0.31), "ratios": (_floatrange, "0.97:1.03:61"),
               "pol": (str, "z"), "branches": (_strlist, "NN-2-,NN"), "threshold": (float, 0.5)},
    "corner-asymptotics": {"ns": (_intlist, "8:40:2"), "skip": (int, 2)},
}

HELP = {
    "spectrum": "eigenstates of one array (CSV sorted by decay)",
    "modes": "filter and inspect states (irrep, decay cut, amplitudes)",
    "sweep": "track the two most subradiant branches versus period",
    "dispersion": "infinite-lattice band along a high-symmetry path",
    "dispersion-map": "infinite-lattice band over the irreducible Brillouin-zone wedge",
    "flat-band": "period where the band at M turns quartic",
    "scaling": "minimal decay versus array size with a power-law fit",
    "optimize-period": "period minimizing a branch's decay",
    "scatter": "vortex-beam scattering spectrum with modal cross sections",
    "deform": "rectangular-deformation sensitivity of the branches",
    "corner-asymptotics": "corner amplitudes of the branch harmonics versus q0",
}


def resolve_params(command: str, file_params: dict, cli_params: dict) -> dict:
    schema = SCHEMAS[command]
    unknown = set(file_params) - set(schema)
    if unknown:
        raise ConfigInvalid(f"params.{sorted(unknown)[0]}", "unknown parameter")
    out = {}
    for key, (conv, default) in schema.items():
        raw = cli_params.get(key, file_params.get(key, default))
        if raw is REQUIRED:
            raise ConfigInvalid(f"params.{key}", "required")
        try:
            out[key] = conv(raw) if raw is not None else None
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigInvalid(f"params.{key}", f"invalid value {raw!r} ({exc})") from exc
    if "pol" in out:
        try:
            out["pol"] = Polarization.parse(out["pol"]).value
        except ValueError as exc:
            raise ConfigInvalid("params.pol", str(exc)) from exc
    if "geometry" in out:
        try:
            out["geometry"] = LatticeKind.parse(out["geometry"]).value
        except ValueError as exc:
            raise ConfigInvalid("params.geometry", str(exc)) from exc
    for key in ("period", "period_x", "period_y"):
        if out.get(key) is not None and out[key] <= 0.1:
            raise ConfigInvalid(f"params.{key}", "must exceed 0.1 lambda0")
    for key in ("n", "n_y"):
        if out.get(key) is not None and out[key] < 2:
            raise ConfigInvalid(f"params.{key}", "need at least 2 atoms per edge")
    return out


# --- commands --------------------------------------------------------------------

class Context:
    def __init__(self, outdir: Path, figures: bool, executor):
        self.outdir = outdir
        self.figures = figures
        self.executor = executor
        self.files = []
        self.results = {}
        self.check = True
        self.check_notes = []

    def path(self, name):
        p = self.outdir / name
        self.files.append(p)
        return p

    def expect(self, ok, note):
        if not ok:
            self.check = False
            self.check_notes.append(note)

    def figure(self, fn, name, *args, **kw):
        if self.figures:
            fn(*args, path=self.path(name), **kw)


def _plots():
    from . import plotting
    return plotting


def _array(p):
    d = LatticeDescriptor(p["geometry"], p["n"], p["period"], p.get("period_y"), p.get("n_y"))
    return generate_array(d, p["pol"])


STATE_HEADER = ["index", "d_omega", "gamma", "irrep", "mx1", "my1", "w1", "mx2", "my2", "w2", "mx3", "my3", "w3"]
STATE_UNITS = "d_omega and gamma in Gamma0; w = |c|^2 (dimensionless)"


def _state_row(s):
    row = [s.index, s.detuning, s.decay, s.irrep]
    for k in range(3):
        if k < len(s.dominant_harmonics):
            (mx, my), w = s.dominant_harmonics[k]
            row += [mx, my, w]
        else:
            row += [None, None, None]
    return row


def _write_amplitudes(ctx, arr, s):
    rows = [[i, x, y, a.real, a.imag] for i, ((x, y), a) in enumerate(zip(arr.positions, s.amplitudes))]
    write_csv(ctx.path(f"state_{s.index:04d}.csv"), ["site", "x", "y", "re", "im"], rows,
              "x, y in lambda0; amplitudes unit-normalized")


def _spectrum_common(p, ctx, states, arr):
    total = sum(s.decay for s in states)
    ctx.results.update({"n_tot": arr.n_tot, "decay_sum": total, "metadata": arr.metadata,
                        "descriptor": arr.descriptor.to_dict()})
    ctx.expect(abs(total - arr.n_tot) <= 1e-8 * arr.n_tot, f"decay sum {total} != {arr.n_tot}")
    ctx.expect(all(s.decay > 0 for s in states), "non-positive decay rate")


def cmd_spectrum(p, ctx):
    arr = _array(p)
    h = build_hamiltonian(arr)
    if p["dump_matrix"]:
        ctx.files.append(dump_matrix(h, ctx.outdir / "matrix.csv"))
    states = diagonalize(h)
    write_csv(ctx.path("states.csv"), STATE_HEADER, [_state_row(s) for s in states], STATE_UNITS)
    write_json(ctx.path("states.json"), {"eigenvalues": [[s.detuning, s.decay] for s in states],
                                         "irreps": [s.irrep for s in states], "descriptor": arr.descriptor.to_dict(),
                                         "polarization": arr.polarization.value, "metadata": arr.metadata})
    for s in states[:p["amplitudes"]]:
        _write_amplitudes(ctx, arr, s)
    _spectrum_common(p, ctx, states, arr)
    ctx.results["most_subradiant"] = {"decay": states[0].decay, "irrep": states[0].irrep}
    ctx.figure(_plots().spectrum_figure, "states.png", states)


def cmd_modes(p, ctx):
    arr = _array(p)
    states = diagonalize(build_hamiltonian(arr))
    sel = [s for s in states if (p["irrep"] is None or s.irrep == p["irrep"])
           and (p["max_gamma"] is None or s.decay <= p["max_gamma"])][:p["top"]]
    write_csv(ctx.path("modes.csv"), STATE_HEADER, [_state_row(s) for s in sel], STATE_UNITS)
    if p["amplitudes"]:
        for s in sel:
            _write_amplitudes(ctx, arr, s)
    _spectrum_common(p, ctx, states, arr)
    ctx.results["selected"] = [s.index for s in sel]
    ctx.figure(_plots().spectrum_figure, "modes.png", sel or states)


def cmd_sweep(p, ctx):
    seeds = None if p["seeds"] == ["auto"] else p["seeds"]
    branches = analysis.period_sweep(p["geometry"], p["n"], p["pol"], expand(p["periods"]), seeds=seeds,
                                     threshold=p["threshold"], executor=ctx.executor)
    rows = []
    for b in branches:
        for a, s, ov in zip(b.parameters, b.states, b.overlaps):
            rows.append([p["geometry"], p["n"], a, b.label, s.decay, s.detuning, s.irrep, ov])
    write_csv(ctx.path("sweep.csv"), ["geometry", "n", "period", "branch", "gamma", "d_omega", "irrep", "overlap"],
              rows, "period in lambda0; gamma, d_omega in Gamma0")
    res = {}
    for b in branches:
        a, g, interior = b.minimum()
        res[b.label] = {"min_period": a, "min_gamma": g, "interior": interior, "splits": b.splits}
        ctx.expect(not b.splits, f"branch {b.label} split at {b.splits}")
    if len(branches) >= 2:
        res["crossing"] = analysis.crossing_period(branches[0], branches[1])
    ctx.results["branches"] = res
    ctx.figure(_plots().sweep_figure, "sweep.png", branches)


def _guided_check(ctx, samples):
    bad = [x for x in samples if x.below_light_line and not x.gap and abs(x.decay) >= 1e-6 + x.error]
    ctx.expect(not bad, f"{len(bad)} guided samples with decay above 1e-6 plus their error bound")


def cmd_dispersion(p, ctx):
    samples = lattice.dispersion_path(p["period"], p["pol"], p["path"], p["samples"], p["period_y"],
                                      executor=ctx.executor)
    rows = [[x.s, x.k.kx, x.k.ky, x.detuning, x.decay, x.below_light_line] for x in samples]
    write_csv(ctx.path("dispersion.csv"), ["s", "kx", "ky", "d_omega", "gamma", "guided"], rows,
              "s, kx, ky in 1/lambda0; d_omega, gamma in Gamma0; NaN marks a skipped anomaly sample")
    ctx.results["gaps"] = sum(x.gap for x in samples)
    _guided_check(ctx, samples)
    ay = p["period_y"] or p["period"]
    corners = []
    pts = lattice.path_points(p["path"], p["period"], ay, 1)
    corners = [s for s, _ in pts]
    ctx.figure(_plots().dispersion_figure, "dispersion.png", samples, corners=corners)


def cmd_dispersion_map(p, ctx):
    samples = lattice.dispersion_grid(p["period"], p["pol"], p["samples"], executor=ctx.executor)
    rows = [[x.k.kx, x.k.ky, x.detuning, x.decay, x.below_light_line] for x in samples]
    write_csv(ctx.path("dispersion_map.csv"), ["kx", "ky", "d_omega", "gamma", "guided"], rows,
              "kx, ky in 1/lambda0; d_omega, gamma in Gamma0")
    _guided_check(ctx, samples)
    ctx.figure(_plots().map_figure, "dispersion_map.png", samples)


def cmd_flat_band(p, ctx):
    scan = []
    a = lattice.find_flat_band_period(p["pol"], tuple(p["search"]), p["step"], p["tol"], record=scan)
    write_csv(ctx.path("curvature.csv"), ["period", "curvature"], scan,
              "period in lambda0; curvature of d_omega along Gamma-M at M in Gamma0 lambda0^2")
    ctx.results["flat_band_period"] = a
    signs = {np.sign(c) for _, c in scan}
    ctx.expect((a is None) == (len(signs) == 1), "curvature scan inconsistent with the reported root")
    ctx.figure(_plots().curve_figure, "curvature.png", [s[0] for s in scan], [s[1] for s in scan],
               xlabel=r"$\tilde a$", ylabel="curvature at M", hline=0.0)


def cmd_scaling(p, ctx):
    res = analysis.scaling_sweep(p["geometry"], p["pol"], p["ns"], p["period"], p["optimize"], p["branch"],
                                 tuple(p["search"]), p["skip"], executor=ctx.executor)
    rows = [[r.geometry, r.n, r.n_tot, r.period, r.gamma_min, r.branch] for r in res.rows]
    write_csv(ctx.path("scaling.csv"), ["geometry", "n", "n_tot", "period", "gamma_min", "branch"], rows,
              "period in lambda0; gamma_min in Gamma0")
    ctx.results["fit"] = res.fit.to_dict()
    ctx.results["skip"] = res.skip
    ctx.expect(res.fit.meaningful, f"fit residual {res.fit.residual:.3f} decades >= 0.2")
    ctx.figure(_plots().scaling_figure, "scaling.png", res.rows, res.fit)


def cmd_optimize(p, ctx):
    target = None if p["branch"] == "min" else p["branch"]
    r = analysis.optimize_period(p["geometry"], p["n"], p["pol"], target, tuple(p["search"]), p["step"],
                                 p["tol"], executor=ctx.executor)
    write_json(ctx.path("optimum.json"), r.__dict__)
    ctx.results["optimum"] = r.__dict__
    ctx.expect(r.decay <= r.coarse_decay, "refined decay above the coarse-grid minimum")


def cmd_scatter(p, ctx):
    arr = _array(p)
    h = build_hamiltonian(arr)
    states = diagonalize(h)
    beam = scattering.bessel_beam_field(scattering.BeamParams(**p["beam"]), arr.centroid)
    sc = scattering.Scatterer(h, beam, states)
    spec = sc.spectrum(expand(p["detunings"]))
    peaks = sorted((sc.modal_peak(n) for n in range(len(states))), key=lambda q: -q.height)
    top = [q.mode for q in peaks[:p["modes"]]]
    rows = [[d, spec.total[i]] + [spec.modal[m, i] for m in top] for i, d in enumerate(spec.detunings)]
    write_csv(ctx.path("scattering.csv"), ["d_omega", "sigma_total"] + [f"sigma_mode_{k + 1}" for k in range(len(top))],
              rows, "d_omega in Gamma0; cross sections in sigma0 = 3 lambda0^2/(2 pi)")
    write_csv(ctx.path("peaks.csv"), ["mode", "irrep", "detuning", "decay", "center", "height", "narrow"],
              [[q.mode, states[q.mode].irrep, q.detuning, q.decay, q.center, q.height, q.decay < p["narrow"]]
               for q in peaks], "detuning, decay, center in Gamma0; height in sigma0")
    meta = beam.metadata()
    write_json(ctx.path("beam.json"), meta)
    narrow = [q for q in peaks if q.decay < p["narrow"]]
    ctx.results["columns"] = [{"column": f"sigma_mode_{k + 1}", "mode": m, "irrep": states[m].irrep,
                               "harmonics": states[m].dominant_harmonics} for k, m in enumerate(top)]
    if narrow:
        q = narrow[0]
        ctx.results["largest_narrow_peak"] = {"mode": q.mode, "irrep": states[q.mode].irrep, "center": q.center,
                                              "detuning": q.detuning, "decay": q.decay, "height": q.height}
    mism = spec.max_modal_mismatch()
    ctx.results["modal_sum_mismatch"] = mism
    ctx.expect(mism < 1e-8, f"modal sum mismatch {mism:.2e}")
    ctx.expect(meta["winding_ok"], "E_z winding differs from l + s")
    labels = [f"mode {m} ({states[m].irrep})" for m in top]
    ctx.figure(_plots().scattering_figure, "scattering.png", spec, top, labels)


def cmd_deform(p, ctx):
    out = analysis.deformation_sweep(p["n"], p["period_x"], expand(p["ratios"]), p["pol"], tuple(p["branches"]),
                                     p["threshold"], executor=ctx.executor)
    rows = []
    for name, (br, amp) in out.items():
        for r, s, g, ov in zip(br.parameters, br.states, amp, br.overlaps):
            rows.append(["rectangular", p["n"], r, name, s.decay, g, ov])
        ctx.results[name] = {"max_amplification": float(amp.max()), "min_amplification": float(amp.min()),
                             "splits": br.splits}
        ctx.expect(not br.splits, f"branch {name} split at {br.splits}")
    write_csv(ctx.path("deform.csv"), ["geometry", "n", "ratio", "branch", "gamma", "amplification", "overlap"], rows,
              "ratio = a_y/a_x; gamma in Gamma0; amplification = gamma/gamma(ratio=1)")
    if ctx.figures:
        plt = _plots()
        branches = [analysis.TrackedBranch(k, v[0].parameters, v[0].states, v[0].overlaps) for k, v in out.items()]
        plt.sweep_figure(branches, path=ctx.path("deform.png"), xlabel=r"$a_y/a_x$")


def cmd_corner(p, ctx):
    rows, f1, f2 = analysis.corner_asymptotics(p["ns"], p["skip"])
    write_csv(ctx.path("corner.csv"), ["n", "q0", "corner_nn", "corner_nn2"],
              [[r.n, r.q0, r.corner_nn, r.corner_nn2] for r in rows], "all dimensionless")
    ctx.results["power_nn"] = f1.to_dict()
    ctx.results["power_nn2"] = f2.to_dict()
    ctx.expect(abs(f1.exponent - 3) <= 0.1 and abs(f2.exponent - 5) <= 0.1, "corner powers off 3 and 5")
    ctx.figure(_plots().corner_figure, "corner.png", rows)


COMMANDS = {"spectrum": cmd_spectrum, "modes": cmd_modes, "sweep": cmd_sweep, "dispersion": cmd_dispersion,
            "dispersion-map": cmd_dispersion_map, "flat-band": cmd_flat_band, "scaling": cmd_scaling,
            "optimize-period": cmd_optimize, "scatter": cmd_scatter, "deform": cmd_deform,
            "corner-asymptotics": cmd_corner}


# --- argument parsing ----------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--config", help="JSON run config; flags override its values")
    sp.add_argument("--out", help="output directory (default: $SUBRADIANT_OUTPUT_DIR/<command>)")
    sp.add_argument("--workers", type=int, help="worker threads (default: $SUBRADIANT_THREADS or 1)")
    sp.add_argument("--no-figures", action="store_true", help="skip PNG figures")
    sp.add_argument("--check", action="store_true", help="exit 4 when the run's self-checks fail")
    sp.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subradiant", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, schema in SCHEMAS.items():
        sp = sub.add_parser(name, help=HELP[name])
        _add_common(sp)
        for key in schema:
            sp.add_argument("--" + key.replace("_", "-"), dest=key, default=argparse.SUPPRESS)
    rp = sub.add_parser("run", help="re-execute a persisted config.json")
    rp.add_argument("config_file")
    _add_common(rp)
    return ap


COMMON = {"config", "out", "workers", "no_figures", "check", "verbose", "command", "config_file"}


def execute(config: RunConfig, figures: bool = True, workers: int = 1):
    """Run a resolved config. Returns (manifest, check passed, check notes)."""
    outdir = resolve_output_dir(config.output_dir, config.command)
    outdir.mkdir(parents=True, exist_ok=True)
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    ctx = Context(outdir, figures, executor)
    try:
        COMMANDS[config.command](config.params, ctx)
    finally:
        if executor is not None:
            executor.shutdown()
    stored = RunConfig(config.command, config.params, config.output_dir)
    write_json(ctx.path("config.json"), stored.to_dict())
    ctx.results["check"] = {"passed": ctx.check, "notes": ctx.check_notes}
    manifest = write_manifest(outdir, stored, ctx.files, ctx.results)
    return manifest, ctx.check, ctx.check_notes


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            file_cfg = load_config(args.config_file)
            command = file_cfg.command
            if command not in SCHEMAS:
                raise ConfigInvalid("command", f"unknown command {command!r}")
        else:
            command = args.command
            file_cfg = load_config(args.config) if args.config else RunConfig(command)
            if file_cfg.command and file_cfg.command != command:
                raise ConfigInvalid("command", f"config is for {file_cfg.command!r}, not {command!r}")
        cli_params = {k: v for k, v in vars(args).items() if k not in COMMON}
        params = resolve_params(command, file_cfg.params, cli_params)
        out = args.out or file_cfg.output_dir
        config = RunConfig(command, params, out or "")
        workers = resolve_threads(args.workers)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        manifest, ok, notes = execute(config, figures=not args.no_figures, workers=workers)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SubradiantError as exc:
        print(f"compute error in {command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    outdir = resolve_output_dir(config.output_dir, command)
    print(f"{command}: wrote {len(manifest['files'])} files to {outdir}")
    if args.check:
        if not ok:
            for n in notes:
                print(f"check failed: {n}", file=sys.stderr)
            return EXIT_CHECK
        print("check passed")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
