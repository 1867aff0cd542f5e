"""Command-line frontend: design synthesis, evaluation, heatmap and benchmark data.

Outputs are flat files: positions (one coordinate per line), JSON reports,
and CSV tables; `--figure` additionally renders a matplotlib figure next to
the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .crb import SensingParams, speb
from .design import (
    baseline_sparse_ula,
    baseline_two_edge,
    baseline_ula,
    discrete_deployment,
    gamma_param,
    optimal_q,
    round_half_away,
)
from .errors import MaPlacementError, SearchSpaceTooLarge
from .geometry import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    NearFieldRegion,
    SourcePosition,
)
from .search import (
    DEFAULT_SEARCH_BUDGET,
    RegionGrid,
    exhaustive_search,
    worst_case_speb,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GEOMETRY = 3
EXIT_BUDGET = 4

DESIGN_CHOICES = (
    "proposed",
    "proposed-asymptotic",
    "ula",
    "sparse-ula",
    "two-edge",
    "exhaustive",
    "positions-file",
)
BENCHMARK_DESIGNS = ("proposed", "two-edge", "sparse-ula", "ula")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    wavelength: float
    half_aperture: float
    antennas: int
    snapshots: int
    snr_db: float
    n_u: int
    n_r: int
    u_max: float
    design: str
    output_format: str
    seed: int
    pitch: float | None
    budget: int
    symmetry_prune: bool

    @property
    def params(self) -> SensingParams:
        return SensingParams.from_snr_db(
            wavelength=self.wavelength,
            snapshots=self.snapshots,
            antennas=self.antennas,
            snr_db=self.snr_db,
        )

    def params_for(self, antennas: int) -> SensingParams:
        return SensingParams.from_snr_db(
            wavelength=self.wavelength,
            snapshots=self.snapshots,
            antennas=antennas,
            snr_db=self.snr_db,
        )

    @property
    def region(self) -> NearFieldRegion:
        return NearFieldRegion(
            half_aperture=self.half_aperture,
            wavelength=self.wavelength,
            u_max=self.u_max,
        )

    @property
    def grid(self) -> RegionGrid:
        return RegionGrid(region=self.region, n_u=self.n_u, n_r=self.n_r)


_FILE_KEYS = {
    "wavelength": float,
    "frequency": float,
    "half_aperture": float,
    "antennas": int,
    "snapshots": int,
    "snr_db": float,
    "n_u": int,
    "n_r": int,
    "u_max": float,
    "design": str,
    "format": str,
    "seed": int,
    "pitch": float,
    "budget": int,
}


def load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, _, val = line.partition("=")
                key = key.strip().replace("-", "_")
                if key not in _FILE_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
                try:
                    values[key] = _FILE_KEYS[key](val.strip())
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return values


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    file_values = load_config_file(args.config) if args.config else {}

    def pick(name, default):
        cli = getattr(args, name, None)
        if cli is not None:
            return cli
        return file_values.get(name, default)

    wavelength = pick("wavelength", None)
    frequency = pick("frequency", None)
    if wavelength is not None and frequency is not None:
        raise ConfigError("give exactly one of --wavelength / --frequency")
    if wavelength is None:
        frequency = frequency if frequency is not None else 28e9
        if frequency <= 0:
            raise ConfigError("frequency must be positive")
        wavelength = SPEED_OF_LIGHT / frequency
    if wavelength <= 0:
        raise ConfigError("wavelength must be positive")

    half_aperture = pick("half_aperture", None)
    if half_aperture is None:
        half_aperture = 25.0 * wavelength

    cfg = ExperimentConfig(
        wavelength=wavelength,
        half_aperture=half_aperture,
        antennas=pick("antennas", 25),
        snapshots=pick("snapshots", 1024),
        snr_db=pick("snr_db", 5.0),
        n_u=pick("n_u", 201),
        n_r=pick("n_r", 201),
        u_max=pick("u_max", 0.999),
        design=pick("design", "proposed"),
        output_format=pick("format", "csv"),
        seed=pick("seed", 0),
        pitch=pick("pitch", None),
        budget=pick("budget", DEFAULT_SEARCH_BUDGET),
        symmetry_prune=not getattr(args, "no_symmetry_prune", False),
    )
    for name in ("half_aperture", "antennas", "snapshots", "n_u", "n_r"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if not 0.0 < cfg.u_max < 1.0:
        raise ConfigError("u_max must be in (0, 1)")
    if cfg.design not in DESIGN_CHOICES:
        raise ConfigError(f"unknown design '{cfg.design}'")
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    return cfg


# ---------------------------------------------------------------------------
# Geometry construction and reports
# ---------------------------------------------------------------------------


def cluster_sizes(n: int) -> list[int]:
    edge = round_half_away(0.25 * n)
    return [edge, n - 2 * edge, edge]


def build_geometry(
    name: str, cfg: ExperimentConfig, antennas: int | None = None
) -> tuple[ArrayGeometry, list[int] | None]:
    n = antennas if antennas is not None else cfg.antennas
    a, lam = cfg.half_aperture, cfg.wavelength
    if name in ("proposed", "proposed-asymptotic"):
        return discrete_deployment(n, a, lam), cluster_sizes(n)
    if name == "ula":
        return baseline_ula(n, lam, a), None
    if name == "sparse-ula":
        return baseline_sparse_ula(n, a, lam), None
    if name == "two-edge":
        return baseline_two_edge(n, a, lam), [(n + 1) // 2, 0, n // 2]
    if name == "exhaustive":
        _, geom = exhaustive_search(
            n,
            a,
            lam,
            cfg.params_for(n),
            cfg.grid,
            candidate_pitch=cfg.pitch,
            symmetry_prune=cfg.symmetry_prune,
            budget=cfg.budget,
        )
        return geom, None
    raise ConfigError(f"cannot synthesize geometry for design '{name}'")


def build_report_dict(cfg: ExperimentConfig, design, geom, report, clusters) -> dict:
    gamma = gamma_param(cfg.half_aperture, cfg.wavelength)
    q_star = 0.5 if design == "proposed-asymptotic" else optimal_q(gamma)
    return {
        "design": design,
        "n": geom.n,
        "a_m": cfg.half_aperture,
        "lambda_m": cfg.wavelength,
        "snr_db": cfg.snr_db,
        "worst_case_speb_m2": report.worst_case_speb,
        "worst_case_rmse_m": report.worst_case_rmse,
        "worst_u": report.worst_u,
        "worst_r_m": report.worst_r,
        "q_star": q_star,
        "gamma": gamma,
        "clusters": clusters,
    }


def write_positions(path: str, geom: ArrayGeometry) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x in geom.positions:
            fh.write(format(x, ".17g") + "\n")


def read_positions(path: str) -> list[float]:
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a coordinate: {line!r}") from None
    return values


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_design(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    design = cfg.design
    if design == "positions-file":
        raise ConfigError("use the 'evaluate' command for an existing positions file")
    geom, clusters = build_geometry(design, cfg)
    report = worst_case_speb(geom, cfg.params_for(geom.n), cfg.grid, label=design)
    write_positions(args.output, geom)
    print(json.dumps(build_report_dict(cfg, design, geom, report, clusters), indent=2))
    return EXIT_OK


def _load_geometry(args, cfg: ExperimentConfig) -> ArrayGeometry:
    positions = read_positions(args.positions_file)
    a = cfg.half_aperture
    if getattr(args, "half_aperture", None) is None and positions:
        a = max(a, max(abs(x) for x in positions))
    return ArrayGeometry(tuple(positions), half_aperture=a, wavelength=cfg.wavelength)


def cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    geom = _load_geometry(args, cfg)
    if args.enforce_spacing:
        bad = geom.min_spacing_violation()
        if bad is not None:
            raise _spacing_error(geom, *bad)
    region = NearFieldRegion(geom.half_aperture, cfg.wavelength, cfg.u_max)
    grid = RegionGrid(region=region, n_u=cfg.n_u, n_r=cfg.n_r)
    params = cfg.params_for(geom.n)
    report = worst_case_speb(geom, params, grid, label="positions-file")
    out = build_report_dict(cfg, "positions-file", geom, report, None)
    out["a_m"] = geom.half_aperture
    if args.source is not None:
        u, r = args.source
        src = SourcePosition(u=u, r=r)
        out["source_u"] = u
        out["source_r_m"] = r
        out["source_speb_m2"] = speb(geom, params, src)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _spacing_error(geom, i, gap):
    from .errors import SpacingViolation

    return SpacingViolation(
        f"elements {i} and {i + 1} at {geom.positions[i]:.6g} m and "
        f"{geom.positions[i + 1]:.6g} m are {gap:.6g} m apart "
        f"(minimum {0.5 * geom.wavelength:.6g} m)"
    )


def cmd_heatmap(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if args.positions_file:
        geom = _load_geometry(args, cfg)
    else:
        name = cfg.design if cfg.design != "positions-file" else "proposed"
        geom, _ = build_geometry(name, cfg)
    region = NearFieldRegion(geom.half_aperture, cfg.wavelength, cfg.u_max)
    grid = RegionGrid(region=region, n_u=cfg.n_u, n_r=cfg.n_r)
    params = cfg.params_for(geom.n)

    from .crb import _speb_quadratic, kappa, sample_moments
    from .search import _checked_det

    m = sample_moments(geom)
    det = _checked_det(m)
    kap = kappa(params)
    lines = ["u,r_m,p1_m,p2_m,log10_speb_m2"]
    all_u, all_r, all_lv = [], [], []
    for u in grid.u_values:
        r = grid.radii(float(u))
        vals = _speb_quadratic(kap, m, det, float(u), r)
        lv = np.log10(vals)
        all_u.append(np.full(r.size, float(u)))
        all_r.append(r)
        all_lv.append(lv)
        p2_scale = math.sqrt((1.0 - u) * (1.0 + u))
        for rj, lvj in zip(r, lv):
            p1, p2 = rj * float(u), rj * p2_scale
            lines.append(
                ",".join(format(v, ".17g") for v in (float(u), rj, p1, p2, lvj))
            )
    _emit("\n".join(lines) + "\n", args.output)

    if args.figure:
        from .figures import save_heatmap_figure

        us = np.concatenate(all_u)
        rs = np.concatenate(all_r)
        lv = np.concatenate(all_lv)
        save_heatmap_figure(rs * us, rs * np.sqrt(1.0 - us * us), lv, args.figure)
    return EXIT_OK


def _parse_values(raw: str, caster) -> list:
    try:
        return [caster(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values {raw!r}: {exc}") from None


_SWEEP_NAMES = {"snr_db": "snr_db", "snr-db": "snr_db", "n": "n", "a": "a"}


def cmd_benchmark(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    sweep = _SWEEP_NAMES.get(args.sweep.lower())
    if sweep is None:
        raise ConfigError(f"sweep variable must be one of snr_db, N, a; got {args.sweep}")
    caster = int if sweep == "n" else float
    values = _parse_values(args.values, caster) if args.values else []
    designs = (
        [d.strip() for d in args.designs.split(",") if d.strip()]
        if args.designs
        else list(BENCHMARK_DESIGNS)
    )
    for d in designs:
        if d not in DESIGN_CHOICES or d == "positions-file":
            raise ConfigError(f"unknown benchmark design '{d}'")

    lines = [f"design,{sweep},worst_case_speb_m2,worst_case_rmse_m,error"]
    rows = []
    for design in designs:
        for value in values:
            point = cfg
            n = cfg.antennas
            if sweep == "snr_db":
                point = _replace(cfg, snr_db=float(value))
            elif sweep == "n":
                n = int(value)
            else:
                point = _replace(cfg, half_aperture=float(value))
            row = {"design": design, sweep: value, "speb": None, "error": ""}
            try:
                geom, _ = build_geometry(design, point, antennas=n)
                report = worst_case_speb(
                    geom, point.params_for(geom.n), point.grid, label=design
                )
                row["speb"] = report.worst_case_speb
            except SearchSpaceTooLarge as exc:
                row["error"] = exc.code
            except (MaPlacementError, ValueError) as exc:
                row["error"] = getattr(exc, "code", "invalid-input")
            rows.append(row)
            speb_txt = "" if row["speb"] is None else format(row["speb"], ".17g")
            rmse_txt = (
                "" if row["speb"] is None else format(math.sqrt(row["speb"]), ".17g")
            )
            lines.append(
                f"{design},{format(value, 'g') if isinstance(value, float) else value},"
                f"{speb_txt},{rmse_txt},{row['error']}"
            )
    _emit("\n".join(lines) + "\n", args.output)

    if args.figure:
        from .figures import save_benchmark_figure

        save_benchmark_figure(rows, sweep, args.figure)
    return EXIT_OK


def _replace(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    import dataclasses

    return dataclasses.replace(cfg, **kw)


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--wavelength", type=float, help="carrier wavelength in meters")
    p.add_argument("--frequency", type=float, help="carrier frequency in Hz")
    p.add_argument("--half-aperture", dest="half_aperture", type=float,
                   help="half-aperture a in meters (default 25*lambda)")
    p.add_argument("-N", "--antennas", type=int, help="number of antennas")
    p.add_argument("--snapshots", type=int, help="number of snapshots")
    p.add_argument("--snr-db", dest="snr_db", type=float,
                   help="average received SNR in dB")
    p.add_argument("--n-u", dest="n_u", type=int, help="direction grid resolution")
    p.add_argument("--n-r", dest="n_r", type=int, help="range grid resolution")
    p.add_argument("--u-max", dest="u_max", type=float,
                   help="cap on |cos(theta)| for the region")
    p.add_argument("--seed", type=int, help="seed for randomized suites")


def _add_search(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pitch", type=float,
                   help="exhaustive candidate pitch in meters (default lambda/2)")
    p.add_argument("--budget", type=int, help="exhaustive evaluation budget")
    p.add_argument("--no-symmetry-prune", action="store_true",
                   help="search all subsets, not only centro-symmetric ones")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ma-placement",
        description="Movable-antenna placement design and worst-case "
        "position-error bounds for near-field sensing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="synthesize a geometry and report its bound")
    _add_common(p)
    _add_search(p)
    p.add_argument("--design", choices=[d for d in DESIGN_CHOICES if d != "positions-file"])
    p.add_argument("-o", "--output", default="positions.txt",
                   help="positions file to write (default positions.txt)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("evaluate", help="evaluate a positions file")
    _add_common(p)
    p.add_argument("positions_file", help="text file, one coordinate per line (m)")
    p.add_argument("--enforce-spacing", action="store_true",
                   help="fail when adjacent spacing is below lambda/2")
    p.add_argument("--source", nargs=2, type=float, metavar=("U", "R"),
                   help="also report the bound at this (u, r)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("heatmap", help="emit gridded log10-bound CSV over the region")
    _add_common(p)
    p.add_argument("--design", choices=[d for d in DESIGN_CHOICES if d != "positions-file"])
    p.add_argument("--positions-file", dest="positions_file",
                   help="evaluate this file instead of a synthesized design")
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.add_argument("--figure", help="also render a PNG heatmap to this path")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("benchmark", help="sweep a parameter across designs")
    _add_common(p)
    _add_search(p)
    p.add_argument("--sweep", required=True, help="sweep variable: snr_db, N, or a")
    p.add_argument("--values", help="comma-separated sweep values")
    p.add_argument("--designs", help="comma-separated design names "
                   f"(default {','.join(BENCHMARK_DESIGNS)})")
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.add_argument("--figure", help="also render a PNG comparison to this path")
    p.set_defaults(func=cmd_benchmark)
    return parser


def _fail(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _fail("config-error", str(exc))
        return EXIT_CONFIG
    except SearchSpaceTooLarge as exc:
        _fail(exc.code, str(exc))
        return EXIT_BUDGET
    except MaPlacementError as exc:
        _fail(exc.code, str(exc))
        return EXIT_GEOMETRY
    except (ValueError, OSError) as exc:
        _fail("invalid-input", str(exc))
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
