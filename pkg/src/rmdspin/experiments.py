"""Batch experiments: configuration, seeding, thread-pool execution and output files.

Every run draws its randomness from a seed derived from the master seed and
the run's identity (experiment, drive, frequency value, realization, ...), so
adding grid points never changes existing runs and the thread count never
changes results. Output rows are written in canonical task order.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from rmdspin import __version__
from rmdspin.analysis import (
    Aggregate,
    EnergyCalibration,
    ThermalizationResult,
    UnreachableEnergyError,
    aggregate_tau,
    calibrate_energy,
    extract_tau,
    fit_exponential,
    fit_log_squared,
    fit_power_law,
    rondeau_lifetime,
    target_energy,
)
from rmdspin.drive import DriveGenerator, DriveSpec, labels_to_string
from rmdspin.dynamics import StepParams, Trajectory, evolve, evolve_twin
from rmdspin.lattice import init_neel, init_polarized, perturb_copy
from rmdspin.observables import D_INF, magnetization_z

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# realizations per RMD order when not overridden
DEFAULT_RMD_REALIZATIONS = {0: 20, 1: 10, 2: 5, 3: 2, 4: 1}
DEFAULT_DETERMINISTIC_REALIZATIONS = 5


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    N: int = 50
    drives: list = field(default_factory=lambda: ["rmd0", "rmd1", "rmd2"])
    g: float = 0.9045
    h: float = 0.809
    gh_scale: float = 1.0
    inv_T: list = field(default_factory=lambda: [4, 5, 6, 7, 8, 9, 10, 11, 12])
    initial_state: str = "neel"
    W: float = 0.01
    target_energies: list = field(default_factory=list)
    delta: float = 0.01
    thresholds: list = field(default_factory=lambda: [0.90, 0.89, 0.88])
    d_inf: float = D_INF
    realizations: dict = field(default_factory=dict)
    step_cap: int = 100_000_000
    record_every: int | None = None
    seed: int = 0
    threads: int = 1
    out: str = "out"
    # simulate
    n_steps: int = 100_000
    dump_labels: int = 0
    # finite-size
    N_list: list = field(default_factory=lambda: [10, 20, 30, 40, 50])
    # rondeau
    g_tc: list = field(default_factory=lambda: [0.255])
    rondeau_inv_T: float = 12.0
    rondeau_periods: int = 10_000
    rondeau_state: str = "polarized"
    sample_every: int = 4
    s_cr: float = 0.25
    # calibration
    calib_W: list = field(default_factory=lambda: [round(0.02 * k, 2) for k in range(26)])
    calib_realizations: int = 50
    calib_N: int | None = None

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]  # a run manifest
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | os.PathLike) -> ExperimentConfig:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def updated(self, **overrides) -> ExperimentConfig:
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return ExperimentConfig.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(isinstance(self.N, int) and self.N >= 2, "N must be an integer >= 2")
        need(isinstance(self.drives, list) and self.drives, "drives must be a non-empty list")
        for d in self.drives:
            try:
                DriveSpec.parse(str(d))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        need(isinstance(self.inv_T, list) and self.inv_T, "inv_T must be a non-empty list")
        need(all(isinstance(f, (int, float)) and f > 0 for f in self.inv_T), "inv_T values must be positive")
        need(self.initial_state in ("neel", "polarized"), "initial_state must be 'neel' or 'polarized'")
        need(self.rondeau_state in ("neel", "polarized"), "rondeau_state must be 'neel' or 'polarized'")
        need(self.W >= 0, "W must be non-negative")
        need(self.delta >= 0, "delta must be non-negative")
        need(self.thresholds and all(0 < x < 1 for x in self.thresholds), "thresholds must lie in (0, 1)")
        need(self.d_inf > 0, "d_inf must be positive")
        need(isinstance(self.realizations, dict), "realizations must map drive names to counts")
        for k, v in self.realizations.items():
            need(isinstance(v, int) and v >= 1, f"realizations[{k!r}] must be a positive integer")
        need(isinstance(self.step_cap, int) and self.step_cap >= 0, "step_cap must be a non-negative integer")
        need(self.record_every is None or (isinstance(self.record_every, int) and self.record_every >= 1),
             "record_every must be a positive integer or null")
        need(isinstance(self.seed, int) and self.seed >= 0, "seed must be a non-negative integer")
        need(isinstance(self.threads, int) and self.threads >= 1, "threads must be >= 1")
        need(isinstance(self.n_steps, int) and self.n_steps >= 0, "n_steps must be a non-negative integer")
        need(isinstance(self.dump_labels, int) and self.dump_labels >= 0, "dump_labels must be >= 0")
        need(all(isinstance(n, int) and n >= 2 for n in self.N_list), "N_list entries must be integers >= 2")
        need(self.g_tc and all(isinstance(x, (int, float)) for x in self.g_tc), "g_tc must be a list of numbers")
        need(self.rondeau_inv_T > 0, "rondeau_inv_T must be positive")
        need(isinstance(self.rondeau_periods, int) and self.rondeau_periods >= 0, "rondeau_periods must be >= 0")
        need(isinstance(self.sample_every, int) and self.sample_every >= 1, "sample_every must be >= 1")
        need(self.calib_realizations >= 1, "calib_realizations must be >= 1")
        need(all(w >= 0 for w in self.calib_W), "calib_W entries must be non-negative")

    # derived quantities

    @property
    def g_eff(self) -> float:
        return self.g * self.gh_scale

    @property
    def h_eff(self) -> float:
        return self.h * self.gh_scale

    def n_realizations(self, drive: str) -> int:
        spec = DriveSpec.parse(drive)
        if drive in self.realizations:
            return self.realizations[drive]
        if spec.name in self.realizations:
            return self.realizations[spec.name]
        if spec.kind == "rmd":
            return DEFAULT_RMD_REALIZATIONS.get(spec.order, 1)
        return DEFAULT_DETERMINISTIC_REALIZATIONS

    def stride(self, drive: str) -> int:
        if self.record_every is not None:
            return self.record_every
        return DriveSpec.parse(drive).block_length


def derive_seed(master: int, *keys) -> int:
    """64-bit seed from the master seed and a tuple of run identifiers."""
    words = []
    for k in keys:
        if isinstance(k, str):
            words.append(zlib.crc32(k.encode()))
        elif isinstance(k, float):
            words.append(int(round(k * 1_000_000)) & 0xFFFFFFFF)
        else:
            words.append(int(k) & 0xFFFFFFFF)
    ss = np.random.SeedSequence(entropy=master, spawn_key=tuple(words))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def split_seed(seed: int) -> tuple[int, int, int]:
    """Independent (initial state, perturbation, drive) seeds."""
    kids = np.random.SeedSequence(seed).spawn(3)
    a, b, c = (int(k.generate_state(1, dtype=np.uint64)[0]) for k in kids)
    return a, b, c


def _initial(kind: str, n: int, W: float, seed: int):
    return (init_neel if kind == "neel" else init_polarized)(n, W, seed)


# single runs


@dataclass
class TwinRun:
    drive: str
    inv_T: float
    realization: int
    seed: int
    result: ThermalizationResult
    trajectory: Trajectory
    seconds: float


def thermalization_run(
    cfg: ExperimentConfig,
    drive: str,
    inv_T: float,
    seed: int,
    *,
    N: int | None = None,
    state: str | None = None,
    W: float | None = None,
    h: float | None = None,
    realization: int = 0,
    stop_early: bool = True,
) -> TwinRun:
    """One twin trajectory and its thermalization time."""
    t0 = time.perf_counter()
    n = cfg.N if N is None else N
    s_init, s_pert, s_drive = split_seed(seed)
    ref = _initial(state or cfg.initial_state, n, cfg.W if W is None else W, s_init)
    pert = perturb_copy(ref, cfg.delta, s_pert)
    gen = DriveGenerator(DriveSpec.parse(drive, s_drive))
    params = StepParams.from_frequency(cfg.g_eff, cfg.h_eff if h is None else h, inv_T)
    stop = max(cfg.thresholds) * cfg.d_inf if stop_early else None
    traj = evolve_twin(ref, pert, gen, params, cfg.step_cap, cfg.stride(drive), stop_at=stop)
    if len(traj):
        res = extract_tau(zip(traj.step, traj.decorrelator), cfg.d_inf, cfg.thresholds)
    else:
        res = ThermalizationResult({x: None for x in sorted(cfg.thresholds)}, None, True, 0)
    return TwinRun(drive, inv_T, realization, seed, res, traj, time.perf_counter() - t0)


def run_pool(fn: Callable, tasks: Sequence, threads: int) -> list:
    """Map ``fn`` over ``tasks``; results keep task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, tasks))


# output helpers


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


class Manifest:
    def __init__(self, command: str, cfg: ExperimentConfig):
        self.command = command
        self.cfg = cfg
        self.runs: list[dict] = []
        self.warnings: list[str] = []
        self.files: dict[str, list[str]] = {}
        self.started = time.time()

    def warn(self, msg: str) -> None:
        log.warning(msg)
        self.warnings.append(msg)

    def add_run(self, **info) -> None:
        self.runs.append(info)

    def write(self, out: Path) -> None:
        write_json(out / "manifest.json", {
            "command": self.command,
            "config": self.cfg.to_dict(),
            "software_version": __version__,
            "schema_version": SCHEMA_VERSION,
            "csv_headers": self.files,
            "runs": self.runs,
            "warnings": self.warnings,
            "wall_seconds": time.time() - self.started,
            "all_censored": bool(self.runs) and all(r.get("censored") for r in self.runs),
        })


def _outdir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _csv(man: Manifest, out: Path, name: str, header: Sequence[str], rows) -> None:
    man.files[name] = list(header)
    write_csv(out / name, header, rows)


# simulate

TRAJECTORY_HEADER = ("step", "energy_ave_density", "staggered_m", "magnetization_z", "decorrelator")


def cmd_simulate(cfg: ExperimentConfig) -> dict:
    """Single twin run of ``drives[0]`` at ``inv_T[0]`` for ``min(n_steps, step_cap)`` steps."""
    out = _outdir(cfg)
    man = Manifest("simulate", cfg)
    drive, inv_T = str(cfg.drives[0]), float(cfg.inv_T[0])
    seed = derive_seed(cfg.seed, "simulate", drive, inv_T, 0)
    s_init, s_pert, s_drive = split_seed(seed)
    ref = _initial(cfg.initial_state, cfg.N, cfg.W, s_init)
    pert = perturb_copy(ref, cfg.delta, s_pert)
    gen = DriveGenerator(DriveSpec.parse(drive, s_drive))
    if cfg.dump_labels:
        (out / "labels.txt").write_text(labels_to_string(gen.clone().take(cfg.dump_labels)) + "\n")
    params = StepParams.from_frequency(cfg.g_eff, cfg.h_eff, inv_T)
    n_steps = min(cfg.n_steps, cfg.step_cap)
    t0 = time.perf_counter()
    traj = evolve_twin(ref, pert, gen, params, n_steps, cfg.stride(drive))
    rows = zip(traj.step, traj.energy_ave_density, traj.staggered_m, traj.magnetization_z, traj.decorrelator)
    _csv(man, out, "trajectory.csv", TRAJECTORY_HEADER, rows)
    man.add_run(drive=drive, inv_T=inv_T, realization=0, seed=seed, steps=traj.steps_done,
                seconds=time.perf_counter() - t0, censored=False)
    man.write(out)
    return {"trajectory": traj, "out": out}


# scaling sweep

RUNS_HEADER = ("drive", "inv_T", "realization", "seed", "tau_th", "censored", "lower_bound")
POINTS_HEADER = ("drive", "inv_T", "tau_mean", "tau_stderr", "n_used", "n_censored")


@dataclass
class SweepResult:
    runs: list[TwinRun]
    points: dict[tuple[str, float], Aggregate]
    fits: dict[str, dict]

    @property
    def all_censored(self) -> bool:
        return bool(self.runs) and all(r.result.censored for r in self.runs)


def sweep(cfg: ExperimentConfig, tag: str = "sweep", man: Manifest | None = None, **run_kw) -> SweepResult:
    """Thermalization times for every drive x frequency x realization, with fits."""
    tasks = []
    for drive in cfg.drives:
        for f in cfg.inv_T:
            for r in range(cfg.n_realizations(drive)):
                seed = derive_seed(cfg.seed, tag, str(drive), float(f), r)
                tasks.append((str(drive), float(f), r, seed))

    def work(t):
        drive, f, r, seed = t
        return thermalization_run(cfg, drive, f, seed, realization=r, **run_kw)

    runs = run_pool(work, tasks, cfg.threads)
    points: dict[tuple[str, float], Aggregate] = {}
    for drive in cfg.drives:
        for f in cfg.inv_T:
            sel = [r.result for r in runs if r.drive == str(drive) and r.inv_T == float(f)]
            agg = aggregate_tau(sel)
            points[(str(drive), float(f))] = agg
            if man is not None and agg.n_used == 0:
                man.warn(f"{drive} at 1/T={f}: all {agg.n_censored} runs censored; row dropped")
            elif man is not None and agg.n_censored:
                man.warn(f"{drive} at 1/T={f}: {agg.n_censored} censored runs; excluded from fits")
    fits = {str(d): fit_drive(cfg, str(d), points, man) for d in cfg.drives}
    if man is not None:
        for r in runs:
            man.add_run(drive=r.drive, inv_T=r.inv_T, realization=r.realization, seed=r.seed,
                        censored=r.result.censored, steps=r.trajectory.steps_done, seconds=r.seconds)
    return SweepResult(runs, points, fits)


def fit_drive(cfg: ExperimentConfig, drive: str, points: dict, man: Manifest | None = None) -> dict:
    """Power-law and exponential fits (plus log-squared for Thue-Morse) on clean rows."""
    pts = [(f, agg.tau_mean) for (d, f), agg in sorted(points.items()) if d == drive and agg.clean]
    entry: dict[str, Any] = {"points_used": len(pts)}
    if len(pts) < 3:
        msg = f"{drive}: only {len(pts)} uncensored frequencies; fits skipped"
        if man is not None:
            man.warn(msg)
        entry["warning"] = msg
        return entry
    models = [fit_power_law(pts), fit_exponential(pts)]
    if DriveSpec.parse(drive).kind == "thue-morse":
        models.append(fit_log_squared(pts, cfg.g_eff))
    for m in models:
        entry[m.model] = m.to_dict()
    entry["best"] = min(models, key=lambda m: m.residual_sum).model
    return entry


def _points_rows(points: dict):
    for (d, f), a in sorted(points.items()):
        if a.n_used == 0:
            continue
        yield d, f, a.tau_mean, a.tau_stderr, a.n_used, a.n_censored


def _run_rows(runs: list[TwinRun]):
    for r in sorted(runs, key=lambda r: (r.drive, r.inv_T, r.realization)):
        yield r.drive, r.inv_T, r.realization, r.seed, r.result.tau_th, r.result.censored, r.result.lower_bound


def cmd_scaling_sweep(cfg: ExperimentConfig, command: str = "sweep", extra: dict | None = None) -> SweepResult:
    out = _outdir(cfg)
    man = Manifest(command, cfg)
    res = sweep(cfg, man=man)
    _csv(man, out, "runs.csv", RUNS_HEADER, _run_rows(res.runs))
    _csv(man, out, "points.csv", POINTS_HEADER, _points_rows(res.points))
    fits = {"g": cfg.g_eff, "h": cfg.h_eff, "fits": res.fits}
    if extra:
        fits.update(extra)
    write_json(out / "fits.json", fits)
    man.write(out)
    return res


def cmd_h_zero(cfg: ExperimentConfig) -> SweepResult:
    """Scaling sweep with the longitudinal field switched off."""
    cfg = cfg.updated(h=0.0)
    quantum = {}
    for d in cfg.drives:
        spec = DriveSpec.parse(str(d))
        if spec.kind == "rmd":
            quantum[str(d)] = 2 * spec.order - 3
    extra = {
        "note": "informational: the spin-1/2 counterpart has alpha = 2n-3 at h = 0",
        "quantum_alpha_h0": quantum,
    }
    return cmd_scaling_sweep(cfg, command="h-zero", extra=extra)


# calibration and phase diagram

CALIB_HEADER = ("kind", "W", "energy_mean", "energy_std", "realizations")


def calibrations(cfg: ExperimentConfig) -> list[EnergyCalibration]:
    n = cfg.calib_N or cfg.N
    return [
        calibrate_energy(kind, cfg.calib_W, n, cfg.calib_realizations,
                         derive_seed(cfg.seed, "calibrate", kind), cfg.g_eff, cfg.h_eff)
        for kind in ("neel", "polarized")
    ]


def cmd_calibrate(cfg: ExperimentConfig) -> list[EnergyCalibration]:
    out = _outdir(cfg)
    man = Manifest("calibrate", cfg)
    cals = calibrations(cfg)
    for c in cals:
        if not c.is_monotone():
            man.warn(f"{c.config_kind} calibration monotone only up to W={c.W[c.monotone_prefix() - 1]}")
    _csv(man, out, "calibration.csv", CALIB_HEADER, [row for c in cals for row in c.rows()])
    man.write(out)
    return cals


PHASE_ALPHA_HEADER = ("epsilon", "drive", "state", "W", "alpha", "alpha_stderr", "n_points")
PHASE_TAU_HEADER = ("epsilon", "drive", "state", "W", "inv_T", "tau_mean", "tau_stderr", "n_used", "n_censored")


def cmd_phase_diagram(cfg: ExperimentConfig) -> dict:
    """Scaling exponent (RMD) and tau_th (all drives) versus initial energy density."""
    out = _outdir(cfg)
    man = Manifest("phase-diagram", cfg)
    cals = calibrations(cfg)
    _csv(man, out, "calibration.csv", CALIB_HEADER, [row for c in cals for row in c.rows()])
    alpha_rows, tau_rows = [], []
    results = {}
    for eps in cfg.target_energies:
        try:
            state, W = target_energy(cals, float(eps))
        except UnreachableEnergyError as exc:
            man.warn(f"epsilon={eps}: {exc}; skipped")
            continue
        sub = cfg.updated(initial_state=state, W=W)
        res = sweep(sub, tag=f"phase:{float(eps)!r}", man=man)
        results[float(eps)] = (state, W, res)
        for d in sub.drives:
            d = str(d)
            pl = res.fits[d].get("power_law")
            if DriveSpec.parse(d).kind == "rmd":
                alpha_rows.append((eps, d, state, W,
                                   pl["params"]["alpha"] if pl else None,
                                   pl["slope_stderr"] if pl else None,
                                   res.fits[d]["points_used"]))
            for f in sub.inv_T:
                a = res.points[(d, float(f))]
                tau_rows.append((eps, d, state, W, float(f), a.tau_mean, a.tau_stderr, a.n_used, a.n_censored))
    _csv(man, out, "phase_alpha.csv", PHASE_ALPHA_HEADER, alpha_rows)
    _csv(man, out, "phase_tau.csv", PHASE_TAU_HEADER, tau_rows)
    man.write(out)
    return results


# finite size

FINITE_SIZE_HEADER = ("N", "inv_T", "drive", "tau_mean", "tau_stderr", "n_used", "n_censored")


def cmd_finite_size(cfg: ExperimentConfig) -> dict:
    out = _outdir(cfg)
    man = Manifest("finite-size", cfg)
    tasks = []
    for n in cfg.N_list:
        if n < 3:
            man.warn(f"N={n} is below the minimum meaningful size: each site is its own neighbour twice")
        for drive in cfg.drives:
            for f in cfg.inv_T:
                for r in range(cfg.n_realizations(str(drive))):
                    tasks.append((n, str(drive), float(f), r, derive_seed(cfg.seed, "finite-size", n, str(drive), float(f), r)))

    def work(t):
        n, drive, f, r, seed = t
        return n, thermalization_run(cfg, drive, f, seed, N=n, realization=r)

    done = run_pool(work, tasks, cfg.threads)
    table = {}
    for n in cfg.N_list:
        for drive in cfg.drives:
            for f in cfg.inv_T:
                sel = [run.result for m, run in done if m == n and run.drive == str(drive) and run.inv_T == float(f)]
                table[(n, str(drive), float(f))] = aggregate_tau(sel)
    for n, run in done:
        man.add_run(N=n, drive=run.drive, inv_T=run.inv_T, realization=run.realization, seed=run.seed,
                    censored=run.result.censored, steps=run.trajectory.steps_done, seconds=run.seconds)
    rows = [(n, f, d, a.tau_mean, a.tau_stderr, a.n_used, a.n_censored)
            for (n, d, f), a in sorted(table.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1]))]
    _csv(man, out, "finite_size.csv", FINITE_SIZE_HEADER, rows)
    man.write(out)
    return table


# time rondeau crystal

MAG_HEADER = ("drive", "g_tc", "realization", "step", "magnetization_z")
LIFETIME_HEADER = ("drive", "g_tc", "realization", "lifetime", "censored", "lower_bound")
LONG_TIME_HEADER = ("drive", "g_tc", "realization", "step", "magnetization_z")


@dataclass
class RondeauRun:
    drive: str
    g_tc: float
    realization: int
    seed: int
    steps: np.ndarray
    series: np.ndarray
    lifetime: Any
    seconds: float


def rondeau_run(cfg: ExperimentConfig, drive: str, g_tc: float, seed: int, realization: int = 0) -> RondeauRun:
    """Stroboscopic ``<S^z>`` every ``sample_every`` periods with ``g = g_tc * 2*pi/T``."""
    t0 = time.perf_counter()
    s_init, _, s_drive = split_seed(seed)
    lat = _initial(cfg.rondeau_state, cfg.N, cfg.W, s_init)
    T = 1.0 / cfg.rondeau_inv_T
    params = StepParams(g_tc * 2.0 * math.pi / T, cfg.h_eff, T)
    gen = DriveGenerator(DriveSpec.parse(drive, s_drive))
    m0 = magnetization_z(lat)
    traj = evolve(lat, gen, params, min(cfg.rondeau_periods, cfg.step_cap), cfg.sample_every)
    steps = np.concatenate([[0], traj.step])
    series = np.concatenate([[m0], traj.magnetization_z])
    life = rondeau_lifetime(series, cfg.s_cr, cfg.sample_every)
    return RondeauRun(drive, float(g_tc), realization, seed, steps, series, life, time.perf_counter() - t0)


def rondeau(cfg: ExperimentConfig) -> list[RondeauRun]:
    tasks = []
    for drive in cfg.drives:
        for gtc in cfg.g_tc:
            for r in range(cfg.n_realizations(str(drive))):
                tasks.append((str(drive), float(gtc), r, derive_seed(cfg.seed, "rondeau", str(drive), float(gtc), r)))
    return run_pool(lambda t: rondeau_run(cfg, t[0], t[1], t[3], t[2]), tasks, cfg.threads)


def cmd_rondeau(cfg: ExperimentConfig) -> list[RondeauRun]:
    out = _outdir(cfg)
    man = Manifest("rondeau", cfg)
    runs = rondeau(cfg)
    mag, life, late = [], [], []
    for r in runs:
        mag.extend((r.drive, r.g_tc, r.realization, int(s), m) for s, m in zip(r.steps, r.series))
        life.append((r.drive, r.g_tc, r.realization, r.lifetime.lifetime, r.lifetime.censored, r.lifetime.lower_bound))
        late.append((r.drive, r.g_tc, r.realization, int(r.steps[-1]), r.series[-1]))
        man.add_run(drive=r.drive, g_tc=r.g_tc, realization=r.realization, seed=r.seed,
                    censored=r.lifetime.censored, seconds=r.seconds)
    _csv(man, out, "magnetization.csv", MAG_HEADER, mag)
    _csv(man, out, "lifetimes.csv", LIFETIME_HEADER, life)
    _csv(man, out, "long_time.csv", LONG_TIME_HEADER, late)
    man.write(out)
    return runs
