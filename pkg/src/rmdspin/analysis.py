"""Thermalization times, scaling fits, energy calibration and TRC lifetimes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from rmdspin.lattice import init_neel, init_polarized
from rmdspin.observables import D_INF, energy_ave_density

DEFAULT_THRESHOLDS = (0.90, 0.89, 0.88)


class UnreachableEnergyError(ValueError):
    """Target energy density lies outside the calibrated range."""


@dataclass(frozen=True)
class ThermalizationResult:
    """Threshold crossings of ``d/d_inf`` for one trajectory, in steps.

    A censored result has ``tau_th = None``; ``lower_bound`` is then the last
    observed step, which every missing crossing must exceed.
    """

    crossing_times: dict[float, int | None]
    tau_th: float | None
    censored: bool
    lower_bound: int


def extract_tau(
    d_series: Iterable[tuple[int, float]],
    d_inf: float = D_INF,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
) -> ThermalizationResult:
    """First steps at which ``d/d_inf`` reaches each threshold, and their mean."""
    series = list(d_series)
    if not series:
        raise ValueError("empty decorrelator series")
    for x in thresholds:
        if not 0 < x < 1:
            raise ValueError(f"threshold {x} outside (0, 1)")
    steps = np.array([s for s, _ in series], dtype=np.int64)
    d = np.array([v for _, v in series], dtype=np.float64)
    crossings: dict[float, int | None] = {}
    for x in sorted(thresholds):
        hit = np.flatnonzero(d >= x * d_inf)
        crossings[x] = int(steps[hit[0]]) if hit.size else None
    censored = any(v is None for v in crossings.values())
    tau = None if censored else float(np.mean([crossings[x] for x in crossings]))
    return ThermalizationResult(crossings, tau, censored, int(steps[-1]))


@dataclass(frozen=True)
class FitResult:
    """Least-squares line through log-transformed data.

    ``params`` holds the model constants (``alpha``/``beta``/``C`` plus a
    prefactor); ``slope_stderr`` is the standard error of the fitted slope.
    """

    model: str
    params: dict[str, float]
    r_squared: float
    residual_sum: float
    slope_stderr: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "params": dict(self.params),
            "r_squared": self.r_squared,
            "residual_sum": self.residual_sum,
            "slope_stderr": self.slope_stderr,
            "n_points": self.n_points,
        }


def _points(points) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(points), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be (1/T, tau) pairs")
    if arr.shape[0] < 3:
        raise ValueError(f"need at least 3 points, got {arr.shape[0]}")
    if np.any(~np.isfinite(arr)):
        raise ValueError("points must be finite")
    if np.any(arr <= 0):
        raise ValueError("frequencies and times must be positive")
    return arr[:, 0], arr[:, 1]


def _line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float, float]:
    if np.ptp(x) == 0:
        raise ValueError("regressor is constant; slope undefined")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ssr = float(resid @ resid)
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ssr / sst if sst > 0 else 1.0
    dof = x.size - 2
    sxx = float(((x - x.mean()) ** 2).sum())
    stderr = math.sqrt(ssr / dof / sxx) if dof > 0 else math.nan
    return float(slope), float(intercept), r2, ssr, stderr


def fit_power_law(points) -> FitResult:
    """``tau = prefactor * (1/T)**alpha``, fitted on log-log axes."""
    f, tau = _points(points)
    slope, icpt, r2, ssr, se = _line(np.log(f), np.log(tau))
    return FitResult("power_law", {"alpha": slope, "prefactor": math.exp(icpt)}, r2, ssr, se, f.size)


def fit_exponential(points) -> FitResult:
    """``tau = A * exp(beta/T)``, fitted on semi-log axes."""
    f, tau = _points(points)
    slope, icpt, r2, ssr, se = _line(f, np.log(tau))
    return FitResult("exponential", {"beta": slope, "A": math.exp(icpt)}, r2, ssr, se, f.size)


def fit_log_squared(points, g: float) -> FitResult:
    """``tau = prefactor * exp(C * ln(T**-1 / g)**2)``."""
    f, tau = _points(points)
    if g <= 0:
        raise ValueError("g must be positive")
    x = np.log(f / g) ** 2
    slope, icpt, r2, ssr, se = _line(x, np.log(tau))
    return FitResult("log_squared", {"C": slope, "prefactor": math.exp(icpt)}, r2, ssr, se, f.size)


@dataclass(frozen=True)
class Aggregate:
    """Mean and standard error of tau_th over realizations at one setting."""

    tau_mean: float | None
    tau_stderr: float | None
    n_used: int
    n_censored: int

    @property
    def clean(self) -> bool:
        return self.n_used > 0 and self.n_censored == 0


def aggregate_tau(results: Sequence[ThermalizationResult]) -> Aggregate:
    """Average uncensored tau_th values; censored runs are counted, not averaged."""
    taus = np.array([r.tau_th for r in results if not r.censored], dtype=np.float64)
    n_cens = sum(r.censored for r in results)
    if taus.size == 0:
        return Aggregate(None, None, 0, n_cens)
    stderr = float(taus.std(ddof=1) / math.sqrt(taus.size)) if taus.size > 1 else 0.0
    return Aggregate(float(taus.mean()), stderr, int(taus.size), n_cens)


@dataclass
class EnergyCalibration:
    """Mean initial energy density versus noise width ``W`` for one state kind."""

    config_kind: str
    W: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    realizations: int
    g: float = 0.0
    h: float = 0.0
    meta: dict = field(default_factory=dict)

    def monotone_prefix(self) -> int:
        """Length of the leading strictly monotone stretch of the table."""
        m = self.mean
        if m.size < 2:
            return m.size
        direction = np.sign(m[1] - m[0])
        if direction == 0:
            return 1
        k = 1
        while k < m.size and np.sign(m[k] - m[k - 1]) == direction:
            k += 1
        return k

    def is_monotone(self) -> bool:
        return self.monotone_prefix() == self.mean.size

    def rows(self) -> list[tuple]:
        return [
            (self.config_kind, float(w), float(m), float(s), self.realizations)
            for w, m, s in zip(self.W, self.mean, self.std)
        ]


def calibrate_energy(
    kind: str,
    W_grid: Sequence[float],
    n_linear: int,
    realizations: int,
    seed: int,
    g: float = 0.9045,
    h: float = 0.809,
) -> EnergyCalibration:
    """Monte Carlo estimate of ``<H_ave(0)>/N**2`` for each ``W``."""
    if realizations < 1:
        raise ValueError("realizations must be >= 1")
    builder = {"neel": init_neel, "polarized": init_polarized}.get(kind)
    if builder is None:
        raise ValueError(f"unknown configuration kind {kind!r}")
    seq = np.random.SeedSequence(seed)
    seeds = [int(s.generate_state(1)[0]) for s in seq.spawn(realizations)]
    means, stds = [], []
    for w in W_grid:
        e = np.array([energy_ave_density(builder(n_linear, float(w), s), g, h) for s in seeds])
        means.append(e.mean())
        stds.append(e.std(ddof=1) if e.size > 1 else 0.0)
    return EnergyCalibration(kind, np.asarray(W_grid, dtype=float), np.array(means), np.array(stds),
                             realizations, g, h)


def target_energy(calibrations, epsilon: float) -> tuple[str, float]:
    """Pick the state kind and ``W`` that prepare energy density ``epsilon``.

    Negative targets use the Neel table and positive ones the polarized
    table; zero tries both. Only the leading monotone part of a table is
    interpolated, and no extrapolation is done.
    """
    if isinstance(calibrations, EnergyCalibration):
        calibrations = [calibrations]
    by_kind = {c.config_kind: c for c in calibrations}
    order = ["neel"] if epsilon < 0 else ["polarized"] if epsilon > 0 else ["neel", "polarized"]
    for kind in order:
        cal = by_kind.get(kind)
        if cal is None:
            continue
        k = cal.monotone_prefix()
        m, w = cal.mean[:k], cal.W[:k]
        if k == 1:
            if m[0] == epsilon:
                return kind, float(w[0])
            continue
        lo, hi = min(m[0], m[-1]), max(m[0], m[-1])
        if lo <= epsilon <= hi:
            if m[0] > m[-1]:
                m, w = m[::-1], w[::-1]
            return kind, float(np.interp(epsilon, m, w))
    raise UnreachableEnergyError(f"energy density {epsilon} outside calibrated range")


@dataclass(frozen=True)
class LifetimeResult:
    lifetime: int | None
    censored: bool
    lower_bound: int


def rondeau_lifetime(series: Sequence[float], s_cr: float = 0.25, sample_every: int = 4) -> LifetimeResult:
    """Periods until the stroboscopic ``|<S^z>|`` first drops below ``s_cr``.

    ``series[l]`` is the magnetization at ``t = sample_every * l * T``, with
    ``series[0]`` the initial value. The magnitude is used because ``<S^z>``
    alternates in sign under time-crystalline order.
    """
    arr = np.asarray(series, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty magnetization series")
    below = np.flatnonzero(np.abs(arr) < s_cr)
    if below.size == 0:
        return LifetimeResult(None, True, sample_every * (arr.size - 1))
    t = sample_every * int(below[0])
    return LifetimeResult(t, False, t)
