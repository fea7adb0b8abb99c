"""Exact stroboscopic evolution of the spin lattice.

Each period applies one of two exact rotations: ``R_x`` by the uniform angle
``g*T`` about x, or ``R_z`` by the site-dependent angle ``kappa_ij*T`` about z,
where ``kappa_ij`` is the neighbour sum of S^z plus ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from rmdspin import _kernels as K
from rmdspin.drive import DriveGenerator
from rmdspin.lattice import SpinLattice

CHUNK = 1 << 16


@dataclass(frozen=True)
class StepParams:
    g: float
    h: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"period T must be positive, got {self.T}")

    @classmethod
    def from_frequency(cls, g: float, h: float, inv_T: float) -> StepParams:
        return cls(g, h, 1.0 / inv_T)


@dataclass(frozen=True)
class EvolutionRecord:
    step: int
    energy_z_density: float
    energy_x_density: float
    staggered_m: float
    magnetization_z: float
    decorrelator: float | None = None

    @property
    def energy_ave_density(self) -> float:
        return 0.5 * (self.energy_z_density + self.energy_x_density)


class Trajectory:
    """Column-oriented stroboscopic record of an evolution.

    Iterating yields :class:`EvolutionRecord` rows.
    """

    columns = ("step", "energy_z_density", "energy_x_density", "staggered_m", "magnetization_z", "decorrelator")

    def __init__(self, table: np.ndarray, twin: bool, steps_done: int):
        self._table = table
        self.twin = twin
        self.steps_done = steps_done

    def __len__(self) -> int:
        return self._table.shape[0]

    def __iter__(self) -> Iterator[EvolutionRecord]:
        for row in self._table:
            yield EvolutionRecord(
                int(row[K.REC_STEP]),
                float(row[K.REC_EZ]),
                float(row[K.REC_EX]),
                float(row[K.REC_STAG]),
                float(row[K.REC_MZ]),
                float(row[K.REC_D]) if self.twin else None,
            )

    @property
    def step(self) -> np.ndarray:
        return self._table[:, K.REC_STEP].astype(np.int64)

    @property
    def energy_z_density(self) -> np.ndarray:
        return self._table[:, K.REC_EZ]

    @property
    def energy_x_density(self) -> np.ndarray:
        return self._table[:, K.REC_EX]

    @property
    def energy_ave_density(self) -> np.ndarray:
        return 0.5 * (self._table[:, K.REC_EZ] + self._table[:, K.REC_EX])

    @property
    def staggered_m(self) -> np.ndarray:
        return self._table[:, K.REC_STAG]

    @property
    def magnetization_z(self) -> np.ndarray:
        return self._table[:, K.REC_MZ]

    @property
    def decorrelator(self) -> np.ndarray:
        return self._table[:, K.REC_D]

    def records(self) -> list[EvolutionRecord]:
        return list(self)


def kappa(lattice: SpinLattice, i: int, j: int, h: float) -> float:
    """Effective z-field on site ``(i, j)`` with periodic wrapping."""
    n = lattice.n_linear
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"site ({i}, {j}) outside {n}x{n} lattice")
    sz = lattice.spins[..., 2]
    return float(sz[(i + 1) % n, j] + sz[(i - 1) % n, j] + sz[i, (j + 1) % n] + sz[i, (j - 1) % n] + h)


def kappa_field(lattice: SpinLattice, h: float) -> np.ndarray:
    return K.kappa_field(lattice.spins, float(h))


def apply_x_step(lattice: SpinLattice, params: StepParams) -> SpinLattice:
    """One period under H_x: rotate every spin by ``g*T`` about x."""
    out = lattice.copy()
    angle = params.g * params.T
    K.x_rotate(out.spins, math.cos(angle), math.sin(angle))
    return out


def apply_z_step(lattice: SpinLattice, params: StepParams, reverse_order: bool = False) -> SpinLattice:
    """One period under H_z: rotate each spin by ``kappa_ij*T`` about z.

    ``reverse_order`` sweeps the sites backwards; the result is identical.
    """
    out = lattice.copy()
    fn = K.z_rotate_reversed if reverse_order else K.z_rotate
    fn(out.spins, float(params.h), float(params.T))
    return out


def _record_buffer(n_labels: int, step0: int, every: int) -> np.ndarray:
    rows = (step0 + n_labels) // every - step0 // every
    return np.empty((rows, K.REC_WIDTH))


def evolve(
    lattice: SpinLattice,
    gen: DriveGenerator,
    params: StepParams,
    n_steps: int,
    record_every: int = 1,
) -> Trajectory:
    """Advance ``lattice`` in place by ``n_steps`` periods drawn from ``gen``.

    Observables are recorded after every step whose index is a multiple of
    ``record_every`` (step 0 is not recorded).
    """
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    angle = params.g * params.T
    cg, sg = math.cos(angle), math.sin(angle)
    parts = []
    done = 0
    while done < n_steps:
        chunk = min(CHUNK, n_steps - done)
        labels = gen.take(chunk)
        buf = _record_buffer(chunk, done, record_every)
        rows = K.run_single(lattice.spins, labels, cg, sg, float(params.g), float(params.h), float(params.T),
                            done, record_every, buf)
        parts.append(buf[:rows])
        done += chunk
    return Trajectory(_concat(parts), twin=False, steps_done=done)


def evolve_twin(
    reference: SpinLattice,
    perturbed: SpinLattice,
    gen: DriveGenerator,
    params: StepParams,
    n_steps: int,
    record_every: int = 1,
    stop_at: float | None = None,
) -> Trajectory:
    """Evolve a reference/perturbed pair in place under identical labels.

    Records include the decorrelator between the two lattices. If ``stop_at``
    is given, evolution ends at the first recorded step whose decorrelator
    reaches it; ``gen`` is then left exactly at that step.
    """
    if reference.spins.shape != perturbed.spins.shape:
        raise ValueError(
            f"lattice sizes differ: {reference.n_linear} vs {perturbed.n_linear}"
        )
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    angle = params.g * params.T
    cg, sg = math.cos(angle), math.sin(angle)
    stop_d = math.inf if stop_at is None else float(stop_at)
    parts = []
    done = 0
    while done < n_steps:
        chunk = min(CHUNK, n_steps - done)
        saved = gen.clone() if stop_at is not None else None
        labels = gen.take(chunk)
        buf = _record_buffer(chunk, done, record_every)
        used, rows = K.run_twin(reference.spins, perturbed.spins, labels, cg, sg, float(params.g),
                                float(params.h), float(params.T), done, record_every, buf, stop_d)
        parts.append(buf[:rows])
        done += used
        if used < chunk:
            saved.take(used)
            gen.__dict__.update(saved.__dict__)
            break
    return Trajectory(_concat(parts), twin=True, steps_done=done)


def _concat(parts: list[np.ndarray]) -> np.ndarray:
    if not parts:
        return np.empty((0, K.REC_WIDTH))
    return np.concatenate(parts, axis=0)
