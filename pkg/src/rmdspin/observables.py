"""Energies, magnetizations and the twin-trajectory decorrelator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rmdspin.lattice import SpinLattice, sublattice_sign

D_INF = float(np.sqrt(2.0))


@dataclass(frozen=True)
class ObservableSet:
    energy_z_density: float
    energy_x_density: float
    staggered_m: float
    magnetization_z: float
    decorrelator: float | None = None

    @property
    def energy_ave_density(self) -> float:
        return 0.5 * (self.energy_z_density + self.energy_x_density)


def energy_z(lattice: SpinLattice, h: float) -> float:
    """Total Ising-plus-longitudinal-field energy (periodic bonds)."""
    sz = lattice.spins[..., 2]
    bonds = sz * (np.roll(sz, -1, axis=0) + np.roll(sz, -1, axis=1))
    return float(np.sum(bonds) + h * np.sum(sz))


def energy_x(lattice: SpinLattice, g: float) -> float:
    """Total transverse-field energy ``g * sum S^x``."""
    return float(g * np.sum(lattice.spins[..., 0]))


def energy_ave_density(lattice: SpinLattice, g: float, h: float) -> float:
    return 0.5 * (energy_z(lattice, h) + energy_x(lattice, g)) / lattice.n_sites


def staggered_magnetization(lattice: SpinLattice) -> float:
    """Per-site ``sum (-1)**(i+j) S^z``."""
    sz = lattice.spins[..., 2]
    return float(np.sum(sublattice_sign(lattice.n_linear) * sz) / lattice.n_sites)


def magnetization_z(lattice: SpinLattice) -> float:
    return float(np.mean(lattice.spins[..., 2]))


def decorrelator(a: SpinLattice, b: SpinLattice) -> float:
    """Root-mean-square per-spin distance between two lattices.

    Independent uniformly random lattices give ``sqrt(2)``; antipodal ones give 2.
    """
    if a.spins.shape != b.spins.shape:
        raise ValueError(f"lattice sizes differ: {a.n_linear} vs {b.n_linear}")
    diff = a.spins - b.spins
    return float(np.sqrt(np.sum(diff * diff) / a.n_sites))


def measure(lattice: SpinLattice, g: float, h: float, other: SpinLattice | None = None) -> ObservableSet:
    n = lattice.n_sites
    return ObservableSet(
        energy_z(lattice, h) / n,
        energy_x(lattice, g) / n,
        staggered_magnetization(lattice),
        magnetization_z(lattice),
        decorrelator(lattice, other) if other is not None else None,
    )
