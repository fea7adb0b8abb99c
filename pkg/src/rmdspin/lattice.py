"""Spin configurations on an N x N periodic square lattice.

Spins are stored as a float64 array of shape ``(N, N, 3)`` holding the
Cartesian components of unit vectors. Row-major order means site ``(i, j)``
is entry ``i * N + j`` of the flattened ``(N*N, 3)`` view.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

# below this sin(theta) the azimuth is undefined and taken as zero
POLE_EPS = 1e-14


class SpinLattice:
    """Classical unit spins on an ``n_linear x n_linear`` torus.

    Attributes:
        spins (np.ndarray): ``(N, N, 3)`` array of unit vectors.
    """

    boundary = "periodic"

    def __init__(self, spins: np.ndarray):
        spins = np.ascontiguousarray(spins, dtype=np.float64)
        if spins.ndim != 3 or spins.shape[0] != spins.shape[1] or spins.shape[2] != 3:
            raise ValueError(f"spins must have shape (N, N, 3), got {spins.shape}")
        if spins.shape[0] < 1:
            raise ValueError("lattice must contain at least one site")
        self.spins = spins

    @property
    def n_linear(self) -> int:
        return self.spins.shape[0]

    @property
    def n_sites(self) -> int:
        return self.n_linear * self.n_linear

    def copy(self) -> SpinLattice:
        return SpinLattice(self.spins.copy())

    def spin(self, i: int, j: int) -> np.ndarray:
        return self.spins[i % self.n_linear, j % self.n_linear].copy()

    def flat(self) -> np.ndarray:
        """Row-major ``(N*N, 3)`` view of the spins."""
        return self.spins.reshape(-1, 3)

    def norm_error(self) -> float:
        """Largest deviation of any spin length from one."""
        return float(np.max(np.abs(np.linalg.norm(self.spins, axis=-1) - 1.0)))

    def angles(self) -> tuple[np.ndarray, np.ndarray]:
        """Polar and azimuthal angles of every spin.

        The azimuth is set to zero wherever ``sin(theta) < 1e-14``.
        """
        x, y, z = self.spins[..., 0], self.spins[..., 1], self.spins[..., 2]
        theta = np.arccos(np.clip(z, -1.0, 1.0))
        phi = np.arctan2(y, x)
        phi = np.where(np.sin(theta) < POLE_EPS, 0.0, phi)
        return theta, phi

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpinLattice):
            return NotImplemented
        return self.spins.shape == other.spins.shape and bool(np.array_equal(self.spins, other.spins))

    def __repr__(self) -> str:
        return f"SpinLattice(n_linear={self.n_linear})"


def from_angles(theta: np.ndarray, phi: np.ndarray) -> SpinLattice:
    """Build a lattice from polar and azimuthal angle grids.

    Args:
        theta: ``(N, N)`` polar angles in radians.
        phi: ``(N, N)`` azimuthal angles in radians.

    Raises:
        ValueError: If the grids are not square or differ in shape.
    """
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    if theta.shape != phi.shape:
        raise ValueError(f"angle grids differ in shape: {theta.shape} vs {phi.shape}")
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise ValueError(f"angle grids must be square, got {theta.shape}")
    sin_t = np.sin(theta)
    spins = np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), np.cos(theta)], axis=-1)
    return SpinLattice(spins)


def sublattice_sign(n_linear: int) -> np.ndarray:
    """Checkerboard ``(-1)**(i+j)`` as a float array."""
    i, j = np.indices((n_linear, n_linear))
    return np.where((i + j) % 2 == 0, 1.0, -1.0)


def _noisy_angles(n_linear: int, width: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    if n_linear < 2:
        raise ValueError(f"n_linear must be >= 2, got {n_linear}")
    if width < 0:
        raise ValueError(f"W must be non-negative, got {width}")
    rng = np.random.default_rng(seed)
    theta = rng.normal(0.0, TWO_PI * width, size=(n_linear, n_linear))
    phi = rng.uniform(0.0, TWO_PI, size=(n_linear, n_linear))
    return theta, phi


def init_neel(n_linear: int, W: float, seed: int) -> SpinLattice:
    """Noisy Neel state: up on even ``i+j``, down on odd ``i+j``.

    Polar angles are drawn from ``Normal(0, 2*pi*W)`` and azimuths uniformly;
    odd sites use ``pi - theta`` so both sublattices carry the same noise.
    """
    theta, phi = _noisy_angles(n_linear, W, seed)
    odd = sublattice_sign(n_linear) < 0
    theta = np.where(odd, np.pi - theta, theta)
    return from_angles(theta, phi)


def init_polarized(n_linear: int, W: float, seed: int) -> SpinLattice:
    """Noisy ferromagnetic state polarized along +z."""
    theta, phi = _noisy_angles(n_linear, W, seed)
    return from_angles(theta, phi)


def perturb_copy(source: SpinLattice, delta_scale: float, seed: int) -> SpinLattice:
    """Copy of ``source`` with both angles of every spin shifted by ``2*pi*delta_scale*delta``.

    One standard normal ``delta`` is drawn per site and shared by the polar
    and azimuthal shifts. ``delta_scale == 0`` returns an exact copy.
    """
    if delta_scale == 0:
        return source.copy()
    theta, phi = source.angles()
    rng = np.random.default_rng(seed)
    shift = TWO_PI * delta_scale * rng.standard_normal(theta.shape)
    return from_angles(theta + shift, phi + shift)
