"""Density-matrix propagation on a periodic 1-D lattice with dephasing.

Each step applies the exact lattice free propagator ``rho <- U rho U^dagger``
and then multiplies every coherence ``rho[i, j]`` by
``exp(-Gamma(dist(i, j)) dt)``.  :func:`path_sum_oracle` evaluates the same
Trotterized dynamics by enumerating every pair of lattice paths, so the two
routes must agree to rounding.

Lattices here are validation-sized; physical scales are handled in closed
form by :mod:`decoplate.timescales` and :mod:`decoplate.interference`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError, SizeError
from .profiles import DecoherenceProfile, influence_exponents, rate_array
from .quantities import CODATA2018, metre, second

MAX_PATH_PAIRS = 10**9
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
EIGEN_TOL = -1e-10


@dataclass(frozen=True)
class Lattice:
    n_sites: int
    spacing: float  # m
    dt: float  # s
    n_steps: int
    mass: float  # kg

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise DomainError(f"lattice needs at least 2 sites, got {self.n_sites!r}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise DomainError(f"n_steps must be a non-negative integer, got {self.n_steps!r}")
        if not (0 < self.spacing < math.inf and 0 < self.dt < math.inf and 0 < self.mass < math.inf):
            raise DomainError("lattice spacing and mass and dt must be finite and > 0")

    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n_sites, d=self.spacing)

    def distances(self) -> np.ndarray:
        """Open-line site separation ``|i - j| * spacing`` in metres.

        Not the periodic metric: a Gaussian of the wrapped distance is not a
        positive semidefinite kernel (G=4 already fails), so dephasing with it
        would break positivity of rho.
        """
        idx = np.arange(self.n_sites)
        return np.abs(idx[:, None] - idx[None, :]) * self.spacing


def kinetic_step(lat: Lattice) -> np.ndarray:
    k = lat.wavenumbers()
    phases = np.exp(-1j * CODATA2018.hbar * k**2 * lat.dt / (2 * lat.mass))
    # U = F^-1 diag(phases) F, assembled column by column
    U = np.fft.ifft(phases[:, None] * np.fft.fft(np.eye(lat.n_sites), axis=0), axis=0)
    defect = np.max(np.abs(U.conj().T @ U - np.eye(lat.n_sites)))
    if defect > 1e-12:
        raise NumericError(f"kinetic propagator not unitary: max |U^dag U - I| = {defect:.3g}")
    return U


def dephasing_factors(profile: DecoherenceProfile, lat: Lattice) -> np.ndarray:
    return np.exp(-rate_array(profile, lat.distances()) * lat.dt)


def dephase_step(rho: np.ndarray, profile: DecoherenceProfile, lat: Lattice) -> np.ndarray:
    return rho * dephasing_factors(profile, lat)


def pure_state(amplitudes, n_sites: int) -> np.ndarray:
    """State vector from ``(site, amplitude)`` pairs; repeated sites add."""
    psi = np.zeros(n_sites, dtype=complex)
    for site, amp in amplitudes:
        if not 0 <= site < n_sites:
            raise DomainError(f"site {site} outside lattice of {n_sites} sites")
        psi[site] += amp
    norm = np.vdot(psi, psi).real
    if abs(norm - 1) > 1e-10:
        raise DomainError(f"initial amplitudes have norm {norm!r}, expected 1")
    return psi


def density_from_state(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def check_density_matrix(rho: np.ndarray, where: str = "") -> dict:
    """Raise NumericError unless rho is Hermitian, unit-trace and PSD."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace_error = float(abs(np.trace(rho) - 1))
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
    diag = {"hermitian_error": herm, "trace_error": trace_error, "min_eigenvalue": min_eig}
    if herm > HERMITIAN_TOL or trace_error > TRACE_TOL or min_eig < EIGEN_TOL:
        raise NumericError(f"density matrix invariant violated{' ' + where if where else ''}: {diag}")
    return diag


def evolve(initial: np.ndarray, lat: Lattice, profile: DecoherenceProfile,
           check: bool = True) -> np.ndarray:
    rho = np.array(initial, dtype=complex)
    if rho.shape != (lat.n_sites, lat.n_sites):
        raise DomainError(f"initial state has shape {rho.shape}, lattice has {lat.n_sites} sites")
    if check:
        check_density_matrix(rho, "in initial state")
    U = kinetic_step(lat)
    Ud = U.conj().T
    factors = dephasing_factors(profile, lat)
    for step in range(lat.n_steps):
        rho = (U @ rho @ Ud) * factors
        if check:
            check_density_matrix(rho, f"after step {step + 1}")
    return rho


def enumerate_paths(n_sites: int, n_steps: int) -> np.ndarray:
    """All site sequences of length n_steps + 1, in lexicographic order."""
    return np.indices((n_sites,) * (n_steps + 1)).reshape(n_steps + 1, -1).T


def path_amplitudes(psi: np.ndarray, U: np.ndarray, paths: np.ndarray) -> np.ndarray:
    amp = psi[paths[:, 0]].astype(complex)
    for k in range(1, paths.shape[1]):
        amp = amp * U[paths[:, k], paths[:, k - 1]]
    return amp


def path_sum_oracle(initial_amplitudes, lat: Lattice, profile: DecoherenceProfile,
                    block_pairs: int = 1 << 22) -> np.ndarray:
    """Brute-force double sum over forward and backward lattice paths.

    ``rho[Q, Q'] = sum_{T -> Q} sum_{T' -> Q'} A_T conj(A_T') F[T, T']``
    where ``A_T`` is the product of propagator entries along T and
    ``F = exp(-sum_k Gamma(dist(x_k, x'_k)) dt)`` over the post-step positions.
    """
    G, K = lat.n_sites, lat.n_steps
    if G ** (2 * (K + 1)) > MAX_PATH_PAIRS:
        raise SizeError(
            f"{G}**(2*({K}+1)) path pairs exceeds the limit of {MAX_PATH_PAIRS:.0e}; reduce sites or steps")
    psi = pure_state(initial_amplitudes, G)
    U = kinetic_step(lat)
    paths = enumerate_paths(G, K)
    amp = path_amplitudes(psi, U, paths)
    ends = np.eye(G)[paths[:, -1]]
    dist = lat.distances()
    n_paths = len(paths)
    rho = np.zeros((G, G), dtype=complex)
    if K == 0:
        return np.outer(psi, psi.conj())

    rows = max(1, block_pairs // n_paths)
    later = paths[:, 1:]
    for start in range(0, n_paths, rows):
        stop = min(start + rows, n_paths)
        seps = dist[later[start:stop, None, :], later[None, :, :]]
        weight = np.exp(-influence_exponents(profile, seps, lat.dt))
        block = amp[start:stop, None] * amp.conj()[None, :] * weight
        rho += ends[start:stop].T @ block @ ends
    return rho


# Validation-scale lattice: kinetic phases of order one radian per step and
# one-site dephasing of 1/3 per step.

def desk_lattice(n_sites: int, n_steps: int, spacing: float = 1e-6,
                 mass: float = CODATA2018.m_e, phase: float = 1.0) -> Lattice:
    """Lattice whose fastest mode turns by ``phase`` radians per step."""
    k_max = np.pi / spacing
    dt = phase * 2 * mass / (CODATA2018.hbar * k_max**2)
    return Lattice(n_sites, spacing, dt, n_steps, mass)


def desk_profile(kind: str, lat: Lattice, strength: float = 1 / 3) -> DecoherenceProfile:
    """Profile with ``Gamma(spacing) * dt == strength``; correlation length one site."""
    tau_r = lat.dt / strength
    return DecoherenceProfile(kind, second(tau_r), metre(lat.spacing), metre(lat.spacing))


def random_state(n_sites: int, seed: int) -> list[tuple[int, complex]]:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=n_sites) + 1j * rng.normal(size=n_sites)
    psi /= np.linalg.norm(psi)
    return [(i, complex(a)) for i, a in enumerate(psi)]


def oracle_report(n_sites: int, n_steps: int, kind: str, seed: int = 0) -> dict:
    lat = desk_lattice(n_sites, n_steps)
    profile = desk_profile(kind, lat)
    amps = random_state(n_sites, seed)
    rho0 = density_from_state(pure_state(amps, n_sites))
    by_steps = evolve(rho0, lat, profile)
    by_paths = path_sum_oracle(amps, lat, profile)
    return {
        "max_abs_entry_diff": float(np.max(np.abs(by_steps - by_paths))),
        "trace_error": max(float(abs(np.trace(r) - 1)) for r in (by_steps, by_paths)),
        "min_eigenvalue": min(float(np.linalg.eigvalsh((r + r.conj().T) / 2)[0])
                              for r in (by_steps, by_paths)),
        "g": n_sites,
        "k": n_steps,
        "seed": seed,
    }


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def classical_walk(p0: np.ndarray, lat: Lattice) -> np.ndarray:
    """Site populations when coherence is destroyed after every step."""
    P = np.abs(kinetic_step(lat)) ** 2
    p = np.asarray(p0, dtype=float)
    for _ in range(lat.n_steps):
        p = P @ p
    return p


def fringe_contrast(populations: np.ndarray, classical: np.ndarray) -> float:
    """Largest interference excess over the classical two-lump populations,
    relative to the classical peak."""
    return float(np.max(np.abs(populations - classical)) / np.max(classical))


def edge_mass(rho: np.ndarray, margin: int) -> float:
    """Probability within ``margin`` sites of the periodic seam."""
    p = np.real(np.diag(rho))
    return float(p[:margin].sum() + p[len(p) - margin:].sum()) if margin else 0.0
