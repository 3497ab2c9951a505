"""Numerical oracles for the closed-form dynamics.

Everything is computed sector by sector: H conserves the total photon
number, so exp(-iHt) is block diagonal and each block is exact. The matrix
exponential and the RK4 integrator run on the compiled kernels when
available (see :mod:`chiralcav.kernels`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dynamics import HeisenbergCoeffs
from .fock import FockBasis, FockState, sector
from .operators import ModelParams, OperatorMatrix, ladder_ops


def matrix_exponential(M) -> np.ndarray:
    """exp(M) by scaling and squaring with a Pade core."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix_exponential needs a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix_exponential input has non-finite entries")
    return kernels.expm(M)


def sector_interaction(params: ModelParams, N: int) -> np.ndarray:
    """H_I restricted to the N-photon sector, states ordered by ascending n_A."""
    block = np.zeros((N + 1, N + 1), dtype=complex)
    for n_a in range(N + 1):
        n_b = N - n_a
        if n_a > 0:
            block[n_a - 1, n_a] = -params.omega_ab * math.sqrt(n_a * (n_b + 1))
        if n_b > 0:
            block[n_a + 1, n_a] = -params.omega_ba * math.sqrt((n_a + 1) * n_b)
    return block


def sector_hamiltonian(params: ModelParams, N: int) -> np.ndarray:
    return params.omega0 * (N + 1) * np.eye(N + 1) + sector_interaction(params, N)


def sector_propagator(params: ModelParams, N: int, t: float, factorized: bool = False) -> np.ndarray:
    """exp(-iHt) on the N-photon block.

    ``factorized=True`` uses exp(-iH0 t) exp(-iH_I t), legitimate because
    H0 is proportional to the identity on a sector.
    """
    if factorized:
        free = np.exp(-1j * params.omega0 * (N + 1) * t)
        return free * matrix_exponential(-1j * t * sector_interaction(params, N))
    return matrix_exponential(-1j * t * sector_hamiltonian(params, N))


def propagate_sector(params: ModelParams, N: int, t: float, initial) -> np.ndarray:
    """exp(-iHt) applied to sector coefficients ``initial`` (length N+1), no renormalization."""
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (N + 1,):
        raise ValueError(f"sector {N} has dimension {N + 1}, got initial vector of shape {initial.shape}")
    return sector_propagator(params, N, t, factorized=True) @ initial


def _block_diag(basis, blocks):
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for N, block in enumerate(blocks):
        s = sector(basis, N).slice
        M[s, s] = block
    return OperatorMatrix(basis, M)


@dataclass(frozen=True)
class Propagator:
    """exp(-iHt) and exp(+iHt) on a basis.

    ``non_unitarity`` = max |(U+U - I)_ij| is a diagnostic only; it is large
    whenever the couplings differ.
    """

    time: float
    forward: OperatorMatrix
    inverse: OperatorMatrix
    non_unitarity: float = field(init=False)

    def __post_init__(self):
        F = self.forward.data
        object.__setattr__(self, "non_unitarity",
                           float(np.abs(F.conj().T @ F - np.eye(F.shape[0])).max()))


def build_propagator(params: ModelParams, basis: FockBasis, t: float) -> Propagator:
    N_range = range(basis.n_total_max + 1)
    forward = _block_diag(basis, [sector_propagator(params, N, t) for N in N_range])
    inverse = _block_diag(basis, [sector_propagator(params, N, -t) for N in N_range])
    return Propagator(float(t), forward, inverse)


def sector_propagators(params: ModelParams, basis: FockBasis, t: float):
    """Per-sector (exp(-iHt), exp(+iHt)) blocks, reusable across conjugations at one time."""
    sectors = range(basis.n_total_max + 1)
    return ([sector_propagator(params, N, t) for N in sectors],
            [sector_propagator(params, N, -t) for N in sectors])


def heisenberg_conjugate(params: ModelParams, t: float, X: OperatorMatrix,
                         blocks=None) -> OperatorMatrix:
    """exp(iHt) X exp(-iHt), assembled from sector blocks of X.

    ``blocks`` may carry the output of :func:`sector_propagators` for the
    same ``t``.
    """
    basis = X.basis
    fwd, bwd = blocks if blocks is not None else sector_propagators(params, basis, t)
    out = np.zeros_like(X.data)
    for M in range(basis.n_total_max + 1):
        rows = sector(basis, M).slice
        for N in range(basis.n_total_max + 1):
            cols = sector(basis, N).slice
            block = X.data[rows, cols]
            if np.any(block):
                out[rows, cols] = bwd[M] @ block @ fwd[N]
    return OperatorMatrix(basis, out)


def heisenberg_numeric(params: ModelParams, t: float, basis: FockBasis, which: str) -> OperatorMatrix:
    """Numerically evolved ladder operator ``which`` in {a, a_dag, b, b_dag}."""
    ops = ladder_ops(basis)._asdict()
    key = {"a†": "a_dag", "b†": "b_dag", "a+": "a_dag", "b+": "b_dag"}.get(which, which)
    if key not in ops:
        raise ValueError(f"unknown ladder operator {which!r}")
    if t == 0:
        return ops[key]
    return heisenberg_conjugate(params, t, ops[key])


def _coefficient_generators(params: ModelParams):
    M = np.array([[params.omega0, -params.omega_ba],
                  [-params.omega_ab, params.omega0]], dtype=complex)
    # lowering: dC/dt = -i M C ; raising: dD/dt = +i M^T D
    return -1j * M, 1j * M.T


def integrate_coefficient_ode(params: ModelParams, t_final: float, steps: int) -> HeisenbergCoeffs:
    """Fixed-step RK4 solution of the 2x2 Heisenberg coefficient equations."""
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    if not math.isfinite(t_final):
        raise ValueError(f"t_final must be finite, got {t_final!r}")
    G_low, G_high = _coefficient_generators(params)
    low = kernels.rk4_linear(G_low, np.eye(2), [t_final], [int(steps)])[0]
    high = kernels.rk4_linear(G_high, np.eye(2), [t_final], [int(steps)])[0]
    return HeisenbergCoeffs.from_matrices(t_final, low, high)


def integrate_coefficient_ode_grid(params: ModelParams, times, max_step: float) -> list[HeisenbergCoeffs]:
    """RK4 through a non-decreasing grid of times >= 0, steps no longer than ``max_step``."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    spans = np.diff(np.concatenate([[0.0], times]))
    steps = np.ceil(spans / max_step).astype(int)
    G_low, G_high = _coefficient_generators(params)
    low = kernels.rk4_linear(G_low, np.eye(2), times, steps)
    high = kernels.rk4_linear(G_high, np.eye(2), times, steps)
    return [HeisenbergCoeffs.from_matrices(t, lo, hi) for t, lo, hi in zip(times, low, high)]


@dataclass
class TimeSeries:
    """Observables sampled on an ascending time grid.

    ``columns`` maps observable names to arrays aligned with ``times``;
    ``amplitudes[k]`` holds the raw Schrodinger coefficients over
    ``states`` at ``times[k]``.
    """

    times: np.ndarray
    columns: dict[str, np.ndarray]
    states: tuple[FockState, ...] = ()
    amplitudes: np.ndarray | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be a strictly ascending 1-d grid")
        for name, values in self.columns.items():
            if len(values) != len(self.times):
                raise ValueError(f"column {name!r} has {len(values)} values for {len(self.times)} times")

    def records(self):
        for k, t in enumerate(self.times):
            yield {"t": float(t), **{name: values[k] for name, values in self.columns.items()}}

    def __len__(self):
        return len(self.times)


def evolve_observables(params: ModelParams, initial, t_grid, basis: FockBasis) -> TimeSeries:
    """Heisenberg-picture photon numbers for a number state, plus Schrodinger diagnostics.

    Columns: ``mean_NA``, ``mean_NB`` (<psi0| N(t) |psi0> with N(t) from
    exp(iHt) N exp(-iHt)), ``conservation_residual``, ``schrodinger_norm``
    (||exp(-iHt) psi0||, not renormalized) and ``schrodinger_NA`` /
    ``schrodinger_NB`` (<psi(t)| N |psi(t)> with the plain inner product).
    """
    initial = FockState(*initial)
    if initial not in basis:
        raise ValueError(f"initial state {initial} is outside the basis (n_total_max={basis.n_total_max})")
    N = initial.total
    states = tuple(FockState(n_a, N - n_a) for n_a in range(N + 1))
    i0 = initial.n_a
    n_a_diag = np.arange(N + 1, dtype=float)
    n_b_diag = N - n_a_diag
    cols = {name: [] for name in ("mean_NA", "mean_NB", "conservation_residual",
                                  "schrodinger_norm", "schrodinger_NA", "schrodinger_NB")}
    amps = []
    for t in t_grid:
        U = sector_propagator(params, N, t)
        U_inv = sector_propagator(params, N, -t)
        mean_a = (U_inv[i0, :] * n_a_diag) @ U[:, i0]
        mean_b = (U_inv[i0, :] * n_b_diag) @ U[:, i0]
        psi = U[:, i0]
        cols["mean_NA"].append(mean_a.real)
        cols["mean_NB"].append(mean_b.real)
        cols["conservation_residual"].append((mean_a + mean_b).real - N)
        cols["schrodinger_norm"].append(float(np.linalg.norm(psi)))
        cols["schrodinger_NA"].append(float(np.sum(n_a_diag * np.abs(psi) ** 2)))
        cols["schrodinger_NB"].append(float(np.sum(n_b_diag * np.abs(psi) ** 2)))
        amps.append(psi)
    return TimeSeries(np.asarray(t_grid, dtype=float),
                      {k: np.asarray(v, dtype=float) for k, v in cols.items()},
                      states, np.asarray(amps))
