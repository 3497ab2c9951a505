"""Closed-form time dependence of the coupled-cavity model.

Heisenberg picture throughout: A(t) = exp(iHt) A exp(-iHt), also for the
non-hermitian H. With g_eff = sqrt(omega_ab * omega_ba) the lowering
operators evolve as

    a(t) = [cos(g t) a0 + i (omega_ba/g) sin(g t) b0] exp(-i omega0 t)
    b(t) = [i (omega_ab/g) sin(g t) a0 + cos(g t) b0] exp(-i omega0 t)

and the raising operators with the coupling ratios exchanged and the
opposite sign of i. For positive couplings omega_ba/g = sqrt(omega_ba/omega_ab).
The raising operators are not the adjoints of the lowering ones unless
omega_ab = omega_ba.

Every function here needs omega_ab * omega_ba > 0 except :func:`apply_HI`
and :func:`small_time_amplitude`, which are valid for any real couplings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .fock import FockBasis, FockState
from .operators import (
    ModelParams,
    OperatorMatrix,
    hop_a_to_b,
    hop_b_to_a,
    ladder_ops,
    number_a,
    number_b,
)

_LADDER_ALIASES = {"a": "a", "b": "b", "a_dag": "a_dag", "b_dag": "b_dag",
                   "a†": "a_dag", "b†": "b_dag", "a+": "a_dag", "b+": "b_dag"}


def _which(which):
    try:
        return _LADDER_ALIASES[which]
    except KeyError:
        raise ValueError(f"unknown ladder operator {which!r}") from None


def eigenfrequencies(params: ModelParams) -> tuple[float, float]:
    """(omega_alpha, omega_beta) = omega0 -/+ g_eff of the two intercavity modes."""
    g = params.g_eff
    return params.omega0 - g, params.omega0 + g


@dataclass(frozen=True)
class HeisenbergCoeffs:
    """a(t) = c_aa a0 + c_ab b0, b(t) = c_ba a0 + c_bb b0, and likewise
    a+(t) = d_aa a0+ + d_ab b0+, b+(t) = d_ba a0+ + d_bb b0+."""

    time: float
    c_aa: complex
    c_ab: complex
    c_ba: complex
    c_bb: complex
    d_aa: complex
    d_ab: complex
    d_ba: complex
    d_bb: complex

    @property
    def lowering(self) -> np.ndarray:
        return np.array([[self.c_aa, self.c_ab], [self.c_ba, self.c_bb]])

    @property
    def raising(self) -> np.ndarray:
        return np.array([[self.d_aa, self.d_ab], [self.d_ba, self.d_bb]])

    @classmethod
    def from_matrices(cls, time, lowering, raising) -> "HeisenbergCoeffs":
        c, d = np.asarray(lowering), np.asarray(raising)
        return cls(float(time), *(complex(x) for x in (c[0, 0], c[0, 1], c[1, 0], c[1, 1],
                                                      d[0, 0], d[0, 1], d[1, 0], d[1, 1])))

    def commutation_residuals(self) -> tuple[complex, complex]:
        """[a(t), a+(t)] - 1 and [b(t), b+(t)] - 1 as scalars."""
        return (self.c_aa * self.d_aa + self.c_ab * self.d_ab - 1,
                self.c_ba * self.d_ba + self.c_bb * self.d_bb - 1)

    def max_abs_diff(self, other: "HeisenbergCoeffs") -> float:
        return float(max(np.abs(self.lowering - other.lowering).max(),
                         np.abs(self.raising - other.raising).max()))

    def operator(self, which: str, basis: FockBasis) -> OperatorMatrix:
        """Matrix of the evolved ladder operator ``which`` built from t=0 matrices."""
        which = _which(which)
        a, a_dag, b, b_dag = ladder_ops(basis)
        if which == "a":
            return self.c_aa * a + self.c_ab * b
        if which == "b":
            return self.c_ba * a + self.c_bb * b
        if which == "a_dag":
            return self.d_aa * a_dag + self.d_ab * b_dag
        return self.d_ba * a_dag + self.d_bb * b_dag


def heisenberg_coeffs(params: ModelParams, t: float) -> HeisenbergCoeffs:
    g = params.g_eff
    cos, sin = math.cos(g * t), math.sin(g * t)
    down = cmath.exp(-1j * params.omega0 * t)
    up = cmath.exp(1j * params.omega0 * t)
    r_ba = params.omega_ba / g
    r_ab = params.omega_ab / g
    return HeisenbergCoeffs(
        time=float(t),
        c_aa=cos * down,
        c_ab=1j * r_ba * sin * down,
        c_ba=1j * r_ab * sin * down,
        c_bb=cos * down,
        d_aa=cos * up,
        d_ab=-1j * r_ab * sin * up,
        d_ba=-1j * r_ba * sin * up,
        d_bb=cos * up,
    )


def photon_number_operator_t(params: ModelParams, t: float, cavity: str,
                             basis: FockBasis) -> OperatorMatrix:
    """N^A(t) = a+(t) a(t) or N^B(t), written out in t=0 operators.

    N^A(t) = cos^2 N_A + sin^2 N_B + (i/g) cos sin (omega_ba a+b - omega_ab ab+)
    """
    g = params.g_eff
    cos, sin = math.cos(g * t), math.sin(g * t)
    cross = (1j / g) * cos * sin * (params.omega_ba * hop_b_to_a(basis)
                                    - params.omega_ab * hop_a_to_b(basis))
    if cavity.upper() == "A":
        return cos**2 * number_a(basis) + sin**2 * number_b(basis) + cross
    if cavity.upper() == "B":
        return sin**2 * number_a(basis) + cos**2 * number_b(basis) - cross
    raise ValueError(f"cavity must be 'A' or 'B', got {cavity!r}")


def expected_photons(params: ModelParams, n_a: int, n_b: int, t: float) -> tuple[float, float]:
    """<n_A, n_B| N^A(t) |n_A, n_B> and the same for N^B."""
    g = params.g_eff
    c2 = math.cos(g * t) ** 2
    s2 = math.sin(g * t) ** 2
    return n_a * c2 + n_b * s2, n_a * s2 + n_b * c2


def _superpose(terms):
    out = {}
    for state, amp in terms:
        state = FockState(*state)
        if amp != 0 and state.is_valid():
            out[state] = out.get(state, 0) + amp
    return out


def apply_ladder_t(params: ModelParams, t: float, which: str, state,
                   convention: str = "heisenberg") -> dict[FockState, complex]:
    """Act with an evolved ladder operator on a number state.

    Returns a mapping from Fock state to amplitude (at most two entries;
    exact-zero terms dropped). ``convention="printed"`` flips the sign of
    the cross-cavity term, reproducing a commonly printed variant of these
    relations that disagrees with the operator solution; the default
    agrees with :func:`heisenberg_coeffs` and the numeric propagator.
    """
    if convention not in ("heisenberg", "printed"):
        raise ValueError(f"unknown convention {convention!r}")
    which = _which(which)
    k = heisenberg_coeffs(params, t)
    flip = -1 if convention == "printed" else 1
    n_a, n_b = FockState(*state)
    if which == "a":
        terms = [((n_a - 1, n_b), k.c_aa * math.sqrt(n_a)),
                 ((n_a, n_b - 1), flip * k.c_ab * math.sqrt(n_b))]
    elif which == "b":
        terms = [((n_a - 1, n_b), flip * k.c_ba * math.sqrt(n_a)),
                 ((n_a, n_b - 1), k.c_bb * math.sqrt(n_b))]
    elif which == "a_dag":
        terms = [((n_a + 1, n_b), k.d_aa * math.sqrt(n_a + 1)),
                 ((n_a, n_b + 1), flip * k.d_ab * math.sqrt(n_b + 1))]
    else:
        terms = [((n_a + 1, n_b), flip * k.d_ba * math.sqrt(n_a + 1)),
                 ((n_a, n_b + 1), k.d_bb * math.sqrt(n_b + 1))]
    return _superpose(terms)


def apply_HI(params: ModelParams, state) -> dict[FockState, complex]:
    """H_I |n_A, n_B>; the vacuum maps to the empty superposition."""
    n_a, n_b = FockState(*state)
    return _superpose([
        ((n_a - 1, n_b + 1), -params.omega_ab * math.sqrt(n_a * (n_b + 1))),
        ((n_a + 1, n_b - 1), -params.omega_ba * math.sqrt((n_a + 1) * n_b)),
    ])


def small_time_amplitude(params: ModelParams, initial, final, t: float,
                         with_free_phase: bool = False, convention: str = "heisenberg") -> complex:
    """First-order <final| exp(-iHt) |initial>.

    exp(-iH_I t) ~ 1 - i H_I t, so a one-photon hop picks up
    +i t omega sqrt(...) because H_I carries an overall minus sign. The
    free phase exp(-i omega0 (N+1) t) is left out unless
    ``with_free_phase`` is set. No check is made that t is small.
    ``convention="printed"`` returns the variant with -i t, which has the
    opposite sign to exp(-iHt) itself.
    """
    if convention not in ("heisenberg", "printed"):
        raise ValueError(f"unknown convention {convention!r}")
    hop = -1j if convention == "printed" else 1j
    n_a, n_b = FockState(*initial)
    final = FockState(*final)
    amp = 0j
    if final == (n_a, n_b):
        amp += 1.0
    elif final == (n_a - 1, n_b + 1):
        amp += hop * t * params.omega_ab * math.sqrt(n_a * (n_b + 1))
    elif final == (n_a + 1, n_b - 1):
        amp += hop * t * params.omega_ba * math.sqrt((n_a + 1) * n_b)
    if with_free_phase and amp != 0:
        amp *= cmath.exp(-1j * params.omega0 * (n_a + n_b + 1) * t)
    return amp


class SpectrumEntry(NamedTuple):
    n_alpha: int
    n_beta: int
    energy: float
    rwa_breakdown: bool


def spectrum(params: ModelParams, n_total_max: int) -> list[SpectrumEntry]:
    """Levels omega_alpha n_alpha + omega_beta n_beta + omega0 up to n_total_max excitations.

    Ordered like the Fock basis: total excitations ascending, then n_alpha
    ascending. Negative energies are flagged as rotating-wave breakdown.
    """
    w_alpha, w_beta = eigenfrequencies(params)
    entries = []
    for N in range(n_total_max + 1):
        for n_alpha in range(N + 1):
            n_beta = N - n_alpha
            energy = w_alpha * n_alpha + w_beta * n_beta + params.omega0
            entries.append(SpectrumEntry(n_alpha, n_beta, energy, energy < 0))
    return entries


# Reciprocal (hermitian) coupling, omega_ab = omega_ba = g, written out
# independently of the general expressions above for regression checks.

def reciprocal_coeffs(omega0: float, g: float, t: float) -> HeisenbergCoeffs:
    down = cmath.exp(-1j * omega0 * t)
    up = cmath.exp(1j * omega0 * t)
    c, s = math.cos(g * t), math.sin(g * t)
    return HeisenbergCoeffs(float(t), c * down, 1j * s * down, 1j * s * down, c * down,
                            c * up, -1j * s * up, -1j * s * up, c * up)


def reciprocal_number_operator(omega0: float, g: float, t: float, cavity: str,
                               basis: FockBasis) -> OperatorMatrix:
    c, s = math.cos(g * t), math.sin(g * t)
    swap = 1j * c * s * (hop_b_to_a(basis) - hop_a_to_b(basis))
    if cavity.upper() == "A":
        return c * c * number_a(basis) + s * s * number_b(basis) + swap
    return s * s * number_a(basis) + c * c * number_b(basis) - swap


def reciprocal_first_order_amplitude(g: float, initial, final, t: float) -> complex:
    n_a, n_b = FockState(*initial)
    final = FockState(*final)
    delta = 1.0 if final == (n_a, n_b) else 0.0
    hop = 0.0
    if final == (n_a - 1, n_b + 1):
        hop = math.sqrt(n_a * (n_b + 1))
    elif final == (n_a + 1, n_b - 1):
        hop = math.sqrt((n_a + 1) * n_b)
    return delta + 1j * t * g * hop
