"""Matrix representations of the cavity operators on a truncated Fock basis.

Units: hbar = 1, every frequency dimensionless.

The model Hamiltonian is

    H = omega0 (a+a + b+b + 1) - (omega_ab a b+ + omega_ba a+ b)

which is hermitian only when omega_ab = conj(omega_ba) and PT-symmetric for
any pair of real couplings. Number-conserving operators (H, a b+, a+ b,
N_A, N_B) are assembled from their matrix elements directly rather than as
products of truncated ladder matrices, so they are exact on every retained
sector, including the top one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .fock import FockBasis


class DomainError(ValueError):
    """Parameters outside the domain of a closed-form expression."""


class BasisMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the coupled-cavity system.

    ``omega_ab`` drives a photon from cavity A to cavity B, ``omega_ba`` the
    reverse hop. Couplings are real; see :meth:`with_complex_couplings` for
    the one exception.
    """

    omega0: float = 1.0
    omega_ab: float = 0.09
    omega_ba: float = 0.04

    def __post_init__(self):
        for name in ("omega0", "omega_ab", "omega_ba"):
            value = getattr(self, name)
            if isinstance(value, complex) or np.iscomplexobj(value):
                raise TypeError(f"{name} must be real, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")

    @classmethod
    def with_complex_couplings(cls, omega0, omega_ab, omega_ba):
        """Build parameters with complex couplings, skipping validation.

        Only the PT-violation checks need this; the closed-form machinery
        assumes real couplings throughout.
        """
        obj = object.__new__(cls)
        object.__setattr__(obj, "omega0", float(omega0))
        object.__setattr__(obj, "omega_ab", complex(omega_ab))
        object.__setattr__(obj, "omega_ba", complex(omega_ba))
        return obj

    @property
    def coupling_product(self):
        return self.omega_ab * self.omega_ba

    @property
    def is_reciprocal(self) -> bool:
        return self.omega_ab == self.omega_ba

    @property
    def g_eff(self) -> float:
        """sqrt(omega_ab * omega_ba); requires a strictly positive product."""
        self.require_closed_form()
        return math.sqrt(self.omega_ab * self.omega_ba)

    def require_closed_form(self):
        product = self.coupling_product
        if isinstance(product, complex) or not product > 0:
            raise DomainError(
                "closed form needs omega_ab * omega_ba > 0 "
                f"(got omega_ab={self.omega_ab}, omega_ba={self.omega_ba})"
            )

    def swapped(self) -> "ModelParams":
        return ModelParams(self.omega0, self.omega_ba, self.omega_ab)

    @classmethod
    def reciprocal(cls, omega0: float, g: float) -> "ModelParams":
        return cls(omega0, g, g)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix acting on ``basis`` (rows and columns in basis order)."""

    basis: FockBasis
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (self.basis.dim, self.basis.dim):
            raise ValueError(f"matrix shape {data.shape} does not match basis dimension {self.basis.dim}")
        object.__setattr__(self, "data", data)

    def _check(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if other.basis != self.basis:
            raise BasisMismatchError(
                f"basis n_total_max={self.basis.n_total_max} vs {other.basis.n_total_max}"
            )
        return other

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check(other)
            return OperatorMatrix(self.basis, self.data @ other.data)
        return self.data @ np.asarray(other)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return OperatorMatrix(self.basis, self.data + other.data)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return OperatorMatrix(self.basis, self.data - other.data)

    def __mul__(self, scalar):
        if isinstance(scalar, OperatorMatrix):
            return NotImplemented
        return OperatorMatrix(self.basis, self.data * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return OperatorMatrix(self.basis, self.data / scalar)

    def __neg__(self):
        return OperatorMatrix(self.basis, -self.data)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.data.conj().T)

    def conj(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.data.conj())

    def element(self, row, col) -> complex:
        """<row| X |col> for Fock states ``row`` and ``col``."""
        return complex(self.data[self.basis.index(row), self.basis.index(col)])

    def apply(self, state) -> np.ndarray:
        vec = np.zeros(self.basis.dim, dtype=complex)
        vec[self.basis.index(state)] = 1.0
        return self.data @ vec

    def block(self, row_sector: int, col_sector: int) -> np.ndarray:
        from .fock import sector

        return self.data[sector(self.basis, row_sector).slice, sector(self.basis, col_sector).slice]

    def max_abs(self, mask=None) -> float:
        """Largest |entry|, optionally restricted to rows and columns in ``mask``."""
        data = self.data
        if mask is not None:
            mask = np.asarray(mask, dtype=bool)
            data = data[np.ix_(mask, mask)]
        return float(np.abs(data).max()) if data.size else 0.0


def identity(basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.eye(basis.dim))


def _from_elements(basis, rule):
    """Matrix whose column for |n_A, n_B> holds the (target, weight) pairs of ``rule``."""
    M = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j, (n_a, n_b) in enumerate(basis.states):
        for target, weight in rule(n_a, n_b):
            if weight != 0 and target in basis:
                M[basis.index(target), j] += weight
    return OperatorMatrix(basis, M)


def build_lowering_a(basis: FockBasis) -> OperatorMatrix:
    return _from_elements(basis, lambda na, nb: [((na - 1, nb), math.sqrt(na))])


def build_lowering_b(basis: FockBasis) -> OperatorMatrix:
    return _from_elements(basis, lambda na, nb: [((na, nb - 1), math.sqrt(nb))])


def build_raising(op: OperatorMatrix) -> OperatorMatrix:
    """Raising partner of a t=0 lowering operator (its conjugate transpose)."""
    return op.dag()


class Ladder(NamedTuple):
    a: OperatorMatrix
    a_dag: OperatorMatrix
    b: OperatorMatrix
    b_dag: OperatorMatrix


def ladder_ops(basis: FockBasis) -> Ladder:
    a = build_lowering_a(basis)
    b = build_lowering_b(basis)
    return Ladder(a, build_raising(a), b, build_raising(b))


def hop_a_to_b(basis: FockBasis) -> OperatorMatrix:
    """a b+ : moves one photon from A to B. Exact on every sector."""
    return _from_elements(basis, lambda na, nb: [((na - 1, nb + 1), math.sqrt(na * (nb + 1)))])


def hop_b_to_a(basis: FockBasis) -> OperatorMatrix:
    """a+ b : moves one photon from B to A. Exact on every sector."""
    return _from_elements(basis, lambda na, nb: [((na + 1, nb - 1), math.sqrt((na + 1) * nb))])


def number_a(basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.diag([float(s.n_a) for s in basis.states]))


def number_b(basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.diag([float(s.n_b) for s in basis.states]))


def total_number(basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.diag([float(s.total) for s in basis.states]))


def build_H0(params: ModelParams, basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, params.omega0 * np.diag([s.total + 1.0 for s in basis.states]))


def build_HI(params: ModelParams, basis: FockBasis) -> OperatorMatrix:
    return -(params.omega_ab * hop_a_to_b(basis) + params.omega_ba * hop_b_to_a(basis))


def build_H(params: ModelParams, basis: FockBasis, variant: str = "nonreciprocal",
            g: float | None = None) -> OperatorMatrix:
    """Full Hamiltonian. ``variant="hermitian"`` uses omega_ab = omega_ba = ``g``."""
    if variant == "hermitian":
        if g is None:
            raise ValueError("hermitian variant needs the coupling g")
        params = ModelParams(params.omega0, g, g)
    elif variant != "nonreciprocal":
        raise ValueError(f"unknown variant {variant!r}")
    return build_H0(params, basis) + build_HI(params, basis)


class NumberOps(NamedTuple):
    N_A: OperatorMatrix
    N_B: OperatorMatrix
    N: OperatorMatrix
    Delta: OperatorMatrix | None


def excitation_imbalance(params: ModelParams, basis: FockBasis) -> OperatorMatrix:
    """N_alpha - N_beta expressed with the localized t=0 operators.

    Written as (omega_ba a+b + omega_ab ab+)/g_eff, which is
    sqrt(omega_ba/omega_ab) a+b + sqrt(omega_ab/omega_ba) ab+ for positive
    couplings and keeps the right sign when both couplings are negative.
    """
    g = params.g_eff
    return (params.omega_ba / g) * hop_b_to_a(basis) + (params.omega_ab / g) * hop_a_to_b(basis)


def build_number_ops(basis: FockBasis, params: ModelParams | None = None) -> NumberOps:
    """N_A, N_B, N and, when ``params`` is given, the imbalance operator Delta."""
    delta = excitation_imbalance(params, basis) if params is not None else None
    return NumberOps(number_a(basis), number_b(basis), total_number(basis), delta)


class IntercavityOps(NamedTuple):
    alpha_minus: OperatorMatrix
    alpha_plus: OperatorMatrix
    beta_minus: OperatorMatrix
    beta_plus: OperatorMatrix


def build_intercavity_ops(params: ModelParams, basis: FockBasis,
                          printed_alpha_plus: bool = False) -> IntercavityOps:
    """Delocalized mode operators alpha-/+ and beta-/+.

    alpha+ carries sqrt(omega_ab) on b+, which makes [alpha-, alpha+] = 1.
    ``printed_alpha_plus=True`` swaps in sqrt(omega_ba) there instead; the
    commutator then becomes 1/2 + sqrt(omega_ba/omega_ab)/2. It exists only
    to exercise the verification suite's fault detection.
    """
    params.require_closed_form()
    if params.omega_ab < 0:
        raise DomainError("intercavity operators need positive couplings; with both negative "
                          "the square roots exchange the roles of the alpha and beta modes")
    a, a_dag, b, b_dag = ladder_ops(basis)
    s_ab = cmath.sqrt(params.omega_ab)
    s_ba = cmath.sqrt(params.omega_ba)
    low = cmath.sqrt(2 * params.omega_ba)
    high = cmath.sqrt(2 * params.omega_ab)
    alpha_b_coeff = s_ba if printed_alpha_plus else s_ab
    return IntercavityOps(
        alpha_minus=(s_ab * a + s_ba * b) / low,
        alpha_plus=(s_ba * a_dag + alpha_b_coeff * b_dag) / high,
        beta_minus=(s_ab * a - s_ba * b) / low,
        beta_plus=(s_ba * a_dag - s_ab * b_dag) / high,
    )


def commutator(X: OperatorMatrix, Y: OperatorMatrix) -> OperatorMatrix:
    return X @ Y - Y @ X


def parity(basis: FockBasis) -> OperatorMatrix:
    """Diagonal (-1)^(n_A + n_B); conjugating a ladder operator by it flips its sign."""
    return OperatorMatrix(basis, np.diag([(-1.0) ** s.total for s in basis.states]))


def pt_conjugate(X: OperatorMatrix, basis: FockBasis | None = None) -> OperatorMatrix:
    """Parity times time reversal: P conj(X) P, with real number states."""
    P = parity(basis if basis is not None else X.basis)
    return P @ X.conj() @ P
