"""Truncated two-mode number basis |n_A, n_B> with total-photon sectors.

States are ordered by ascending total photon number, then by ascending n_A
within a sector, so every sector is a contiguous block. Because the
Hamiltonian conserves the total number, truncating on n_A + n_B loses
nothing inside the retained sectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple


class FockState(NamedTuple):
    n_a: int
    n_b: int

    @property
    def total(self) -> int:
        return self.n_a + self.n_b

    def is_valid(self) -> bool:
        return self.n_a >= 0 and self.n_b >= 0

    def __str__(self) -> str:
        return f"|{self.n_a},{self.n_b}>"


class SectorView(NamedTuple):
    """Contiguous block of the basis holding every state with n_A + n_B = N."""

    N: int
    offset: int
    dim: int

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.dim)


def sector_offset(N: int) -> int:
    return N * (N + 1) // 2


@dataclass(frozen=True)
class FockBasis:
    n_total_max: int
    states: tuple[FockState, ...] = field(repr=False)
    _index: dict = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        """Position of ``state`` in the basis; raises KeyError when absent."""
        return self._index[FockState(*state)]

    def __contains__(self, state) -> bool:
        return FockState(*state) in self._index

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def sectors(self):
        return [sector(self, N) for N in range(self.n_total_max + 1)]

    def totals(self):
        """Total photon number of each basis state, in basis order."""
        return [s.total for s in self.states]

    def interior_mask(self, margin: int = 2):
        """True for states at least ``margin`` below the truncation edge."""
        return [s.total <= self.n_total_max - margin for s in self.states]


def build_basis(n_total_max: int) -> FockBasis:
    """Enumerate every |n_A, n_B> with n_A + n_B <= ``n_total_max``."""
    if int(n_total_max) != n_total_max or n_total_max < 0:
        raise ValueError(f"n_total_max must be a non-negative integer, got {n_total_max!r}")
    n_total_max = int(n_total_max)
    states = tuple(
        FockState(n_a, N - n_a)
        for N in range(n_total_max + 1)
        for n_a in range(N + 1)
    )
    return FockBasis(n_total_max, states, {s: i for i, s in enumerate(states)})


def sector(basis: FockBasis, N: int) -> SectorView:
    if not 0 <= N <= basis.n_total_max:
        raise IndexError(f"sector N={N} outside 0..{basis.n_total_max}")
    return SectorView(N, sector_offset(N), N + 1)
