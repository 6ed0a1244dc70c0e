"""Uniform, cell-centered phase-space evaluation grids.

An axis with n cells over [lo, hi] places evaluation points at the cell
centers lo + (k + 1/2) * delta, delta = (hi - lo) / n, so that the plain
midpoint sum (sum of values times cell area) integrates the axis range
exactly for constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MIN_POINTS = 16

DEFAULT_SINGLE_MODE_EXTENT = 7.0
DEFAULT_SINGLE_MODE_POINTS = 281
DEFAULT_TWO_MODE_EXTENT = 6.0
DEFAULT_TWO_MODE_POINTS = 121


@dataclass(frozen=True)
class Axis:
    """One uniform coordinate axis: n cell centers over [lo, hi]."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < MIN_POINTS:
            raise DomainError(f"axis needs at least {MIN_POINTS} points, got {self.n}")
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)) or self.hi <= self.lo:
            raise DomainError(f"invalid axis range [{self.lo}, {self.hi}]")

    @property
    def delta(self) -> float:
        return (self.hi - self.lo) / self.n

    @property
    def centers(self) -> np.ndarray:
        return self.lo + (np.arange(self.n) + 0.5) * self.delta

    def refined(self, factor: int) -> "Axis":
        return Axis(self.lo, self.hi, self.n * int(factor))



@dataclass(frozen=True)
class ModeAxes:
    """Position and momentum axes of one mode."""

    q: Axis
    p: Axis

    @property
    def cell_area(self) -> float:
        return self.q.delta * self.p.delta

    @property
    def n_points(self) -> int:
        return self.q.n * self.p.n

    def refined(self, factor: int) -> "ModeAxes":
        return ModeAxes(self.q.refined(factor), self.p.refined(factor))


@dataclass(frozen=True)
class PhaseGrid:
    """Evaluation grid over one or two phase-space modes."""

    modes: tuple

    def __post_init__(self):
        if not 1 <= len(self.modes) <= 2:
            raise DomainError("PhaseGrid supports one or two modes")

    @classmethod
    def single(cls, extent: float = DEFAULT_SINGLE_MODE_EXTENT,
               points: int = DEFAULT_SINGLE_MODE_POINTS) -> "PhaseGrid":
        ax = Axis(-float(extent), float(extent), int(points))
        return cls((ModeAxes(ax, ax),))

    @classmethod
    def two_mode(cls, extent: float = DEFAULT_TWO_MODE_EXTENT,
                 points: int = DEFAULT_TWO_MODE_POINTS) -> "PhaseGrid":
        ax = Axis(-float(extent), float(extent), int(points))
        mode = ModeAxes(ax, ax)
        return cls((mode, mode))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def mode(self, i: int) -> ModeAxes:
        return self.modes[i]

    def refined(self, factor: int) -> "PhaseGrid":
        return PhaseGrid(tuple(m.refined(factor) for m in self.modes))

    def swapped(self) -> "PhaseGrid":
        return PhaseGrid(tuple(reversed(self.modes)))

    def describe(self) -> dict:
        """JSON-friendly summary, embedded in CLI outputs."""
        out = []
        for m in self.modes:
            out.append({
                "q": {"lo": m.q.lo, "hi": m.q.hi, "n": m.q.n},
                "p": {"lo": m.p.lo, "hi": m.p.hi, "n": m.p.n},
            })
        return {"modes": out}
