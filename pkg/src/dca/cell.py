"""The virtual dendritic cell."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .signals import CytokineOutput

Antigen = Hashable


@dataclass(frozen=True)
class DcConfig:
    """Migration threshold settings.

    Each cell draws its own threshold uniformly from
    ``[base * (1 - fuzz), base * (1 + fuzz)]`` when it is created.
    """

    base_migration_threshold: float = 10.0
    fuzz_fraction: float = 0.1

    def __post_init__(self) -> None:
        if not self.base_migration_threshold > 0:
            raise ValueError(
                f"base_migration_threshold must be > 0, got {self.base_migration_threshold}"
            )
        if not 0 <= self.fuzz_fraction < 1:
            raise ValueError(f"fuzz_fraction must be in [0, 1), got {self.fuzz_fraction}")

    @property
    def bounds(self) -> tuple[float, float]:
        base, fuzz = self.base_migration_threshold, self.fuzz_fraction
        return base * (1 - fuzz), base * (1 + fuzz)

    def draw_threshold(self, rng: np.random.Generator) -> float:
        low, high = self.bounds
        return float(rng.uniform(low, high))


class Context(str, enum.Enum):
    MATURE = "mature"
    SEMI_MATURE = "semi-mature"


@dataclass(frozen=True)
class Presentation:
    antigens: tuple[Antigen, ...]
    context: Context


@dataclass
class DendriticCell:
    """Accumulates antigen and cytokine totals until it migrates.

    Attributes:
        threshold: csm total the cell must exceed to migrate; fixed at creation.
        collected: Antigens sampled so far, in sampling order (duplicates kept).
        totals: Component-wise sum of every cytokine output sampled.
    """

    threshold: float
    collected: list[Antigen] = field(default_factory=list)
    totals: CytokineOutput = field(default_factory=CytokineOutput)
    migrated: bool = False

    @classmethod
    def create(cls, config: DcConfig, rng: np.random.Generator) -> DendriticCell:
        return cls(threshold=config.draw_threshold(rng))

    def sample(self, antigen: Antigen, cytokines: CytokineOutput) -> DendriticCell:
        if self.migrated:
            raise RuntimeError("cannot sample with a cell that has already migrated")
        self.collected.append(antigen)
        self.totals = self.totals + cytokines
        return self

    def should_migrate(self) -> bool:
        return self.totals.csm > self.threshold

    @property
    def context(self) -> Context:
        # Ties go to the semi-mature (safe) context.
        if self.totals.mat > self.totals.semi:
            return Context.MATURE
        return Context.SEMI_MATURE

    def present(self) -> Presentation:
        """Emit the collected antigen with the cell's context and retire the cell."""
        self.migrated = True
        return Presentation(antigens=tuple(self.collected), context=self.context)
