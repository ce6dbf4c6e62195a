"""Fixed-size population of dendritic cells that samples an event stream."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cell import Antigen, DcConfig, DendriticCell, Presentation
from .signals import (
    DEFAULT_WEIGHTS,
    NormalizationMode,
    SignalVector,
    WeightMatrix,
    process_signals,
)

# Bit generator used for every pool; changing it changes every seeded result.
RNG_ALGORITHM = "PCG64"

_MAX_SEED = 2**64 - 1


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    if not 0 <= int(seed) <= _MAX_SEED:
        raise ValueError(f"rng_seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class PoolConfig:
    pool_size: int = 100
    sample_size: int = 10
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.pool_size < 1:
            raise ValueError(f"pool_size must be >= 1, got {self.pool_size}")
        if not 1 <= self.sample_size <= self.pool_size:
            raise ValueError(
                f"sample_size must be in [1, pool_size={self.pool_size}], got {self.sample_size}"
            )
        if not 0 <= self.rng_seed <= _MAX_SEED:
            raise ValueError(f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed}")


@dataclass
class DcPool:
    """The sampling pool.

    Cells that migrate during an event are replaced, in place, once every
    selected cell has sampled that event.  Replacement thresholds come from
    the same generator, so a seed fixes the whole presentation stream.
    """

    config: PoolConfig
    dc_config: DcConfig
    rng: np.random.Generator
    cells: list[DendriticCell] = field(default_factory=list)
    presentations: list[Presentation] = field(default_factory=list)
    events: int = 0

    def _new_cell(self) -> DendriticCell:
        return DendriticCell.create(self.dc_config, self.rng)

    def select(self) -> list[int]:
        """Indices of ``sample_size`` distinct cells, uniformly without replacement."""
        chosen = self.rng.choice(len(self.cells), size=self.config.sample_size, replace=False)
        return [int(i) for i in chosen]

    def dispatch_event(
        self,
        antigen: Antigen,
        signals: SignalVector,
        weights: WeightMatrix = DEFAULT_WEIGHTS,
        mode: NormalizationMode = NormalizationMode.PER_OUTPUT_WEIGHT_SUM,
    ) -> list[Presentation]:
        """Let a random subset of cells sample one (antigen, signals) event.

        Returns:
            Presentations from cells that migrated on this event, in
            selection order.
        """
        cytokines = process_signals(signals, weights, mode)
        migrating = []
        for index in self.select():
            cell = self.cells[index].sample(antigen, cytokines)
            if cell.should_migrate():
                migrating.append(index)

        emitted = []
        for index in migrating:
            emitted.append(self.cells[index].present())
            self.cells[index] = self._new_cell()
        self.presentations.extend(emitted)
        self.events += 1
        return emitted

    def flush(self) -> list[Presentation]:
        """Present every surviving cell that holds antigen and empty the pool."""
        emitted = [cell.present() for cell in self.cells if cell.collected]
        self.cells = []
        self.presentations.extend(emitted)
        return emitted


def init_pool(config: PoolConfig, dc_config: DcConfig | None = None, *, seed=None) -> DcPool:
    """Create ``pool_size`` fresh cells, each with its own fuzzed threshold.

    Args:
        config: Pool dimensions and master seed.
        dc_config: Threshold settings; defaults to :class:`DcConfig`.
        seed: Overrides ``config.rng_seed``; may be a ``SeedSequence``.
    """
    dc_config = dc_config or DcConfig()
    rng = make_rng(config.rng_seed if seed is None else seed)
    pool = DcPool(config=config, dc_config=dc_config, rng=rng)
    pool.cells = [pool._new_cell() for _ in range(config.pool_size)]
    return pool
