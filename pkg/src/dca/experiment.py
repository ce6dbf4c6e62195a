"""Seeded experiment runs, confusion matrices and report files."""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
import logging
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .cell import Antigen, DcConfig
from .lymph import DEFAULT_CLASSIFICATION_THRESHOLD, ClassLabel, PresentationLedger
from .pool import RNG_ALGORITHM, PoolConfig, init_pool, make_rng
from .signals import DEFAULT_WEIGHTS, NormalizationMode, WeightMatrix
from .wbc import LabeledEvent

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

SPLIT_HEAD = 120
BOUNDARY_WINDOW = 25


class Ordering(str, enum.Enum):
    CLASS_BY_CLASS = "class-by-class"
    SPLIT_SANDWICH = "split-sandwich"
    AS_GIVEN = "as-given"
    SEEDED_SHUFFLE = "seeded-shuffle"


@dataclass(frozen=True)
class ExperimentConfig:
    ordering: Ordering = Ordering.CLASS_BY_CLASS
    runs: int = 20
    classification_threshold: float = DEFAULT_CLASSIFICATION_THRESHOLD
    pool: PoolConfig = field(default_factory=PoolConfig)
    dc: DcConfig = field(default_factory=DcConfig)
    weights: WeightMatrix = DEFAULT_WEIGHTS
    mode: NormalizationMode = NormalizationMode.PER_OUTPUT_WEIGHT_SUM
    flush_enabled: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "ordering", Ordering(self.ordering))
        object.__setattr__(self, "mode", NormalizationMode(self.mode))
        if self.runs < 0:
            raise ValueError(f"runs must be >= 0, got {self.runs}")
        if not 0 < self.classification_threshold < 1:
            raise ValueError(
                f"classification_threshold must be in (0, 1), got {self.classification_threshold}"
            )

    def to_dict(self) -> dict:
        return {
            "ordering": self.ordering.value,
            "runs": self.runs,
            "classification_threshold": self.classification_threshold,
            "flush_enabled": self.flush_enabled,
            "mode": self.mode.value,
            "pool": dataclasses.asdict(self.pool),
            "dc": dataclasses.asdict(self.dc),
            "weights": self.weights.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        data = dict(data)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
        if "pool" in data:
            data["pool"] = PoolConfig(**data["pool"])
        if "dc" in data:
            data["dc"] = DcConfig(**data["dc"])
        if "weights" in data:
            data["weights"] = WeightMatrix.from_dict(data["weights"])
        return cls(**data)

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an :class:`ExperimentConfig` from a TOML file."""
    with open(path, "rb") as fh:
        return ExperimentConfig.from_dict(tomllib.load(fh))


def order_items(items: Sequence, ordering: Ordering, seed: int = 0) -> list:
    """Arrange labelled items (anything with a ``label`` attribute).

    ``SPLIT_SANDWICH`` puts the first 120 class 1 items (file order) ahead
    of all class 2 items, followed by the remaining class 1 items.
    """
    ordering = Ordering(ordering)
    items = list(items)
    if ordering is Ordering.AS_GIVEN:
        return items
    if ordering is Ordering.SEEDED_SHUFFLE:
        perm = make_rng(seed).permutation(len(items))
        return [items[i] for i in perm]

    if any(item.label is None for item in items):
        raise ValueError(f"{ordering.value} ordering needs every item labelled")
    class1 = [i for i in items if i.label is ClassLabel.CLASS1]
    class2 = [i for i in items if i.label is ClassLabel.CLASS2]
    if ordering is Ordering.CLASS_BY_CLASS:
        return class1 + class2
    if len(class1) < 2 * SPLIT_HEAD:
        raise ValueError(
            f"split-sandwich ordering needs at least {2 * SPLIT_HEAD} class 1 items, "
            f"got {len(class1)}"
        )
    return class1[:SPLIT_HEAD] + class2 + class1[SPLIT_HEAD:]


def derive_run_seed(master_seed: int, run: int) -> int:
    """64-bit seed for run ``run`` (1-based): the first word of
    ``SeedSequence([master_seed, run])``."""
    state = np.random.SeedSequence([master_seed, run]).generate_state(1, np.uint64)
    return int(state[0])


@dataclass
class ConfusionMatrix:
    """Counts of (actual, predicted) labels.

    Items that were never presented (possible only with flush disabled)
    are tallied separately in ``unpresented`` and excluded from the rows.
    """

    counts: Counter = field(default_factory=Counter)
    unpresented: Counter = field(default_factory=Counter)

    def add(self, actual: ClassLabel, predicted: ClassLabel | None) -> None:
        if predicted is None:
            self.unpresented[actual] += 1
        else:
            self.counts[(actual, predicted)] += 1

    def get(self, actual: ClassLabel, predicted: ClassLabel) -> int:
        return self.counts[(actual, predicted)]

    def row(self, actual: ClassLabel) -> tuple[int, int]:
        return self.get(actual, ClassLabel.CLASS1), self.get(actual, ClassLabel.CLASS2)

    def errors(self, actual: ClassLabel | None = None) -> int:
        classes = list(ClassLabel) if actual is None else [actual]
        return sum(self.get(a, p) for a in classes for p in ClassLabel if p is not a)

    def to_dict(self) -> dict:
        out = {}
        for actual in ClassLabel:
            c1, c2 = self.row(actual)
            out[actual.name.lower()] = {
                "predicted_class1": c1,
                "predicted_class2": c2,
                "unpresented": self.unpresented[actual],
            }
        return out


@dataclass(frozen=True)
class ItemResult:
    position: int
    antigen_id: Antigen
    true_class: ClassLabel | None
    mature_count: int
    semi_count: int
    fraction: float | None
    predicted_class: ClassLabel | None


@dataclass
class RunResult:
    run: int
    seed: int
    ledger: PresentationLedger
    confusion: ConfusionMatrix
    items: list[ItemResult]
    presentations: int

    def misclassified(self) -> list[ItemResult]:
        return [
            i
            for i in self.items
            if i.true_class is not None
            and i.predicted_class is not None
            and i.predicted_class is not i.true_class
        ]


def run_once(
    cfg: ExperimentConfig, ordered: Sequence[LabeledEvent], run: int, seed: int
) -> RunResult:
    pool = init_pool(cfg.pool, cfg.dc, seed=seed)
    for event in ordered:
        pool.dispatch_event(event.antigen, event.signals, cfg.weights, cfg.mode)
    if cfg.flush_enabled:
        pool.flush()
    ledger = PresentationLedger().record_all(pool.presentations)

    confusion = ConfusionMatrix()
    items = []
    for position, event in enumerate(ordered, start=1):
        mature, semi = ledger.counts(event.antigen)
        if event.antigen in ledger:
            fraction = ledger.maturity_fraction(event.antigen)
            predicted = ledger.classify(event.antigen, cfg.classification_threshold)
        else:
            fraction = predicted = None
        if event.label is not None:
            confusion.add(event.label, predicted)
        items.append(
            ItemResult(position, event.antigen, event.label, mature, semi, fraction, predicted)
        )
    return RunResult(run, seed, ledger, confusion, items, ledger.total)


def run_experiment(cfg: ExperimentConfig, events: Sequence[LabeledEvent]) -> list[RunResult]:
    """Run ``cfg.runs`` independent seeded passes over ``events``.

    Events are ordered once (the shuffle, if any, uses the master seed);
    run ``r`` then uses :func:`derive_run_seed` of ``(cfg.pool.rng_seed, r)``.
    """
    ordered = order_items(events, cfg.ordering, cfg.pool.rng_seed)
    results = []
    for run in range(1, cfg.runs + 1):
        seed = derive_run_seed(cfg.pool.rng_seed, run)
        result = run_once(cfg, ordered, run, seed)
        logger.debug("run %d: %d errors", run, result.confusion.errors())
        results.append(result)
    return results


def majority_vote(results: Sequence[RunResult]) -> tuple[ConfusionMatrix, list[ClassLabel | None]]:
    """Across-run matrix: each item takes the label most runs predicted.

    Ties fall to class 1.  Items never presented in any run stay unpresented.
    """
    if not results:
        raise ValueError("no results to aggregate")
    matrix = ConfusionMatrix()
    labels: list[ClassLabel | None] = []
    for k, item in enumerate(results[0].items):
        votes = Counter(r.items[k].predicted_class for r in results)
        votes.pop(None, None)
        if not votes:
            label = None
        elif votes[ClassLabel.CLASS2] > votes[ClassLabel.CLASS1]:
            label = ClassLabel.CLASS2
        else:
            label = ClassLabel.CLASS1
        labels.append(label)
        if item.true_class is not None:
            matrix.add(item.true_class, label)
    return matrix, labels


def transitions(labels: Sequence[ClassLabel | None]) -> list[int]:
    """1-based positions ``t`` where item ``t`` and item ``t + 1`` differ in class."""
    return [t for t in range(1, len(labels)) if labels[t - 1] != labels[t]]


def boundary_distance(position: int, boundaries: Sequence[int]) -> int | None:
    """How many places ``position`` sits from the nearest class boundary.

    The items either side of a boundary are at distance 1, so "within
    ``w`` positions" means the ``w`` items on each side.
    """
    if not boundaries:
        return None
    return min(position - t if position > t else t - position + 1 for t in boundaries)


def near_boundary_share(result: RunResult, window: int = BOUNDARY_WINDOW) -> float:
    """Fraction of the run's misclassified items within ``window`` of a boundary.

    A run without errors scores 1.
    """
    wrong = result.misclassified()
    if not wrong:
        return 1.0
    bounds = transitions([i.true_class for i in result.items])
    near = 0
    for item in wrong:
        d = boundary_distance(item.position, bounds)
        if d is not None and d <= window:
            near += 1
    return near / len(wrong)


def conservation_failures(cfg: ExperimentConfig, result: RunResult) -> list[str]:
    """Describe every way ``result`` violates antigen conservation under flush."""
    if not cfg.flush_enabled:
        return []
    problems = []
    sample_size = cfg.pool.sample_size
    expected = len(result.items) * sample_size
    if result.presentations != expected:
        problems.append(
            f"run {result.run}: {result.presentations} presentations, expected {expected}"
        )
    occurrences = Counter(i.antigen_id for i in result.items)
    for antigen, n in occurrences.items():
        got = sum(result.ledger.counts(antigen))
        if got != n * sample_size:
            problems.append(
                f"run {result.run}: antigen {antigen!r} presented {got} times, "
                f"expected {n * sample_size}"
            )
    return problems


ITEM_COLUMNS = (
    "position",
    "antigen_id",
    "true_class",
    "mature_count",
    "semi_count",
    "fraction",
    "predicted_class",
)


def _label(label: ClassLabel | None) -> str:
    return "" if label is None else str(int(label))


def emit_report(
    results: Sequence[RunResult],
    destination: str | Path,
    cfg: ExperimentConfig | None = None,
    extra: dict | None = None,
) -> list[Path]:
    """Write confusion matrices, per-item tables and run metadata.

    Files written into ``destination``:

    * ``confusion.csv``: one row per (run, actual class), plus ``majority``
      rows for the across-run vote;
    * ``items_run{NNN}.csv``: the per-item maturity table of each run;
    * ``summary.json``: configuration echo, seeds and every matrix.

    Returns:
        The paths written.
    """
    if not results:
        raise ValueError("no results to report")
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    written = []

    majority, _ = majority_vote(results)
    confusion_path = dest / "confusion.csv"
    with open(confusion_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "actual_class", "predicted_class1", "predicted_class2", "unpresented"])
        for tag, matrix in [(r.run, r.confusion) for r in results] + [("majority", majority)]:
            for actual in ClassLabel:
                writer.writerow([tag, int(actual), *matrix.row(actual), matrix.unpresented[actual]])
    written.append(confusion_path)

    width = max(3, len(str(len(results))))
    for r in results:
        path = dest / f"items_run{r.run:0{width}d}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(ITEM_COLUMNS)
            for i in r.items:
                writer.writerow(
                    [
                        i.position,
                        i.antigen_id,
                        _label(i.true_class),
                        i.mature_count,
                        i.semi_count,
                        "" if i.fraction is None else repr(i.fraction),
                        _label(i.predicted_class),
                    ]
                )
        written.append(path)

    summary = {
        "rng_algorithm": RNG_ALGORITHM,
        "seed_rule": "SeedSequence([master_seed, run]).generate_state(1, uint64)[0]",
        "config": cfg.to_dict() if cfg is not None else None,
        "runs": [
            {
                "run": r.run,
                "seed": r.seed,
                "presentations": r.presentations,
                "errors": r.confusion.errors(),
                "near_boundary_share": near_boundary_share(r),
                "confusion": r.confusion.to_dict(),
            }
            for r in results
        ],
        "majority": majority.to_dict(),
        "mean_errors": sum(r.confusion.errors() for r in results) / len(results),
    }
    if extra:
        summary.update(extra)
    summary_path = dest / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    written.append(summary_path)
    return written
