"""Wisconsin Breast Cancer ingestion and signal derivation.

Four high-variance attributes feed the danger signal: each item's mean
absolute distance from the class 1 means.  Clump thickness compared to
its all-item median gives either a safe signal (above the median) or a
PAMP signal (below).  No attribute maps to inflammatory cytokines, so
that signal is always zero here.

The module also reads and writes a generic pre-derived signal stream
(``antigen_id,pamp,danger,safe,inflammatory[,true_label]``), which lets
other sources drive the engine.
"""

from __future__ import annotations

import csv
import logging
import statistics
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .cell import Antigen
from .lymph import ClassLabel
from .signals import SignalVector

logger = logging.getLogger(__name__)

ATTRIBUTES = (
    "clump_thickness",
    "cell_size",
    "cell_shape",
    "marginal_adhesion",
    "single_epithelial_cell_size",
    "bare_nuclei",
    "bland_chromatin",
    "normal_nucleoli",
    "mitoses",
)
DANGER_ATTRIBUTES = ("cell_size", "cell_shape", "bare_nuclei", "normal_nucleoli")
CLUMP = "clump_thickness"

# Malignant (code 4, 241 items) is class 1: the smaller class, and the one
# whose attribute means match the published reference values.
CLASS_CODES = {"4": ClassLabel.CLASS1, "2": ClassLabel.CLASS2}

MISSING = "?"
BUNDLED_DATASET = "breast-cancer-wisconsin.data"


class DatasetFormatError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def bundled_dataset_path() -> Path:
    """Path of the packaged copy of the 699-item Wisconsin file."""
    return Path(str(resources.files("dca") / "data" / BUNDLED_DATASET))


@dataclass(frozen=True)
class RawRecord:
    """One dataset row after imputation.

    ``item_id`` is the 1-based row number, used as the antigen.  The
    file's own sample code is kept separately because it is not unique.
    """

    item_id: int
    sample_code: str
    attributes: tuple[float, ...]
    label: ClassLabel
    imputed: tuple[str, ...] = ()

    def __getitem__(self, name: str) -> float:
        return self.attributes[ATTRIBUTES.index(name)]


@dataclass(frozen=True)
class SignalDerivationStats:
    class1_means: tuple[float, float, float, float]
    clump_median: float


@dataclass(frozen=True)
class LabeledEvent:
    antigen: Antigen
    signals: SignalVector
    label: ClassLabel | None = None


def parse_dataset(path: str | Path) -> list[RawRecord]:
    """Parse the comma-separated Wisconsin file.

    Missing values (``?``) are replaced by the median of that attribute
    over all items where it is present.

    Raises:
        DatasetFormatError: On a malformed line, an attribute outside
            [1, 10], or an unknown class code.
    """
    rows = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != 11:
                raise DatasetFormatError(lineno, f"expected 11 fields, got {len(fields)}")
            values: list[int | None] = []
            for name, raw in zip(ATTRIBUTES, fields[1:10]):
                if raw == MISSING:
                    values.append(None)
                    continue
                try:
                    value = int(raw)
                except ValueError:
                    raise DatasetFormatError(lineno, f"{name} is not an integer: {raw!r}") from None
                if not 1 <= value <= 10:
                    raise DatasetFormatError(lineno, f"{name}={value} outside [1, 10]")
                values.append(value)
            code = fields[10]
            if code not in CLASS_CODES:
                raise DatasetFormatError(lineno, f"unknown class code {code!r}")
            rows.append((lineno, fields[0], values, CLASS_CODES[code]))

    medians = {}
    for k, name in enumerate(ATTRIBUTES):
        if any(values[k] is None for _, _, values, _ in rows):
            present = [values[k] for _, _, values, _ in rows if values[k] is not None]
            if not present:
                raise ValueError(f"{name} is missing on every line; cannot impute")
            medians[k] = statistics.median(present)
            logger.info("imputing %s with median %s", name, medians[k])

    records = []
    for item_id, (lineno, code, values, label) in enumerate(rows, start=1):
        imputed = tuple(ATTRIBUTES[k] for k, v in enumerate(values) if v is None)
        filled = tuple(medians[k] if v is None else v for k, v in enumerate(values))
        records.append(RawRecord(item_id, code, filled, label, imputed))
    return records


def compute_stats(records: Sequence[RawRecord]) -> SignalDerivationStats:
    """Class 1 means of the danger attributes and the all-item clump median."""
    class1 = [r for r in records if r.label is ClassLabel.CLASS1]
    if not class1:
        raise ValueError("no class 1 records; cannot compute danger reference means")
    means = tuple(statistics.fmean(r[name] for r in class1) for name in DANGER_ATTRIBUTES)
    return SignalDerivationStats(
        class1_means=means,
        clump_median=statistics.median(r[CLUMP] for r in records),
    )


def derive_signals(
    clump: float, danger_values: Sequence[float], stats: SignalDerivationStats
) -> SignalVector:
    danger = statistics.fmean(abs(v - m) for v, m in zip(danger_values, stats.class1_means))
    gap = clump - stats.clump_median
    return SignalVector(
        pamp=-gap if gap < 0 else 0.0,
        danger=danger,
        safe=gap if gap > 0 else 0.0,
    )


def derive_event(record: RawRecord, stats: SignalDerivationStats) -> tuple[Antigen, SignalVector]:
    signals = derive_signals(
        record[CLUMP], [record[name] for name in DANGER_ATTRIBUTES], stats
    )
    return record.item_id, signals


def derive_events(
    records: Sequence[RawRecord], stats: SignalDerivationStats | None = None
) -> list[LabeledEvent]:
    """Events for every record; stats default to those of ``records`` itself."""
    stats = stats or compute_stats(records)
    events = []
    for r in records:
        antigen, signals = derive_event(r, stats)
        events.append(LabeledEvent(antigen, signals, r.label))
    return events


STREAM_HEADER = ("antigen_id", "pamp", "danger", "safe", "inflammatory", "true_label")


def _parse_antigen(raw: str) -> Antigen:
    return int(raw) if raw.lstrip("-").isdigit() else raw


def _parse_label(raw: str) -> ClassLabel:
    text = raw.strip().lower().replace("class", "").strip()
    try:
        return ClassLabel(int(text))
    except ValueError:
        raise ValueError(f"unknown class label {raw!r}") from None


def write_signal_stream(events: Iterable[LabeledEvent], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(STREAM_HEADER)
        for e in events:
            s = e.signals
            row = [e.antigen, repr(s.pamp), repr(s.danger), repr(s.safe), repr(s.inflammatory)]
            row.append("" if e.label is None else int(e.label))
            writer.writerow(row)


def read_signal_stream(path: str | Path) -> list[LabeledEvent]:
    """Read a pre-derived signal stream.

    Blank lines, ``#`` comments and a leading header row are skipped.
    The ``true_label`` column is optional and accepts ``1``/``2`` or
    ``class1``/``class2``.
    """
    events = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if row[0].strip() == STREAM_HEADER[0]:
                continue
            if len(row) not in (5, 6):
                raise DatasetFormatError(lineno, f"expected 5 or 6 fields, got {len(row)}")
            try:
                pamp, danger, safe, inflammatory = (float(v) for v in row[1:5])
                signals = SignalVector(pamp, danger, safe, inflammatory)
                label = _parse_label(row[5]) if len(row) == 6 and row[5].strip() else None
            except ValueError as exc:
                raise DatasetFormatError(lineno, str(exc)) from None
            events.append(LabeledEvent(_parse_antigen(row[0].strip()), signals, label))
    return events

