"""Per-antigen tally of presentation contexts and the final classification."""

from __future__ import annotations

import enum
from typing import Iterable, Iterator

from .cell import Antigen, Context, Presentation

DEFAULT_CLASSIFICATION_THRESHOLD = 0.65


class ClassLabel(enum.IntEnum):
    CLASS1 = 1
    CLASS2 = 2


class UnseenAntigenError(LookupError):
    """Raised when asking for the maturity of an antigen that was never presented."""


class PresentationLedger:
    """Mature and semi-mature presentation counts per antigen.

    Ledgers built from disjoint presentation streams combine with ``merge``
    (or ``+``) by adding counts.  Iteration follows first-presentation order.
    """

    def __init__(self) -> None:
        self._counts: dict[Antigen, list[int]] = {}

    def record(self, presentation: Presentation) -> PresentationLedger:
        slot = 0 if presentation.context is Context.MATURE else 1
        for antigen in presentation.antigens:
            self._counts.setdefault(antigen, [0, 0])[slot] += 1
        return self

    def record_all(self, presentations: Iterable[Presentation]) -> PresentationLedger:
        for p in presentations:
            self.record(p)
        return self

    def counts(self, antigen: Antigen) -> tuple[int, int]:
        """``(mature_count, semi_count)``; ``(0, 0)`` for unseen antigen."""
        mature, semi = self._counts.get(antigen, (0, 0))
        return mature, semi

    def __contains__(self, antigen: Antigen) -> bool:
        return antigen in self._counts

    def __iter__(self) -> Iterator[Antigen]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    @property
    def total(self) -> int:
        return sum(m + s for m, s in self._counts.values())

    def maturity_fraction(self, antigen: Antigen) -> float:
        mature, semi = self.counts(antigen)
        if mature + semi == 0:
            raise UnseenAntigenError(f"antigen {antigen!r} was never presented")
        return mature / (mature + semi)

    def classify(
        self, antigen: Antigen, threshold: float = DEFAULT_CLASSIFICATION_THRESHOLD
    ) -> ClassLabel:
        """Class 2 iff the maturity fraction strictly exceeds ``threshold``.

        ``threshold=0.5`` gives the plain "more mature than semi-mature" rule.
        """
        if self.maturity_fraction(antigen) > threshold:
            return ClassLabel.CLASS2
        return ClassLabel.CLASS1

    def merge(self, other: PresentationLedger) -> PresentationLedger:
        merged = PresentationLedger()
        for source in (self, other):
            for antigen, (mature, semi) in source._counts.items():
                slot = merged._counts.setdefault(antigen, [0, 0])
                slot[0] += mature
                slot[1] += semi
        return merged

    __add__ = merge

    def as_dict(self) -> dict[Antigen, tuple[int, int]]:
        return {a: (m, s) for a, (m, s) in self._counts.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PresentationLedger):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self) -> str:
        return f"PresentationLedger({len(self)} antigens, {self.total} presentations)"
