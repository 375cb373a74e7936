"""Points, labels, predictions, stream events and error tallies."""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Any, Iterator, Union

import numpy as np

# A point is a float in [0, 1], a tuple of p floats, or an integer tree node id.
Point = Union[float, tuple, int]


class Prediction(enum.IntEnum):
    ZERO = 0
    ONE = 1
    ABSTAIN = 2

    @classmethod
    def of_label(cls, y: int) -> "Prediction":
        return cls.ONE if y else cls.ZERO


ABSTAIN = Prediction.ABSTAIN


class Origin(enum.Enum):
    IID = "iid"
    INJECTED = "injected"


class Mode(enum.Enum):
    REALIZABLE = "realizable"
    AGNOSTIC = "agnostic"


def check_label(y: Any) -> int:
    if isinstance(y, (bool, np.bool_)):
        return int(y)
    if isinstance(y, (int, np.integer)) and int(y) in (0, 1):
        return int(y)
    raise ValueError(f"label must be 0 or 1, got {y!r}")


def normalize_point(x: Any) -> Point:
    """Canonical hashable form: float, tuple of floats or int."""
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not points")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return tuple(float(v) for v in np.asarray(x, dtype=float).ravel())
    raise TypeError(f"unsupported point {x!r}")


@dataclass(frozen=True)
class StreamEvent:
    point: Point
    origin: Origin
    clean_label: int
    observed_label: int
    round_index: int


@dataclass(frozen=True)
class ErrorTally:
    mis_realizable: int = 0
    mis_agnostic: int = 0
    abstain_on_iid: int = 0

    def mis(self, mode: Mode) -> int:
        return self.mis_agnostic if mode is Mode.AGNOSTIC else self.mis_realizable


def tally_delta(event: StreamEvent, prediction: Prediction, mode: Mode) -> ErrorTally:
    """Per-round contribution; tally_update is the running sum of these."""
    abst = int(prediction == ABSTAIN and event.origin is Origin.IID)
    committed = prediction != ABSTAIN
    if mode is Mode.REALIZABLE:
        return ErrorTally(int(committed and int(prediction) != event.observed_label), 0, abst)
    wrong = int(committed and int(prediction) != event.observed_label)
    target_wrong = int(event.clean_label != event.observed_label)
    return ErrorTally(0, wrong - target_wrong, abst)


def tally_update(tally: ErrorTally, event: StreamEvent, prediction: Prediction,
                 mode: Mode) -> ErrorTally:
    d = tally_delta(event, prediction, mode)
    return replace(
        tally,
        mis_realizable=tally.mis_realizable + d.mis_realizable,
        mis_agnostic=tally.mis_agnostic + d.mis_agnostic,
        abstain_on_iid=tally.abstain_on_iid + d.abstain_on_iid,
    )


class LabeledSet:
    """Labeled points in arrival order; origins are kept for the harness only."""

    def __init__(self, items=()):
        self._points: list = []
        self._labels: list = []
        self._origins: list = []
        for it in items:
            self.append(*it)

    def append(self, x, y, origin: Origin = Origin.IID) -> None:
        self._points.append(normalize_point(x))
        self._labels.append(check_label(y))
        self._origins.append(origin)

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[tuple]:
        return iter(zip(self._points, self._labels))

    def pairs(self) -> list:
        return list(zip(self._points, self._labels))

    def distinct_pairs(self) -> list:
        """Pairs with repeats removed, first occurrence order."""
        return list(dict.fromkeys(zip(self._points, self._labels)))

    @property
    def origins(self) -> list:
        return list(self._origins)

    def copy(self) -> "LabeledSet":
        out = LabeledSet()
        out._points = list(self._points)
        out._labels = list(self._labels)
        out._origins = list(self._origins)
        return out
