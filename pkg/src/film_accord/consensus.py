"""Group consensus over a recommendation: per-participant feedback values via
the inference system, then dispersion (IQR), central tendency (mean) and the
level / verdict read off configurable bands.

Quantiles use linear interpolation on sorted order statistics. That choice is
load-bearing: it is the method under which the reference feedback quadruple
(5.0, 8.44, 4.99, 3.75) yields an IQR of 1.18, where Tukey hinges would give
2.35 instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .emotion_model import round2
from .fuzzy_inference import MamdaniSystem


class ConsensusLevel(str, Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    NONE = "None"


class Verdict(str, Enum):
    ACCEPTED = "Accepted"
    RE_EVALUATE = "ReEvaluate"


DEFAULT_MEAN_THRESHOLD = 5.0


@dataclass(frozen=True)
class IqrBands:
    """Level bands over the IQR, closed on the left band.

    iqr <= high_max is High, high_max < iqr <= medium_max is Medium,
    anything above is None.
    """

    high_max: float = 2.0
    medium_max: float = 4.0

    def __post_init__(self):
        if not 0 <= self.high_max <= self.medium_max:
            raise ValueError("bands must satisfy 0 <= high_max <= medium_max")

    def level(self, iqr: float) -> ConsensusLevel:
        if iqr <= self.high_max:
            return ConsensusLevel.HIGH
        if iqr <= self.medium_max:
            return ConsensusLevel.MEDIUM
        return ConsensusLevel.NONE


DEFAULT_BANDS = IqrBands()


@dataclass(frozen=True)
class FeedbackEntry:
    """One participant's agreement and confidence, both on a 0-10 scale."""

    participant: str
    agreement: float
    confidence: float

    def __post_init__(self):
        for name in ("agreement", "confidence"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and 0 <= value <= 10):
                raise ValueError(
                    f"participant {self.participant!r}: {name} must be in [0, 10], got {value!r}"
                )


@dataclass(frozen=True)
class ConsensusReport:
    feedback_values: tuple[float, ...]
    iqr: float
    mean: float
    level: ConsensusLevel
    verdict: Verdict

    def as_dict(self) -> dict:
        """Wire form: feedback values, iqr and mean at two decimals."""
        return {
            "feedback_values": [round2(v) for v in self.feedback_values],
            "iqr": round2(self.iqr),
            "mean": round2(self.mean),
            "level": self.level.value,
            "verdict": self.verdict.value,
        }


def feedback_value(entry: FeedbackEntry, fis: MamdaniSystem) -> float:
    """Defuzzified satisfaction score for one participant."""
    return fis.infer(entry.agreement, entry.confidence)


def quantile(values, q: float) -> float:
    """Linear-interpolation quantile on sorted order statistics.

    Position is q*(n-1); the result interpolates between the neighbouring
    order statistics.
    """
    if not values:
        raise ValueError("quantile of empty list")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile fraction must be in [0, 1], got {q!r}")
    ordered = sorted(values)
    position = q * (len(ordered) - 1)
    lower = int(math.floor(position))
    if lower + 1 >= len(ordered):
        return float(ordered[-1])
    frac = position - lower
    return float(ordered[lower] + frac * (ordered[lower + 1] - ordered[lower]))


def evaluate_consensus(
    values,
    bands: IqrBands = DEFAULT_BANDS,
    mean_threshold: float = DEFAULT_MEAN_THRESHOLD,
) -> ConsensusReport:
    """Dispersion, central tendency and verdict for a group's feedback values.

    Accepted requires both a consensus level better than None and a mean at
    or above the threshold; otherwise the group is asked to re-evaluate.
    """
    values = list(values)
    if len(values) < 2:
        raise ValueError("insufficient feedback: need at least 2 feedback values")
    iqr = quantile(values, 0.75) - quantile(values, 0.25)
    mean = sum(values) / len(values)
    level = bands.level(iqr)
    accepted = level is not ConsensusLevel.NONE and mean >= mean_threshold
    return ConsensusReport(
        feedback_values=tuple(values),
        iqr=iqr,
        mean=mean,
        level=level,
        verdict=Verdict.ACCEPTED if accepted else Verdict.RE_EVALUATE,
    )


def evaluate_entries(
    entries,
    fis: MamdaniSystem,
    bands: IqrBands = DEFAULT_BANDS,
    mean_threshold: float = DEFAULT_MEAN_THRESHOLD,
) -> ConsensusReport:
    """Full pipeline: feedback entries -> feedback values -> report.

    Order of ``entries`` fixes the order of the report's feedback values.
    """
    values = [feedback_value(entry, fis) for entry in entries]
    return evaluate_consensus(values, bands=bands, mean_threshold=mean_threshold)


def load_feedback_batch(path: str | Path) -> list[FeedbackEntry]:
    """Read a feedback batch file: a JSON list of participant entries."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not a valid feedback batch: {exc}") from None
    if not isinstance(raw, list):
        raise ValueError(f"{path}: feedback batch must be a JSON list")
    entries = []
    for i, item in enumerate(raw):
        try:
            entries.append(
                FeedbackEntry(
                    participant=str(item["participant"]),
                    agreement=float(item["agreement"]),
                    confidence=float(item["confidence"]),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{path}: entry {i}: malformed ({exc})") from None
    return entries
