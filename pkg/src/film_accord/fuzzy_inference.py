"""Two-input Mamdani fuzzy inference with trapezoidal membership functions.

Operator choices are the standard Mamdani set: AND is min, implication is
clip (min), aggregation across rules is pointwise max, and defuzzification
is the centroid computed numerically on a fixed uniform grid so results are
identical across platforms.

The engine is generic over variable definitions; the stock agreement /
confidence / feedback system ships as a JSON definition file in
``film_accord/data/default_fis.json`` and can be swapped with ``--fis``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

CENTROID_GRID_POINTS = 1001
COVERAGE_SCAN_STEP = 0.01
_EDGE_EPS = 1e-9


class InferenceError(RuntimeError):
    """No rule produced a nonzero firing strength."""


@dataclass(frozen=True)
class TrapezoidMF:
    """Four-parameter trapezoid; a <= b <= c <= d.

    Degenerate forms are allowed: b == c gives a triangle, a == b or c == d
    a vertical edge (membership is 1 at the shared point).
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid parameters must be ordered a<=b<=c<=d, got {self}")

    def __call__(self, x: float) -> float:
        return membership(self, x)

    def sample(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized membership over a grid."""
        out = np.zeros_like(xs)
        plateau = (xs >= self.b) & (xs <= self.c)
        out[plateau] = 1.0
        if self.b > self.a:
            rise = (xs >= self.a) & (xs < self.b)
            out[rise] = (xs[rise] - self.a) / (self.b - self.a)
        if self.d > self.c:
            fall = (xs > self.c) & (xs <= self.d)
            out[fall] = (self.d - xs[fall]) / (self.d - self.c)
        return out

    def params(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]


def membership(mf: TrapezoidMF, x: float) -> float:
    """Trapezoid membership max(min((x-a)/(b-a), 1, (d-x)/(d-c)), 0).

    Vertical edges take value 1 at the shared point: the plateau test runs
    first, so x == a == b or x == c == d lands on the flat top.
    """
    if x < mf.a or x > mf.d:
        return 0.0
    if mf.b <= x <= mf.c:
        return 1.0
    if x < mf.b:
        return (x - mf.a) / (mf.b - mf.a)
    return (mf.d - x) / (mf.d - mf.c)


@dataclass(frozen=True)
class LinguisticVariable:
    """Named variable over a closed universe with ordered labelled terms."""

    name: str
    universe: tuple[float, float]
    terms: dict[str, TrapezoidMF]

    def __post_init__(self):
        lo, hi = self.universe
        if not lo < hi:
            raise ValueError(f"variable {self.name!r}: universe must satisfy lo < hi")
        if not self.terms:
            raise ValueError(f"variable {self.name!r}: no terms defined")
        for label, mf in self.terms.items():
            if mf.a < lo - _EDGE_EPS or mf.d > hi + _EDGE_EPS:
                raise ValueError(
                    f"variable {self.name!r}: term {label!r} support [{mf.a}, {mf.d}] "
                    f"leaves universe [{lo}, {hi}]"
                )
        self._check_coverage()

    def _check_coverage(self) -> None:
        # Grid scan: every point of the universe must belong to some term.
        lo, hi = self.universe
        x = lo
        while x <= hi + _EDGE_EPS:
            if all(membership(mf, min(x, hi)) == 0.0 for mf in self.terms.values()):
                raise ValueError(
                    f"variable {self.name!r}: no term covers x={min(x, hi):.2f}"
                )
            x += COVERAGE_SCAN_STEP

    def clamp(self, x: float) -> float:
        lo, hi = self.universe
        return min(max(x, lo), hi)

    def fuzzify(self, x: float) -> dict[str, float]:
        return {label: membership(mf, x) for label, mf in self.terms.items()}


@dataclass(frozen=True)
class FuzzyRule:
    """IF agreement is <x> AND confidence is <y> THEN feedback is <z>."""

    agreement_term: str
    confidence_term: str
    feedback_term: str


@dataclass(frozen=True)
class RuleBase:
    rules: tuple[FuzzyRule, ...]

    @classmethod
    def build(cls, rules) -> "RuleBase":
        return cls(tuple(rules))

    def validate_complete(self, agreement: LinguisticVariable, confidence: LinguisticVariable,
                          output: LinguisticVariable) -> None:
        """Every antecedent pair must appear exactly once, consequents must exist."""
        seen: dict[tuple[str, str], FuzzyRule] = {}
        for rule in self.rules:
            if rule.agreement_term not in agreement.terms:
                raise ValueError(f"rule references unknown agreement term {rule.agreement_term!r}")
            if rule.confidence_term not in confidence.terms:
                raise ValueError(f"rule references unknown confidence term {rule.confidence_term!r}")
            if rule.feedback_term not in output.terms:
                raise ValueError(f"rule references unknown feedback term {rule.feedback_term!r}")
            key = (rule.agreement_term, rule.confidence_term)
            if key in seen:
                raise ValueError(f"duplicate rule for antecedent pair {key}")
            seen[key] = rule
        missing = [
            (a, c)
            for a in agreement.terms
            for c in confidence.terms
            if (a, c) not in seen
        ]
        if missing:
            raise ValueError(f"rule base incomplete: missing antecedent pair(s) {missing}")


@dataclass(frozen=True)
class RuleActivation:
    rule: FuzzyRule
    strength: float


@dataclass(frozen=True)
class ActivationReport:
    """Everything that happened inside one inference call, for explanation UIs."""

    agreement_memberships: dict[str, float]
    confidence_memberships: dict[str, float]
    rule_activations: tuple[RuleActivation, ...]
    output_clips: dict[str, float]
    value: float

    def fired(self) -> tuple[RuleActivation, ...]:
        return tuple(act for act in self.rule_activations if act.strength > 0.0)


@dataclass(frozen=True)
class MamdaniSystem:
    """Configured two-input inference system; immutable and reusable."""

    agreement: LinguisticVariable
    confidence: LinguisticVariable
    output: LinguisticVariable
    rules: RuleBase
    _grid: np.ndarray = field(init=False, repr=False, compare=False)
    _term_samples: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.rules.validate_complete(self.agreement, self.confidence, self.output)
        lo, hi = self.output.universe
        grid = np.linspace(lo, hi, CENTROID_GRID_POINTS)
        object.__setattr__(self, "_grid", grid)
        object.__setattr__(
            self,
            "_term_samples",
            {label: mf.sample(grid) for label, mf in self.output.terms.items()},
        )

    def describe_activation(self, agreement: float, confidence: float) -> ActivationReport:
        """Run inference and report memberships, firing strengths and clips."""
        a = self.agreement.clamp(agreement)
        c = self.confidence.clamp(confidence)
        a_memberships = self.agreement.fuzzify(a)
        c_memberships = self.confidence.fuzzify(c)

        activations = []
        clips = {label: 0.0 for label in self.output.terms}
        for rule in self.rules.rules:
            strength = min(a_memberships[rule.agreement_term], c_memberships[rule.confidence_term])
            activations.append(RuleActivation(rule, strength))
            if strength > clips[rule.feedback_term]:
                clips[rule.feedback_term] = strength

        if max(clips.values()) == 0.0:
            raise InferenceError(
                f"no rule fired for agreement={agreement}, confidence={confidence}"
            )

        aggregated = np.zeros_like(self._grid)
        for label, level in clips.items():
            if level > 0.0:
                np.maximum(aggregated, np.minimum(self._term_samples[label], level), out=aggregated)
        value = float(np.sum(self._grid * aggregated) / np.sum(aggregated))
        return ActivationReport(
            agreement_memberships=a_memberships,
            confidence_memberships=c_memberships,
            rule_activations=tuple(activations),
            output_clips=clips,
            value=value,
        )

    def infer(self, agreement: float, confidence: float) -> float:
        """Defuzzified feedback value for one (agreement, confidence) pair."""
        return self.describe_activation(agreement, confidence).value


def _variable_from_spec(name: str, spec: dict) -> LinguisticVariable:
    try:
        universe = tuple(float(v) for v in spec["universe"])
        terms = {
            label: TrapezoidMF(*(float(p) for p in params))
            for label, params in spec["terms"].items()
        }
    except (KeyError, TypeError) as exc:
        raise ValueError(f"FIS definition: malformed variable {name!r}: {exc}") from None
    return LinguisticVariable(name=name, universe=universe, terms=terms)


def system_from_definition(definition: dict) -> MamdaniSystem:
    """Build a system from a parsed definition document."""
    try:
        variables = definition["variables"]
        rules_spec = definition["rules"]
    except KeyError as exc:
        raise ValueError(f"FIS definition: missing section {exc}") from None
    agreement = _variable_from_spec("agreement", variables["agreement"])
    confidence = _variable_from_spec("confidence", variables["confidence"])
    output = _variable_from_spec("feedback", variables["feedback"])
    rules = RuleBase.build(
        FuzzyRule(r["agreement"], r["confidence"], r["feedback"]) for r in rules_spec
    )
    return MamdaniSystem(agreement=agreement, confidence=confidence, output=output, rules=rules)


def load_fis(path: str | Path) -> MamdaniSystem:
    """Load a system from a JSON definition file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            definition = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not a valid FIS definition: {exc}") from None
    return system_from_definition(definition)


def default_definition() -> dict:
    """The packaged definition: Table-style rule grid plus stock calibration."""
    text = resources.files("film_accord.data").joinpath("default_fis.json").read_text("utf-8")
    return json.loads(text)


def default_system() -> MamdaniSystem:
    return system_from_definition(default_definition())
