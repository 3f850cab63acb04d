#!/usr/bin/env python3
"""Search membership-function parameters for the stock inference system.

Hard constraints baked into the search space:
  * agreement 6 must fuzzify to Neutral 0.5 / Agree 0.5 (published example),
  * the Moderate output term stays symmetric about 5 (forces infer(6,4)=5),
  * Sure must be 0 at confidence 4 and 5 so the (6,4) and (5,5) cases fire
    only Moderate consequents,
  * every variable keeps full universe coverage.

The objective scores the five published worked examples plus the derived
group statistics (IQR 1.18, mean 5.54) and global agreement-monotonicity.
Writes nothing; prints candidates so the winner can be copied into
src/film_accord/data/default_fis.json.
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from film_accord.consensus import evaluate_consensus
from film_accord.fuzzy_inference import MamdaniSystem, system_from_definition


def build_definition(sure_a: float, conf_neutral_d: float, strong_a: float,
                     strong_b: float, weak_c: float, weak_d: float) -> dict:
    return {
        "variables": {
            "agreement": {
                "universe": [0, 10],
                "terms": {
                    "Strongly Disagree": [0, 0, 1, 3],
                    "Disagree": [1, 3, 4, 5],
                    "Neutral": [3, 4, 5, 7],
                    "Agree": [5, 7, 8, 9],
                    "Strongly Agree": [8, 9, 10, 10],
                },
            },
            "confidence": {
                "universe": [0, 10],
                "terms": {
                    "Unsure": [0, 0, 2, 5],
                    "Neutral": [2, 5, 5, conf_neutral_d],
                    "Sure": [sure_a, 10, 10, 10],
                },
            },
            "feedback": {
                "universe": [0, 10],
                "terms": {
                    "Weak": [0, 0, weak_c, weak_d],
                    "Moderate": [3, 4, 6, 7],
                    "Strong": [strong_a, strong_b, 10, 10],
                },
            },
        },
        "rules": [
            {"agreement": a, "confidence": c, "feedback": f}
            for (a, c, f) in [
                ("Strongly Agree", "Unsure", "Moderate"),
                ("Strongly Agree", "Neutral", "Strong"),
                ("Strongly Agree", "Sure", "Strong"),
                ("Agree", "Unsure", "Moderate"),
                ("Agree", "Neutral", "Moderate"),
                ("Agree", "Sure", "Strong"),
                ("Neutral", "Unsure", "Moderate"),
                ("Neutral", "Neutral", "Moderate"),
                ("Neutral", "Sure", "Strong"),
                ("Disagree", "Unsure", "Moderate"),
                ("Disagree", "Neutral", "Moderate"),
                ("Disagree", "Sure", "Weak"),
                ("Strongly Disagree", "Unsure", "Moderate"),
                ("Strongly Disagree", "Neutral", "Weak"),
                ("Strongly Disagree", "Sure", "Weak"),
            ]
        ],
    }


WORKED = [((6, 4), 5.0, 0.05), ((9, 6), 8.44, 0.5), ((5, 5), 4.99, 0.5),
          ((3, 7), 3.75, 0.5), ((8.8, 3.4), 6.94, 0.5)]


def worst_dip(fis: MamdaniSystem) -> float:
    dip = 0.0
    for confidence in (0.0, 5.0, 10.0):
        running = -1e9
        a = 0.0
        while a <= 10.0001:
            value = fis.infer(a, confidence)
            dip = max(dip, running - value)
            running = max(running, value)
            a += 0.1
    return dip


def score(fis: MamdaniSystem):
    for (pair, target, tol) in WORKED:
        if abs(fis.infer(*pair) - target) > tol:
            return None
    values = [fis.infer(6, 4), fis.infer(9, 6), fis.infer(5, 5), fis.infer(3, 7)]
    report = evaluate_consensus(values)
    if abs(report.iqr - 1.18) > 0.009 or abs(report.mean - 5.54) > 0.009:
        return None
    if worst_dip(fis) > 0.1:
        return None
    return abs(report.iqr - 1.18) + abs(report.mean - 5.54)


def main() -> None:
    best = None
    space = itertools.product(
        [4.9, 5.0, 5.1, 5.2],        # sure_a
        [9.0, 9.5, 10.0],            # conf_neutral_d
        [6.6, 6.7, 6.8],             # strong_a (strong_b = strong_a + 0.4)
        [2.8],                       # weak_c (weak_d = weak_c + 0.4)
    )
    for sure_a, conf_neutral_d, strong_a, weak_c in space:
        definition = build_definition(
            sure_a, conf_neutral_d, strong_a, strong_a + 0.4, weak_c, weak_c + 0.4
        )
        try:
            fis = system_from_definition(definition)
        except ValueError:
            continue
        result = score(fis)
        if result is None:
            continue
        print(f"feasible: sure_a={sure_a} conf_neutral_d={conf_neutral_d} "
              f"strong=({strong_a},{strong_a + 0.4}) weak=({weak_c},{weak_c + 0.4}) "
              f"objective={result:.4f}")
        if best is None or result < best[0]:
            best = (result, sure_a, conf_neutral_d, strong_a, weak_c)
    if best is None:
        print("no feasible calibration in the search box")
        return
    _, sure_a, conf_neutral_d, strong_a, weak_c = best
    print(f"\nwinner: Sure=({sure_a},10,10,10) ConfNeutral=(2,5,5,{conf_neutral_d}) "
          f"Strong=({strong_a},{strong_a + 0.4},10,10) Weak=(0,0,{weak_c},{weak_c + 0.4})")
    fis = system_from_definition(build_definition(
        sure_a, conf_neutral_d, strong_a, strong_a + 0.4, weak_c, weak_c + 0.4))
    for (pair, target, tol) in WORKED:
        print(f"  infer{pair} = {fis.infer(*pair):.4f}  (target {target} +/- {tol})")
    values = [fis.infer(6, 4), fis.infer(9, 6), fis.infer(5, 5), fis.infer(3, 7)]
    report = evaluate_consensus(values)
    print(f"  derived IQR {report.iqr:.4f}, mean {report.mean:.4f}, dip {worst_dip(fis):.4f}")


if __name__ == "__main__":
    main()
