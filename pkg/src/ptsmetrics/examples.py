"""Bundled model files and the table of values they are expected to produce."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from .modelfile import Model, parse_model
from .pts import parallel_compose
from .testing_metrics import TestingMetricSpec, TestSuite, testing_hemimetric
from .trace_metrics import MetricResult, TraceMetricSpec, trace_hemimetric


def corpus_files() -> list:
    root = resources.files("ptsmetrics") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".pts"))


def corpus_text(name: str) -> str:
    return (resources.files("ptsmetrics") / "corpus" / name).read_text()


def load_corpus(name: str, params: Optional[dict] = None) -> Model:
    return parse_model(corpus_text(name), params)


def expected_table() -> list:
    text = (resources.files("ptsmetrics") / "corpus" / "expected.json").read_text()
    return json.loads(text)["examples"]


@dataclass
class ExampleOutcome:
    entry: dict
    result: MetricResult

    @property
    def id(self) -> str:
        return self.entry["id"]

    @property
    def ok(self) -> bool:
        return self.result.value == Fraction(self.entry["expected"])

    @property
    def reference_differs(self) -> bool:
        ref = self.entry.get("reference")
        return ref is not None and Fraction(ref) != self.result.value


def compute_example(entry: dict) -> MetricResult:
    """Recompute one row of the expected table."""
    model = load_corpus(entry["file"], entry.get("params"))
    p, left = model.find_state(entry["left"])
    p_t, right = model.find_state(entry["right"])
    if entry.get("compose"):
        # compare left||left with right||right
        p = parallel_compose(p, p_t, roots=[(left, left), (right, right)])
        p_t, left, right = p, (left, left), (right, right)
    lam = Fraction(entry.get("lambda", "1"))
    direction = entry.get("direction", "left")
    if entry["kind"] == "trace":
        spec = TraceMetricSpec(entry["approach"], entry.get("scheduler", "det"), lam,
                               entry.get("depth", 2), direction, entry.get("grid"))
        return trace_hemimetric(p, left, right, spec, p_t)
    names = entry.get("tests") or [o.name for o in model.tests()]
    suite = TestSuite({n: model.systems[n] for n in names},
                      {n: w for n, w in model.omega.items() if n in names})
    spec = TestingMetricSpec(entry["approach"], entry.get("scheduler", "det"), lam,
                             entry.get("depth"), direction)
    return testing_hemimetric(p, left, right, suite, spec, p_t)


def verify_examples(ids=None) -> list:
    out = []
    for entry in expected_table():
        if ids is None or entry["id"] in ids:
            out.append(ExampleOutcome(entry, compute_example(entry)))
    return out
