"""Serializable run reports with lossless JSON round-tripping.

Top-level keys: instance, matching, witness, verdicts, trace.  Values are
plain JSON types; floats survive serialize/parse exactly because Python's
JSON encoder emits shortest round-trip decimals.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from .descent import DescentStep
from .matching import Matching, PointSet
from .verify import Verdict
from .witness import WitnessResult


@dataclass(frozen=True)
class Report:
    instance: dict[str, Any]
    matching: dict[str, Any] | None = None
    witness: dict[str, Any] | None = None
    verdicts: dict[str, Any] = field(default_factory=dict)
    trace: list[dict[str, Any]] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"instance": self.instance, "verdicts": self.verdicts}
        if self.matching is not None:
            out["matching"] = self.matching
        if self.witness is not None:
            out["witness"] = self.witness
        if self.trace is not None:
            out["trace"] = self.trace
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Report":
        return cls(
            instance=data["instance"],
            matching=data.get("matching"),
            witness=data.get("witness"),
            verdicts=data.get("verdicts", {}),
            trace=data.get("trace"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def instance_dict(
    s: PointSet, *, generator: str | None = None, seed: int | None = None
) -> dict[str, Any]:
    return {
        "generator": generator,
        "seed": seed,
        "count": len(s),
        "points": [[x, y] for x, y in s],
    }


def matching_dict(m: Matching) -> dict[str, Any]:
    return {"pairs": [[i, j] for i, j in m.pairs], "cost": m.cost}


def matching_from_dict(data: dict[str, Any], s: PointSet) -> Matching:
    return Matching.from_pairs(s, data["pairs"])


def witness_dict(w: WitnessResult) -> dict[str, Any]:
    return {
        "o_star": [w.o_star[0], w.o_star[1]],
        "lambda_star": w.lambda_star,
        "active": list(w.active),
        "support": list(w.support) if w.support is not None else None,
        "certificate": [[e, c] for e, c in w.certificate],
        "residual": w.residual,
        "iterations": w.iterations,
        "converged": w.converged,
    }


def verdict_dict(v: Verdict) -> dict[str, Any]:
    return {
        "name": v.name,
        "passed": v.passed,
        "margin": v.margin,
        "tolerance": v.tolerance,
        "details": v.details,
    }


def trace_list(steps: Sequence[DescentStep]) -> list[dict[str, Any]]:
    return [
        {"lambda_star": st.lambda_star, "cost": st.cost, "cycle_length": st.cycle_length}
        for st in steps
    ]
