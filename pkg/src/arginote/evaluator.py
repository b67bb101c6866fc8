"""Pluggable scoring of solution payloads against a configured challenge."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

GAUSSIAN_PROXIMITY = "gaussian-proximity"

Scorer = Callable[[Mapping[str, Any], Any], float]


class UnknownChallengeKindError(KeyError):
    pass


class DuplicateKindError(ValueError):
    pass


class MalformedPayloadError(ValueError):
    """Payload does not match the challenge kind's schema."""


class DimensionMismatchError(ValueError):
    pass


class NonFiniteInputError(ValueError):
    pass


@dataclass(frozen=True)
class Challenge:
    id: str
    kind: str
    params: Mapping[str, Any]

    def to_doc(self) -> dict[str, Any]:
        return {"id": self.id, "kind": self.kind, "params": dict(self.params)}

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "Challenge":
        if not isinstance(doc, Mapping):
            raise ValueError("challenge must be an object")
        cid = doc.get("id")
        kind = doc.get("kind")
        params = doc.get("params")
        if not isinstance(cid, str) or not cid:
            raise ValueError("challenge id must be a non-empty string")
        if not isinstance(kind, str) or not kind:
            raise ValueError("challenge kind must be a non-empty string")
        if not isinstance(params, Mapping):
            raise ValueError("challenge params must be an object")
        return cls(id=cid, kind=kind, params=dict(params))


class EvaluatorRegistry:
    """Maps challenge kinds to pure scoring functions.

    Frozen after service startup; scorers must be deterministic and reentrant.
    """

    def __init__(self) -> None:
        self._scorers: dict[str, Scorer] = {}

    def register(self, kind: str, scorer: Scorer) -> "EvaluatorRegistry":
        if kind in self._scorers:
            raise DuplicateKindError(f"evaluator kind {kind!r} already registered")
        self._scorers[kind] = scorer
        return self

    def kinds(self) -> list[str]:
        return sorted(self._scorers)

    def evaluate(self, challenge: Challenge, payload: Any) -> float:
        scorer = self._scorers.get(challenge.kind)
        if scorer is None:
            raise UnknownChallengeKindError(challenge.kind)
        score = scorer(challenge.params, payload)
        if not isinstance(score, float) or not 0.0 <= score <= 1.0:
            raise ValueError(f"scorer for {challenge.kind!r} returned {score!r}, not in [0, 1]")
        return score


def gaussian_proximity(params: Mapping[str, Any], payload: Any) -> float:
    """exp(-squared Euclidean distance) to the configured target vector.

    Returns 1.0 exactly when the submitted vector equals the target, and
    decays smoothly toward 0 with distance.
    """
    target = _finite_vector(params.get("target"), "challenge target")
    dimension = params.get("dimension", len(target))
    if isinstance(dimension, bool) or not isinstance(dimension, int) or dimension < 1:
        raise ValueError("challenge dimension must be a positive integer")
    if len(target) != dimension:
        raise ValueError(f"challenge target has {len(target)} entries, dimension is {dimension}")

    if not isinstance(payload, Mapping) or "params" not in payload:
        raise MalformedPayloadError('payload must be an object with a "params" array')
    raw = payload["params"]
    if not isinstance(raw, list) or any(
        isinstance(item, bool) or not isinstance(item, (int, float)) for item in raw
    ):
        raise MalformedPayloadError('"params" must be an array of numbers')
    if len(raw) != dimension:
        raise DimensionMismatchError(f"expected {dimension} params, got {len(raw)}")
    vector = [float(item) for item in raw]
    if any(not math.isfinite(item) for item in vector):
        raise NonFiniteInputError("params must be finite numbers")

    squared_distance = math.fsum((x - t) ** 2 for x, t in zip(vector, target))
    if squared_distance == 0.0:
        return 1.0
    score = math.exp(-squared_distance)
    if score >= 1.0:
        # exp rounds to 1.0 for sub-resolution distances; keep the perfect
        # score reserved for an exactly-zero norm.
        return math.nextafter(1.0, 0.0)
    return score


def _finite_vector(value: Any, label: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ValueError(f"{label} must be a non-empty array of numbers")
    out: list[float] = []
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)) or not math.isfinite(item):
            raise ValueError(f"{label} must contain only finite numbers")
        out.append(float(item))
    return out


def default_registry() -> EvaluatorRegistry:
    registry = EvaluatorRegistry()
    registry.register(GAUSSIAN_PROXIMITY, gaussian_proximity)
    return registry


def load_challenge(path: str | Path) -> Challenge:
    """Parse a challenge configuration file (JSON: {id, kind, params})."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return Challenge.from_doc(doc)
