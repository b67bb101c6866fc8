from __future__ import annotations

import math
import random

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from arginote.evaluator import (
    Challenge,
    DimensionMismatchError,
    DuplicateKindError,
    EvaluatorRegistry,
    MalformedPayloadError,
    NonFiniteInputError,
    UnknownChallengeKindError,
    default_registry,
    gaussian_proximity,
    load_challenge,
)

ORIGIN = Challenge(id="c", kind="gaussian-proximity", params={"dimension": 2, "target": [0.0, 0.0]})

# Reference value from an independent high-precision path.
EXP_MINUS_ONE = float(mpmath.exp(-1))


def test_exact_target_scores_one():
    assert default_registry().evaluate(ORIGIN, {"params": [0.0, 0.0]}) == 1.0


def test_unit_offset_matches_high_precision_reference():
    score = default_registry().evaluate(ORIGIN, {"params": [1.0, 0.0]})
    assert score == pytest.approx(EXP_MINUS_ONE, abs=1e-12)
    assert score == pytest.approx(0.367879441, abs=1e-9)


def test_misspelled_params_key_is_malformed():
    with pytest.raises(MalformedPayloadError):
        gaussian_proximity(ORIGIN.params, {"parms": [1, 0]})


def test_non_list_params_is_malformed():
    with pytest.raises(MalformedPayloadError):
        gaussian_proximity(ORIGIN.params, {"params": "nope"})
    with pytest.raises(MalformedPayloadError):
        gaussian_proximity(ORIGIN.params, {"params": [True, False]})


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        gaussian_proximity(ORIGIN.params, {"params": [1.0]})


def test_non_finite_input():
    with pytest.raises(NonFiniteInputError):
        gaussian_proximity(ORIGIN.params, {"params": [float("inf"), 0.0]})


def test_registry_dispatch_and_duplicate_kind():
    registry = EvaluatorRegistry()
    registry.register("gaussian-proximity", gaussian_proximity)
    assert registry.evaluate(ORIGIN, {"params": [0.0, 0.0]}) == 1.0
    with pytest.raises(DuplicateKindError):
        registry.register("gaussian-proximity", gaussian_proximity)


def test_unknown_kind():
    registry = default_registry()
    qc = Challenge(id="qc1", kind="qc", params={})
    with pytest.raises(UnknownChallengeKindError):
        registry.evaluate(qc, {"params": [0.0, 0.0]})


def test_determinism_on_structurally_equal_payloads():
    a = default_registry().evaluate(ORIGIN, {"params": [0.25, -1.5]})
    b = default_registry().evaluate(ORIGIN, {"params": [0.25, -1.5]})
    assert a == b


def test_scores_in_range_for_random_vectors():
    rng = random.Random(42)
    registry = default_registry()
    for _ in range(10_000):
        payload = {"params": [rng.uniform(-100, 100), rng.uniform(-100, 100)]}
        score = registry.evaluate(ORIGIN, payload)
        assert 0.0 <= score <= 1.0


vectors = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=2, max_size=2
)


@given(x1=vectors, x2=vectors)
@settings(max_examples=300)
def test_closer_vectors_score_strictly_higher(x1, x2):
    d1 = math.fsum(v * v for v in x1)
    d2 = math.fsum(v * v for v in x2)
    # Sub-ulp distance gaps can round to the same score; require a real gap.
    assume(abs(d1 - d2) > 1e-12 * max(d1, d2, 1.0))
    s1 = gaussian_proximity(ORIGIN.params, {"params": x1})
    s2 = gaussian_proximity(ORIGIN.params, {"params": x2})
    if d1 < d2:
        assert s1 > s2
    else:
        assert s2 > s1


@given(vectors)
@settings(max_examples=300)
def test_maximum_exactly_at_zero_norm(x):
    score = gaussian_proximity(ORIGIN.params, {"params": x})
    squared_norm = math.fsum(v * v for v in x)  # independent recompute
    assert (score == 1.0) == (squared_norm == 0.0)


def test_near_target_scores_stay_below_one():
    score = gaussian_proximity(ORIGIN.params, {"params": [1e-9, 0.0]})
    assert score < 1.0


def test_challenge_config_file_round_trip(tmp_path):
    path = tmp_path / "challenge.json"
    path.write_text(
        '{"id": "origin", "kind": "gaussian-proximity",'
        ' "params": {"dimension": 2, "target": [0.0, 0.0]}}'
    )
    challenge = load_challenge(path)
    assert challenge.id == "origin"
    assert challenge.kind == "gaussian-proximity"
    assert default_registry().evaluate(challenge, {"params": [0, 0]}) == 1.0


def test_malformed_challenge_config(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"id": "x"}')
    with pytest.raises(ValueError):
        load_challenge(path)
