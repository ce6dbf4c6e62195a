import math

import pytest
from hypothesis import given, strategies as st

from dca.signals import (
    DEFAULT_WEIGHTS,
    ChannelWeights,
    CytokineOutput,
    NormalizationMode,
    SignalVector,
    WeightMatrix,
    process_signals,
)

PER = NormalizationMode.PER_OUTPUT_WEIGHT_SUM
TWICE = NormalizationMode.EQ1_TIMES_TWO

conc = st.floats(min_value=0, max_value=1e3, allow_nan=False, allow_infinity=False)
weight = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
signals = st.builds(SignalVector, conc, conc, conc, conc)
channels = st.builds(ChannelWeights, weight, weight, weight)
matrices = st.builds(WeightMatrix, channels, channels, channels)
modes = st.sampled_from(list(NormalizationMode))


def naive(s, w, mode):
    """Independent restatement of the transform, channel by channel."""
    out = []
    for ch in (w.csm, w.semi, w.mat):
        total = ch.pamp + ch.danger + ch.safe
        value = (ch.pamp * s.pamp + ch.danger * s.danger + ch.safe * s.safe) * (1 + s.inflammatory)
        value /= total if total else 1
        out.append(value * (2 if mode is TWICE else 1))
    return tuple(out)


def test_default_weights():
    assert DEFAULT_WEIGHTS.csm == ChannelWeights(pamp=2, danger=1, safe=2)
    assert DEFAULT_WEIGHTS.semi == ChannelWeights(pamp=0, danger=0, safe=3)
    assert DEFAULT_WEIGHTS.mat == ChannelWeights(pamp=2, danger=1, safe=-3)


def test_reference_item():
    out = process_signals(SignalVector(pamp=0, danger=1.8975, safe=6), DEFAULT_WEIGHTS, PER)
    assert out.csm == pytest.approx(2.7795, abs=1e-9)
    assert out.semi == pytest.approx(6.0, abs=1e-9)
    assert out.mat == pytest.approx(-16.1025, abs=1e-9)


def test_pamp_only_hand_values():
    # csm: 2/5; semi: 0/3; mat: 2/(2+1-3 -> 1)
    out = process_signals(SignalVector(pamp=1), DEFAULT_WEIGHTS, PER)
    assert out.as_tuple() == pytest.approx((0.4, 0.0, 2.0), abs=1e-12)


def test_inflammatory_one_doubles_reference_item():
    out = process_signals(SignalVector(danger=1.8975, safe=6, inflammatory=1), DEFAULT_WEIGHTS, PER)
    assert out.as_tuple() == pytest.approx((5.559, 12.0, -32.205), abs=1e-9)


def test_eq1_mode_reference_item():
    out = process_signals(SignalVector(danger=1.8975, safe=6), DEFAULT_WEIGHTS, TWICE)
    assert out.as_tuple() == pytest.approx((5.559, 12.0, -32.205), abs=1e-9)


@pytest.mark.parametrize("mode", list(NormalizationMode))
def test_zero_input(mode):
    assert process_signals(SignalVector(), DEFAULT_WEIGHTS, mode) == CytokineOutput(0, 0, 0)


@pytest.mark.parametrize("field", ["pamp", "danger", "safe", "inflammatory"])
@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_signal_vector_rejects_bad_values(field, bad):
    with pytest.raises(ValueError):
        SignalVector(**{field: bad})


def test_weights_reject_non_finite():
    with pytest.raises(ValueError):
        ChannelWeights(math.nan, 0, 0)


def test_process_signals_rejects_non_vector():
    with pytest.raises(ValueError):
        process_signals((0, 0, 0, 0))


def test_weight_matrix_dict_round_trip():
    assert WeightMatrix.from_dict(DEFAULT_WEIGHTS.to_dict()) == DEFAULT_WEIGHTS
    partial = WeightMatrix.from_dict({"mat": {"safe": -1}})
    assert partial.mat == ChannelWeights(2, 1, -1)
    assert partial.csm == DEFAULT_WEIGHTS.csm
    with pytest.raises(ValueError):
        WeightMatrix.from_dict({"csm": {"tnf": 1}})
    with pytest.raises(ValueError):
        WeightMatrix.from_dict({"il10": {}})


@given(signals, matrices, modes)
def test_matches_naive_formula(s, w, mode):
    assert process_signals(s, w, mode).as_tuple() == pytest.approx(naive(s, w, mode), rel=1e-12, abs=1e-9)


@given(signals, matrices, modes, st.floats(min_value=0, max_value=100))
def test_linear_in_inflammatory(s, w, mode, k):
    base = process_signals(SignalVector(s.pamp, s.danger, s.safe, 0), w, mode)
    amplified = process_signals(SignalVector(s.pamp, s.danger, s.safe, k), w, mode)
    assert amplified.as_tuple() == pytest.approx(base.scaled(1 + k).as_tuple(), rel=1e-9, abs=1e-9)


@given(signals, matrices)
def test_eq1_mode_is_twice_default(s, w):
    per = process_signals(s, w, PER)
    twice = process_signals(s, w, TWICE)
    assert twice.as_tuple() == pytest.approx(per.scaled(2).as_tuple(), rel=1e-12, abs=1e-12)


@given(
    signals,
    st.sampled_from(["pamp", "danger", "safe"]),
    st.floats(min_value=0.01, max_value=100),
    modes,
)
def test_channel_monotonicity(s, field, delta, mode):
    bumped = SignalVector(**{**vars(s), field: getattr(s, field) + delta})
    before = process_signals(s, DEFAULT_WEIGHTS, mode)
    after = process_signals(bumped, DEFAULT_WEIGHTS, mode)
    for channel in ("csm", "semi", "mat"):
        w = getattr(getattr(DEFAULT_WEIGHTS, channel), field)
        diff = getattr(after, channel) - getattr(before, channel)
        if w > 0:
            assert diff > 0
        elif w < 0:
            assert diff < 0
        else:
            assert diff == 0
