import dataclasses

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tvws import (
    BandPlan,
    FREE,
    OCCUPIED,
    classify,
    compute_threshold,
    decisions_to_csv,
    white_spaces,
)
from util import make_record

THREE_CHANNEL_PLAN = BandPlan(100_000_000, 103_000_000, 1_000_000)  # 4 samples/channel at 250 kHz


def brute_force_decisions(record, plan, gamma_db):
    """Independent oracle: loop over every (channel, sample) pair."""
    out = []
    for k in range(plan.channel_count):
        start, end = plan.channel_start_hz(k), plan.channel_end_hz(k)
        powers = [s.power_db for s in record.samples if start <= s.f_center_hz < end]
        n_above = 0
        p_max = powers[0]
        for p in powers:
            if p > gamma_db:
                n_above += 1
            if p > p_max:
                p_max = p
        out.append((k, OCCUPIED if n_above >= 1 else FREE, p_max, n_above))
    return out


def shifted(record, c):
    samples = tuple(dataclasses.replace(s, power_db=s.power_db + c) for s in record.samples)
    return dataclasses.replace(record, samples=samples)


class TestComputeThreshold:
    def test_midpoint_of_min_and_max(self):
        record = make_record([-100.0, -60.0, -40.0])
        threshold = compute_threshold(record)
        assert threshold.gamma_db == -70.0
        assert threshold.min_db == -100.0
        assert threshold.max_db == -40.0

    def test_degenerate_constant_record(self):
        record = make_record([-90.0] * 12, f_min_hz=100_000_000)
        threshold = compute_threshold(record)
        assert threshold.gamma_db == -90.0
        decisions = classify(record, THREE_CHANNEL_PLAN, threshold)
        assert all(d.verdict == FREE for d in decisions)

    def test_empty_record_rejected(self):
        record = dataclasses.replace(make_record([-90.0]), samples=())
        with pytest.raises(ValueError, match="empty"):
            compute_threshold(record)

    @given(st.lists(st.floats(-160.0, -10.0), min_size=1, max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_threshold_always_between_min_and_max(self, powers):
        threshold = compute_threshold(make_record(powers))
        assert threshold.min_db <= threshold.gamma_db <= threshold.max_db
        assert threshold.gamma_db == (min(powers) + max(powers)) / 2.0


class TestClassify:
    def test_all_below_threshold_is_free(self):
        record = make_record([-80.0] * 12)
        threshold = compute_threshold(make_record([-80.0, -60.0]))  # gamma -70
        decisions = classify(record, THREE_CHANNEL_PLAN, threshold)
        assert [d.verdict for d in decisions] == [FREE] * 3

    def test_single_sample_above_marks_whole_channel(self):
        powers = [-80.0] * 12
        powers[5] = -69.9  # one narrowband blip in channel 1
        record = make_record(powers)
        threshold = compute_threshold(make_record([-80.0, -60.0]))  # gamma -70
        decisions = classify(record, THREE_CHANNEL_PLAN, threshold)
        assert [d.verdict for d in decisions] == [FREE, OCCUPIED, FREE]
        assert decisions[1].n_exceeding == 1
        assert decisions[1].p_max_db == -69.9

    def test_samples_exactly_at_threshold_are_free(self):
        record = make_record([-70.0] * 12)
        threshold = compute_threshold(make_record([-80.0, -60.0]))  # gamma -70
        decisions = classify(record, THREE_CHANNEL_PLAN, threshold)
        assert all(d.verdict == FREE for d in decisions)

    def test_range_mismatch_rejected(self):
        record = make_record([-80.0] * 12, f_min_hz=200_000_000)
        threshold = compute_threshold(record)
        with pytest.raises(ValueError, match="does not match"):
            classify(record, THREE_CHANNEL_PLAN, threshold)

    def test_step_not_dividing_channel_width_rejected(self):
        record = make_record([-80.0] * 10, step_hz=300_000)  # 3 MHz span
        with pytest.raises(ValueError, match="remainder"):
            classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))

    def test_decision_geometry(self):
        record = make_record([-80.0] * 12)
        decisions = classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))
        assert [d.f_start_hz for d in decisions] == [100_000_000, 101_000_000, 102_000_000]
        assert [d.f_end_hz for d in decisions] == [101_000_000, 102_000_000, 103_000_000]


class TestWhiteSpaces:
    def test_only_quiet_channel_is_free(self):
        powers = [-50.0] * 8 + [-100.0] * 4  # last channel quiet, gamma -75
        record = make_record(powers)
        decisions = classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))
        assert white_spaces(decisions) == [2]

    def test_all_free_when_constant(self):
        record = make_record([-90.0] * 12)
        decisions = classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))
        assert white_spaces(decisions) == [0, 1, 2]

    def test_empty_when_everything_hot(self):
        powers = [-50.0, -100.0] * 6  # every channel gets a hot sample
        record = make_record(powers)
        decisions = classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))
        assert white_spaces(decisions) == []


record_powers = st.lists(st.floats(-160.0, -10.0), min_size=12, max_size=12)


@given(powers=record_powers)
@settings(max_examples=200, deadline=None)
def test_classify_matches_brute_force(powers):
    record = make_record(powers)
    threshold = compute_threshold(record)
    got = [(d.channel, d.verdict, d.p_max_db, d.n_exceeding)
           for d in classify(record, THREE_CHANNEL_PLAN, threshold)]
    assert got == brute_force_decisions(record, THREE_CHANNEL_PLAN, threshold.gamma_db)


@given(powers=record_powers, c=st.sampled_from([-30.0, -1.0, 0.5, 20.0]))
@settings(max_examples=200, deadline=None)
def test_shift_equivariance(powers, c):
    record = make_record(powers)
    threshold = compute_threshold(record)
    # stay away from verdict ties that 1-ulp rounding could flip
    assume(all(abs(p - threshold.gamma_db) > 1e-6 for p in powers))
    moved = shifted(record, c)
    threshold_moved = compute_threshold(moved)
    assert threshold_moved.gamma_db == pytest.approx(threshold.gamma_db + c, abs=1e-9)
    before = [d.verdict for d in classify(record, THREE_CHANNEL_PLAN, threshold)]
    after = [d.verdict for d in classify(moved, THREE_CHANNEL_PLAN, threshold_moved)]
    assert before == after


@given(powers=record_powers, index=st.integers(0, 11), bump=st.floats(0.0, 60.0))
@settings(max_examples=200, deadline=None)
def test_raising_a_sample_never_frees_a_channel_at_fixed_threshold(powers, index, bump):
    record = make_record(powers)
    threshold = compute_threshold(record)
    raised = list(powers)
    raised[index] = raised[index] + bump
    before = classify(record, THREE_CHANNEL_PLAN, threshold)
    after = classify(make_record(raised), THREE_CHANNEL_PLAN, threshold)
    for b, a in zip(before, after):
        if b.verdict == OCCUPIED:
            assert a.verdict == OCCUPIED


@given(powers=record_powers)
@settings(max_examples=200, deadline=None)
def test_occupied_and_free_partition_all_channels(powers):
    record = make_record(powers)
    decisions = classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))
    free = set(white_spaces(decisions))
    occupied = {d.channel for d in decisions if d.verdict == OCCUPIED}
    assert free | occupied == set(range(THREE_CHANNEL_PLAN.channel_count))
    assert not free & occupied
    for d in decisions:
        assert (d.verdict == OCCUPIED) == (d.n_exceeding >= 1)


def test_decisions_csv_format():
    record = make_record([-80.0] * 8 + [-40.0] * 4)
    decisions = classify(record, THREE_CHANNEL_PLAN, compute_threshold(record))
    text = decisions_to_csv(decisions)
    lines = text.splitlines()
    assert lines[0] == "channel,f_start_hz,f_end_hz,verdict,p_max_db,n_exceeding"
    assert lines[1] == "0,100000000,101000000,free,-80.000,0"
    assert lines[3] == "2,102000000,103000000,occupied,-40.000,4"
    assert text.endswith("\n")
