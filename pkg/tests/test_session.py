import json

import pytest

from focustrainer.engine import PolicyParams
from focustrainer.errors import SessionStateError, ValidationError
from focustrainer.eventlog import RecordKind, build_report, reconcile_points
from focustrainer.monitor import AttentionState
from focustrainer.session import (
    DEGREE_TO_DISTRACTIONS,
    GOODBYE_DURATION_MS,
    INTRO_DURATION_MS,
    AnswerInput,
    AttentionInput,
    DistractionEvent,
    GazeInput,
    KeypressInput,
    Phase,
    SessionConfig,
    SessionRunner,
    SessionScript,
    fade_params,
    plan_session,
    replay_verify,
    run_session,
)

ATT = AttentionState.ATTENTIVE
INATT = AttentionState.INATTENTIVE


def make_config(**overrides) -> SessionConfig:
    fields = dict(child_name="Mia", age=8, child_id="c001", session_id=1, seed=42)
    fields.update(overrides)
    return SessionConfig(**fields)


def single_trial_script(trial_ms=300_000) -> SessionScript:
    phases = [
        Phase("intro", 0, 0, INTRO_DURATION_MS),
        Phase("trial", 1, INTRO_DURATION_MS, trial_ms),
        Phase("goodbye", 0, INTRO_DURATION_MS + trial_ms, GOODBYE_DURATION_MS),
    ]
    return SessionScript(phases=phases)


def attentive_gaze(end_ms, step=250):
    return [GazeInput(t=t, face_present=True, yaw=0.0, pitch=0.0)
            for t in range(0, end_ms + 1, step)]


def records_of(records, kind):
    return [r for r in records if r.kind is kind]


def feedback_classes(records):
    return [r.payload["class"] for r in records if r.kind is RecordKind.FEEDBACK]


class TestFadeParams:
    def test_first_session_is_identity(self):
        base = PolicyParams(praise_interval_ms=45_000)
        assert fade_params(base, 1).praise_interval_ms == 45_000

    def test_third_session_scales_by_half(self):
        base = PolicyParams(praise_interval_ms=45_000)
        assert fade_params(base, 3).praise_interval_ms == 67_500

    def test_cap_at_two_minutes(self):
        base = PolicyParams(praise_interval_ms=45_000)
        assert fade_params(base, 20).praise_interval_ms == 120_000

    def test_other_fields_unchanged(self):
        base = PolicyParams(short_praise_ratio=0.25, criticize_grace_ms=1234)
        faded = fade_params(base, 5)
        assert faded.short_praise_ratio == 0.25
        assert faded.criticize_grace_ms == 1234


class TestPlanSession:
    def test_default_degree_two_distractions_in_trial_two(self):
        script = plan_session(make_config())
        trial1, trial2 = [p for p in script.phases if p.name == "trial"]
        assert trial1.distractions == []
        assert len(trial2.distractions) == 2

    def test_degree_zero_no_distractions(self):
        script = plan_session(make_config(degree_of_distraction=0))
        assert all(not p.distractions for p in script.phases)

    def test_degree_three_four_constrained_timestamps(self):
        script = plan_session(make_config(degree_of_distraction=3, seed=42))
        trial2 = [p for p in script.phases if p.name == "trial"][1]
        times = [d.t for d in trial2.distractions]
        assert len(times) == 4
        assert all(30_000 <= t <= 270_000 for t in times)
        gaps = [b - a for a, b in zip(times, times[1:])]
        assert all(gap >= 60_000 for gap in gaps)

    def test_degree_map(self):
        for degree, count in DEGREE_TO_DISTRACTIONS.items():
            script = plan_session(make_config(degree_of_distraction=degree,
                                              trial_duration_ms=300_000))
            trial2 = [p for p in script.phases if p.name == "trial"][1]
            assert len(trial2.distractions) == count

    def test_plan_is_deterministic_in_seed(self):
        a = plan_session(make_config(seed=7)).to_payload()
        b = plan_session(make_config(seed=7)).to_payload()
        assert a == b
        c = plan_session(make_config(seed=8)).to_payload()
        assert c != a

    def test_invalid_config_lists_fields(self):
        with pytest.raises(ValidationError) as err:
            plan_session(make_config(age=25, session_id=0))
        assert "age" in err.value.fields
        assert "session_id" in err.value.fields

    def test_distractions_must_fit_trial(self):
        with pytest.raises(ValidationError) as err:
            plan_session(make_config(degree_of_distraction=3, trial_duration_ms=120_000))
        assert "degree_of_distraction" in err.value.fields

    def test_intro_utterances_substituted(self):
        script = plan_session(make_config(child_name="Zoe"))
        intro = script.phases[0]
        assert any("Zoe" in u for u in intro.utterances)


class TestDeskScaleOracle:
    def run_oracle(self):
        config = make_config()
        script = single_trial_script()
        inputs = attentive_gaze(script.end) + [KeypressInput(t=INTRO_DURATION_MS + 3000)]
        return run_session(config, script, inputs)

    def test_start_praise_plus_six_periodic_equals_seven_points(self):
        records = self.run_oracle()
        classes = feedback_classes(records)
        assert classes.count("praise_immediate_start") == 1
        periodic = [c for c in classes if c in ("praise", "short_praise")]
        assert len(periodic) == 6
        report = build_report(records)
        assert report.final_points == 7
        assert report.attention_ratio == 1.0

    def test_periodic_praise_timestamps(self):
        records = self.run_oracle()
        periodic = [r.t for r in records if r.kind is RecordKind.FEEDBACK
                    and r.payload["class"] in ("praise", "short_praise")]
        start = INTRO_DURATION_MS
        assert periodic == [start + 45_000 * k for k in range(1, 7)]


class TestDeterminism:
    def serialize(self, records):
        return "\n".join(r.to_json_line() for r in records)

    def test_identical_runs_are_byte_identical(self):
        config = make_config(seed=1234)
        inputs = (attentive_gaze(120_000)
                  + [KeypressInput(t=16_000),
                     AnswerInput(t=30_000, value="correct"),
                     AnswerInput(t=40_000, value=1)])
        first = run_session(config, plan_session(config), inputs)
        second = run_session(config, plan_session(config), inputs)
        assert self.serialize(first) == self.serialize(second)

    def test_different_seed_changes_log(self):
        inputs = [AnswerInput(t=30_000, value="correct")]
        a = run_session(make_config(seed=1), inputs=inputs)
        b = run_session(make_config(seed=2), inputs=inputs)
        assert self.serialize(a) != self.serialize(b)


class TestDistractionSuppression:
    def scripted(self, offsets=(60_000, 150_000)):
        config = make_config()
        trial2_events = [DistractionEvent(t=t, phrase="oh, look behind you")
                         for t in offsets]
        phases = [
            Phase("intro", 0, 0, INTRO_DURATION_MS),
            Phase("trial", 1, INTRO_DURATION_MS, 300_000),
            Phase("break", 0, INTRO_DURATION_MS + 300_000, 60_000),
            Phase("trial", 2, INTRO_DURATION_MS + 360_000, 300_000,
                  distractions=trial2_events),
            Phase("goodbye", 0, INTRO_DURATION_MS + 660_000, GOODBYE_DURATION_MS),
        ]
        return config, SessionScript(phases=phases)

    def test_no_criticism_during_suppression_window(self):
        config, script = self.scripted()
        trial2_start = INTRO_DURATION_MS + 360_000
        distraction_ts = [trial2_start + 60_000, trial2_start + 150_000]
        inputs = []
        for t_d in distraction_ts:
            inputs.append(AttentionInput(t=t_d + 3000, state=INATT))
            inputs.append(AttentionInput(t=t_d + 20_000, state=ATT))
        records = run_session(config, script, inputs)

        criticisms = [r.t for r in records if r.kind is RecordKind.FEEDBACK
                      and r.payload["class"] in ("criticize", "criticize_again")]
        for t_d in distraction_ts:
            assert all(not (t_d < t <= t_d + 5000) for t in criticisms)
            # still criticized once the window closed
            assert any(t_d + 5000 < t <= t_d + 20_000 for t in criticisms)

    def test_distraction_records_logged(self):
        config, script = self.scripted()
        records = run_session(config, script, [])
        distractions = records_of(records, RecordKind.DISTRACTION)
        assert len(distractions) == 2
        assert all(d.payload["expression"] == "MakingFaces" for d in distractions)

    def test_suppression_does_not_block_praise(self):
        config, script = self.scripted()
        records = run_session(config, script, [])
        assert "praise" in feedback_classes(records) \
            or "short_praise" in feedback_classes(records)


class TestPhaseIntegrity:
    def test_no_feedback_outside_trials(self):
        config = make_config(seed=77)
        script = plan_session(config)
        inputs = []
        # inattention straddling the break and spilling into goodbye
        inputs.append(AttentionInput(t=250_000, state=INATT))
        inputs.append(AttentionInput(t=330_000, state=ATT))
        inputs.append(AttentionInput(t=660_000, state=INATT))
        records = run_session(config, script, inputs)

        trials = [(p.start, p.end) for p in script.phases if p.name == "trial"]
        for record in records:
            if record.kind in (RecordKind.FEEDBACK, RecordKind.POINTS_UPDATE):
                assert any(start <= record.t < end for start, end in trials), record

    def test_inattention_across_break_not_punished_at_trial_start(self):
        config = make_config()
        script = plan_session(config)
        break_phase = next(p for p in script.phases if p.name == "break")
        trial2 = [p for p in script.phases if p.name == "trial"][1]
        # goes inattentive mid-break, recovers shortly after trial 2 begins
        inputs = [AttentionInput(t=break_phase.start + 1000, state=INATT),
                  AttentionInput(t=trial2.start + 1000, state=ATT)]
        records = run_session(config, script, inputs)
        criticisms = [r for r in records if r.kind is RecordKind.FEEDBACK
                      and r.payload["class"].startswith("criticize")]
        assert criticisms == []


class TestTaskFlow:
    def test_presented_ids_advance_only_after_correct(self):
        config = make_config()
        inputs = [
            AnswerInput(t=20_000, value="correct"),
            AnswerInput(t=25_000, value=-999),
            AnswerInput(t=30_000, value=-999),
            AnswerInput(t=35_000, value="correct"),
        ]
        records = run_session(config, inputs=inputs)
        results = [r.payload["result"] for r in records_of(records, RecordKind.ANSWER_RESULT)]
        assert results == ["Correct", "Incorrect", "Incorrect", "Correct"]
        presented = [r.payload["id"] for r in records_of(records, RecordKind.TASK_PRESENTED)]
        assert presented[0] == 1
        for a, b in zip(presented, presented[1:]):
            assert b in (a, a + 1)

    def test_answer_outside_trial_warned(self):
        config = make_config()
        records = run_session(config, inputs=[AnswerInput(t=5000, value=3)])
        warnings = records_of(records, RecordKind.WARNING)
        assert any(w.payload["reason"] == "answer_outside_trial" for w in warnings)
        assert records_of(records, RecordKind.ANSWER_SUBMITTED) == []

    def test_input_beyond_session_end_warned(self):
        config = make_config()
        records = run_session(config, inputs=[KeypressInput(t=10_000_000)])
        warnings = records_of(records, RecordKind.WARNING)
        assert any(w.payload["reason"] == "input_after_session_end" for w in warnings)

    def test_malformed_answer_logged_and_ignored(self):
        config = make_config()
        records = run_session(config, inputs=[AnswerInput(t=20_000, value="seven")])
        warnings = records_of(records, RecordKind.WARNING)
        assert any(w.payload["reason"] == "rejected_input" for w in warnings)


class TestGazeLogging:
    def test_downsampled_to_4hz(self):
        config = make_config()
        script = single_trial_script(trial_ms=30_000)
        inputs = attentive_gaze(script.end, step=50)   # 20 Hz input
        records = run_session(config, script, inputs)
        gaze = records_of(records, RecordKind.GAZE_SAMPLE)
        deltas = [b.t - a.t for a, b in zip(gaze, gaze[1:])]
        assert all(d >= 250 for d in deltas)

    def test_full_rate_flag(self):
        config = make_config(log_full_gaze=True)
        script = single_trial_script(trial_ms=30_000)
        inputs = attentive_gaze(script.end, step=50)
        records = run_session(config, script, inputs)
        assert len(records_of(records, RecordKind.GAZE_SAMPLE)) == len(inputs)


class TestReplay:
    def mixed_session(self):
        config = make_config(seed=4321)
        script = plan_session(config)
        inputs = (attentive_gaze(100_000)
                  + [KeypressInput(t=17_000), AnswerInput(t=40_000, value="correct")]
                  + [AttentionInput(t=120_000, state=INATT),
                     AttentionInput(t=160_000, state=ATT)])
        return run_session(config, script, inputs)

    def test_untouched_log_verifies(self):
        records = self.mixed_session()
        ok, seq = replay_verify(records)
        assert ok and seq is None

    def test_edited_feedback_record_detected(self):
        records = list(self.mixed_session())
        index = next(i for i, r in enumerate(records) if r.kind is RecordKind.FEEDBACK)
        tampered = records[index]
        payload = dict(tampered.payload, phrase="doctored")
        records[index] = type(tampered)(seq=tampered.seq, t=tampered.t,
                                        kind=tampered.kind, payload=payload)
        ok, seq = replay_verify(records)
        assert not ok
        assert seq == tampered.seq

    def test_aborted_session_replays(self):
        config = make_config()
        runner = SessionRunner(config)
        runner.begin()
        runner.advance_to(60_000)
        runner.submit_attention(AttentionInput(t=60_000, state=INATT))
        runner.advance_to(90_000)
        runner.abort(90_000)
        assert runner.aborted
        ok, seq = replay_verify(runner.log.records)
        assert ok, f"divergence at {seq}"
        report = build_report(runner.log.records, allow_partial=True)
        assert not report.complete


class TestReportFromSession:
    def test_reconciliation_and_ratio(self):
        config = make_config()
        script = plan_session(config)
        trial1 = next(p for p in script.phases if p.name == "trial")
        inputs = [AttentionInput(t=trial1.start + 60_000, state=INATT),
                  AttentionInput(t=trial1.start + 120_000, state=ATT)]
        records = run_session(config, script, inputs)
        report = build_report(records)
        assert report.final_points == reconcile_points(records)
        assert report.attention_ratio == pytest.approx((600_000 - 60_000) / 600_000)
        assert report.longest_attentive_streak_ms >= 300_000
        assert report.complete

    def test_timeline_minutes_cover_session(self):
        records = run_session(make_config())
        report = build_report(records)
        end = records[0].payload["script"]["end"]
        assert len(report.timeline) == end // 60_000


class TestRunnerLifecycle:
    def test_cannot_submit_before_begin(self):
        runner = SessionRunner(make_config())
        with pytest.raises(SessionStateError):
            runner.submit_keypress(KeypressInput(t=0))

    def test_cannot_begin_twice(self):
        runner = SessionRunner(make_config())
        runner.begin()
        with pytest.raises(SessionStateError):
            runner.begin()

    def test_finish_marks_complete(self):
        runner = SessionRunner(make_config())
        runner.begin()
        runner.finish()
        assert runner.finished
        with pytest.raises(SessionStateError):
            runner.advance_to(10)

    def test_config_roundtrip(self):
        config = make_config(policy={"praise_interval_ms": 30_000})
        assert SessionConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()

    def test_unknown_config_field_rejected(self):
        with pytest.raises(ValidationError):
            SessionConfig.from_dict({**make_config().to_dict(), "bogus": 1})

    def test_missing_required_field_rejected(self):
        with pytest.raises(ValidationError) as err:
            SessionConfig.from_dict({"child_name": "A"})
        assert "age" in err.value.fields
