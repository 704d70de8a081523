import json

import pytest
from click.testing import CliRunner

from focustrainer.cli import main
from focustrainer.errors import ValidationError
from focustrainer.eventlog import read_log
from focustrainer.monitor import AttentionState
from focustrainer.session import AnswerInput, AttentionInput, GazeInput, KeypressInput
from focustrainer.traces import parse_trace


class TestTraceParsing:
    def test_gaze_lines(self):
        inputs = parse_trace(["0,true,0.0,-2.5", "250,false,10,20"])
        assert inputs == [GazeInput(0, True, 0.0, -2.5), GazeInput(250, False, 10.0, 20.0)]

    def test_attention_event_lines(self):
        inputs = parse_trace(["5000,Inattentive", "9000,attentive"])
        assert inputs[0] == AttentionInput(5000, AttentionState.INATTENTIVE)
        assert inputs[1] == AttentionInput(9000, AttentionState.ATTENTIVE)

    def test_keypress_and_answer_lines(self):
        inputs = parse_trace(["18000,keypress", "20000,answer,42", "21000,answer,correct"])
        assert inputs == [KeypressInput(18_000), AnswerInput(20_000, 42),
                          AnswerInput(21_000, "correct")]

    def test_comments_and_blanks_skipped(self):
        assert parse_trace(["# header", "", "100,keypress  # note"]) == [KeypressInput(100)]

    def test_garbage_rejected(self):
        with pytest.raises(ValidationError):
            parse_trace(["what,is,this,even,here"])
        with pytest.raises(ValidationError):
            parse_trace(["abc,keypress"])


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workdir(tmp_path):
    config = {
        "child_name": "Mia", "age": 8, "child_id": "c001",
        "session_id": 1, "seed": 42, "degree_of_distraction": 0,
        "trial_duration_ms": 60_000, "break_duration_ms": 5000,
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    trace_path = tmp_path / "trace.csv"
    lines = ["# fully attentive, quick start", "16000,keypress", "30000,answer,correct"]
    lines += [f"{t},true,0,0" for t in range(0, 145_001, 250)]
    trace_path.write_text("\n".join(lines) + "\n")
    return tmp_path, config_path, trace_path


class TestSimulate:
    def test_writes_log_and_report(self, runner, workdir):
        tmp_path, config_path, trace_path = workdir
        result = runner.invoke(main, ["--data-dir", str(tmp_path / "out"),
                                      "simulate", str(config_path), str(trace_path)])
        assert result.exit_code == 0, result.output
        log_file = tmp_path / "out" / "c001" / "1-42.log"
        assert log_file.exists()
        assert (tmp_path / "out" / "c001" / "1-42.report.json").exists()
        assert "final points:" in result.output

    def test_missing_trace_exits_2(self, runner, workdir):
        tmp_path, config_path, _ = workdir
        result = runner.invoke(main, ["simulate", str(config_path),
                                      str(tmp_path / "nope.csv")])
        assert result.exit_code == 2

    def test_bad_config_exits_2(self, runner, workdir):
        tmp_path, _, trace_path = workdir
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"child_name": "Mia", "age": 40, "child_id": "c1",
                                   "session_id": 1, "seed": 1}))
        result = runner.invoke(main, ["simulate", str(bad), str(trace_path)])
        assert result.exit_code == 2
        assert "age" in result.output

    def test_deterministic_across_runs(self, runner, workdir):
        tmp_path, config_path, trace_path = workdir
        contents = []
        for name in ("a", "b"):
            out = tmp_path / name
            result = runner.invoke(main, ["--data-dir", str(out), "simulate",
                                          str(config_path), str(trace_path)])
            assert result.exit_code == 0, result.output
            contents.append((out / "c001" / "1-42.log").read_bytes())
        assert contents[0] == contents[1]

    def test_seed_override_changes_log(self, runner, workdir):
        tmp_path, config_path, trace_path = workdir
        result = runner.invoke(main, ["--data-dir", str(tmp_path / "s"),
                                      "--seed-override", "77",
                                      "simulate", str(config_path), str(trace_path)])
        assert result.exit_code == 0
        assert (tmp_path / "s" / "c001" / "1-77.log").exists()


class TestReplayCommand:
    def simulate(self, runner, workdir):
        tmp_path, config_path, trace_path = workdir
        out = tmp_path / "out"
        result = runner.invoke(main, ["--data-dir", str(out), "simulate",
                                      str(config_path), str(trace_path)])
        assert result.exit_code == 0
        return out / "c001" / "1-42.log"

    def test_untouched_log_verifies(self, runner, workdir):
        log_file = self.simulate(runner, workdir)
        result = runner.invoke(main, ["replay", str(log_file)])
        assert result.exit_code == 0, result.output

    def test_edited_feedback_exits_1(self, runner, workdir):
        log_file = self.simulate(runner, workdir)
        records = read_log(log_file)
        lines = []
        for record in records:
            line = record.to_json_line()
            if record.kind.value == "Feedback" and '"point_delta":1' in line:
                line = line.replace('"point_delta":1', '"point_delta":-1', 1)
            lines.append(line)
        log_file.write_text("\n".join(lines) + "\n")
        result = runner.invoke(main, ["replay", str(log_file)])
        assert result.exit_code == 1
        assert "mismatch at seq" in result.output

    def test_truncated_log_exits_2(self, runner, workdir):
        log_file = self.simulate(runner, workdir)
        text = log_file.read_text().splitlines()
        log_file.write_text("\n".join(text[:5]) + "\n" + text[6] + "\n")
        result = runner.invoke(main, ["replay", str(log_file)])
        assert result.exit_code == 2


class TestScore:
    def test_sus(self, runner, tmp_path):
        csv = tmp_path / "sus.csv"
        csv.write_text("a,b,c,d,e,f,g,h,i,j\n4,2,4,1,5,2,5,1,4,2\n")
        result = runner.invoke(main, ["score", "sus", str(csv)])
        assert result.exit_code == 0
        assert "85.0" in result.output and "Good" in result.output

    def test_sus_json_stable(self, runner, tmp_path):
        csv = tmp_path / "sus.csv"
        csv.write_text("a,b,c,d,e,f,g,h,i,j\n3,3,3,3,3,3,3,3,3,3\n")
        runs = [runner.invoke(main, ["score", "sus", str(csv), "--json"]).output
                for _ in range(2)]
        assert runs[0] == runs[1]
        doc = json.loads(runs[0])
        assert doc["respondents"][0]["score"] == 50.0

    def test_chisq_uniform(self, runner, tmp_path):
        csv = tmp_path / "table.csv"
        csv.write_text("x,yes,no\na,15,15\nb,15,15\n")
        result = runner.invoke(main, ["score", "chisq", str(csv), "--json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["chi2"] == 0.0 and doc["p_value"] == 1.0

    def test_alpha_identical_columns(self, runner, tmp_path):
        csv = tmp_path / "scale.csv"
        csv.write_text("i1,i2\n1,1\n2,2\n3,3\n")
        result = runner.invoke(main, ["score", "alpha", str(csv), "--json"])
        assert result.exit_code == 0
        assert json.loads(result.output)["alpha"] == pytest.approx(1.0)

    def test_likert_with_sidecar(self, runner, tmp_path):
        csv = tmp_path / "scale.csv"
        csv.write_text("i1,i2\n1,7\n3,5\n")
        sidecar = tmp_path / "scale.json"
        sidecar.write_text('{"reverse_coded": [false, true]}')
        result = runner.invoke(main, ["score", "likert", str(csv),
                                      "--sidecar", str(sidecar), "--json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["mean"] == pytest.approx(2.0)

    def test_schema_mismatch_exits_2(self, runner, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("a,b\nx,y\n")
        result = runner.invoke(main, ["score", "chisq", str(csv)])
        assert result.exit_code == 2
