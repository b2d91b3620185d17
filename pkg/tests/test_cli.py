import csv
import json

import pytest

from outtrans.cli import main
from outtrans.eventlog import EventLog

from fixture_sessions import build_study_fixture


@pytest.fixture
def study_files(tmp_path):
    sessions, stimuli, truth = build_study_fixture()
    log_path = tmp_path / "study.jsonl"
    log = EventLog(log_path)
    for session in sessions:
        for record in session.events:
            log.append(record)
    stimuli_path = tmp_path / "stimuli.tsv"
    with open(stimuli_path, "w", encoding="utf-8") as f:
        f.write("sid\tdomain\ttext\n")
        for stimulus in stimuli.values():
            f.write(f"{stimulus.sid}\t{stimulus.domain}\t{stimulus.text}\n")
    return log_path, stimuli_path, truth


def _read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


class TestAnalyzeCli:
    def test_segments_report(self, tmp_path, study_files):
        log_path, stimuli_path, truth = study_files
        out = tmp_path / "segments.csv"
        code = main(
            [
                "analyze", "segments",
                "--log", str(log_path),
                "--stimuli", str(stimuli_path),
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = _read_csv(out)
        header, data = rows[0], rows[1:]
        all_row = dict(zip(header, next(r for r in data if r[0] == "All")))
        assert int(all_row["segments"]) == truth.total
        assert int(all_row["finished"]) == truth.finished
        assert int(all_row["with_edits"]) == truth.with_edits

    def test_durations_report(self, tmp_path, study_files):
        log_path, stimuli_path, _ = study_files
        out = tmp_path / "durations.csv"
        assert main(
            [
                "analyze", "durations",
                "--log", str(log_path),
                "--stimuli", str(stimuli_path),
                "--out", str(out),
            ]
        ) == 0
        rows = _read_csv(out)
        assert rows[0] == ["domain", "segments", "avg_duration_s"]
        all_row = next(r for r in rows[1:] if r[0] == "All")
        assert int(all_row[1]) == 24  # abandoned segment excluded
        assert float(all_row[2]) == round(float(all_row[2]))  # whole seconds

    def test_similarity_report(self, tmp_path, study_files):
        log_path, stimuli_path, truth = study_files
        out = tmp_path / "similarity.csv"
        assert main(
            [
                "analyze", "similarity",
                "--log", str(log_path),
                "--stimuli", str(stimuli_path),
                "--out", str(out),
            ]
        ) == 0
        rows = _read_csv(out)
        all_row = next(r for r in rows[1:] if r[0] == "All")
        assert int(all_row[1]) == len(truth.first_viable)
        assert 0.0 <= float(all_row[2]) <= 100.0
        assert int(all_row[4]) == len(truth.no_first_viable_sids)

    def test_ratings_and_ttest(self, tmp_path):
        ratings = tmp_path / "ratings.csv"
        ratings.write_text(
            "sid,domain,variant,rating,source_length\n"
            "st01,tech,first_viable,1,7\n"
            "st01,tech,final,2,7\n"
            "st02,tech,first_viable,2,12\n"
            "st02,tech,final,4,12\n"
            "st03,wiki,first_viable,3,30\n"
            "st03,wiki,final,6,30\n".replace(",6,", ",5,"),
            encoding="utf-8",
        )
        out = tmp_path / "ratings_report.csv"
        assert main(["analyze", "ratings", "--ratings", str(ratings), "--out", str(out)]) == 0
        tables = {row[0] for row in _read_csv(out)[1:]}
        assert tables == {"means", "histogram", "by_length"}

        tout = tmp_path / "ttest.csv"
        assert main(["analyze", "ttest", "--ratings", str(ratings), "--out", str(tout)]) == 0
        rows = _read_csv(tout)
        assert rows[0][0] == "pairs"
        assert int(rows[1][0]) == 3
        assert float(rows[1][1]) < 0  # first viable rated better numerically lower

    def test_agreement(self, tmp_path):
        gold = tmp_path / "gold.tags"
        hyp = tmp_path / "hyp.tags"
        gold.write_text("OK OK BAD OK\n", encoding="utf-8")
        hyp.write_text("OK BAD BAD OK\n", encoding="utf-8")
        out = tmp_path / "agreement.csv"
        assert main(
            ["analyze", "agreement", "--gold", str(gold), "--hyp", str(hyp), "--out", str(out)]
        ) == 0
        rows = _read_csv(out)
        assert rows[1] == ["50.00", "0.00", "25.00", "25.00"]

    def test_missing_log_is_an_error(self, capsys):
        assert main(["analyze", "segments"]) == 1
        assert "requires --log" in capsys.readouterr().err


class TestSynthesizeCli:
    def test_end_to_end(self, tmp_path):
        (tmp_path / "in.src").write_text("use the dialog box\nclick save\n", "utf-8")
        (tmp_path / "in.mt").write_text(
            "im Dialogfeld ändern\nSpeichern klicken\n", "utf-8"
        )
        (tmp_path / "in.tags").write_text("OK OK BAD\nOK OK\n", "utf-8")
        config = tmp_path / "engines.json"
        config.write_text(
            json.dumps(
                {
                    "engines": [
                        {
                            "id": "encs",
                            "kind": "mock",
                            "pairs": [["en", "cs"]],
                            "mapping": {"use": "použijte", "click": "klikněte"},
                        }
                    ]
                }
            ),
            encoding="utf-8",
        )
        prefix = tmp_path / "out"
        code = main(
            [
                "synthesize",
                "--src", str(tmp_path / "in.src"),
                "--mt", str(tmp_path / "in.mt"),
                "--tags", str(tmp_path / "in.tags"),
                "--engine", "encs",
                "--config", str(config),
                "--out-prefix", str(prefix),
            ]
        )
        assert code == 0
        assert (tmp_path / "out.mt").read_text("utf-8") == (
            tmp_path / "in.mt"
        ).read_text("utf-8")
        assert (tmp_path / "out.tags").read_text("utf-8") == (
            tmp_path / "in.tags"
        ).read_text("utf-8")
        src_lines = (tmp_path / "out.src").read_text("utf-8").splitlines()
        assert src_lines == ["použijte the dialog box", "klikněte save"]


class TestSpanSampleCli:
    def test_reference_total(self, tmp_path):
        inventory = tmp_path / "inventory.csv"
        inventory.write_text(
            "k,count\n1,81619\n2,2303\n3,166\n4,13\n5,8\n6,1\n", encoding="utf-8"
        )
        quota = tmp_path / "quota.csv"
        quota.write_text("k,n\n1,15\n2,15\n3,15\n4,10\n5,5\n6,0\n", encoding="utf-8")
        out = tmp_path / "selection.csv"
        assert main(
            [
                "span-sample",
                "--inventory", str(inventory),
                "--quota", str(quota),
                "--seed", "42",
                "--out", str(out),
            ]
        ) == 0
        rows = _read_csv(out)
        assert rows[0] == ["bucket", "span_id"]
        assert len(rows) - 1 == 60

    def test_infeasible_quota_fails(self, tmp_path, capsys):
        inventory = tmp_path / "inventory.csv"
        inventory.write_text("k,count\n5,8\n", encoding="utf-8")
        quota = tmp_path / "quota.csv"
        quota.write_text("k,n\n5,9\n", encoding="utf-8")
        assert main(
            ["span-sample", "--inventory", str(inventory), "--quota", str(quota), "--seed", "1"]
        ) == 1
        assert "bucket 5" in capsys.readouterr().err
