from qelicit.reports import ScoreReport, default_threads, json_safe, run_trials


def _trial(i, g):
    return i, float(g.random())


class TestRunTrials:
    def test_ordered_by_index(self):
        out = run_trials(20, _trial, rng=3, threads=1)
        assert [i for i, _ in out] == list(range(20))

    def test_thread_count_does_not_change_results(self):
        serial = run_trials(64, _trial, rng=9, threads=1)
        parallel = run_trials(64, _trial, rng=9, threads=4)
        assert serial == parallel

    def test_env_var_controls_default(self, monkeypatch):
        monkeypatch.setenv("QELICIT_THREADS", "3")
        assert default_threads() == 3
        monkeypatch.setenv("QELICIT_THREADS", "junk")
        assert default_threads() == 1
        monkeypatch.delenv("QELICIT_THREADS")
        assert default_threads() == 1


class TestScoreReport:
    def test_verdict_tracks_violations(self):
        report = ScoreReport("s", "strict", 10, (2,))
        assert report.passed and report.verdict == "pass"
        report.add_violation({"kind": "gain", "gap": 1.0})
        assert not report.passed and report.verdict == "fail"
        assert report.kind_counts == {"gain": 1}

    def test_violation_storage_capped(self):
        report = ScoreReport("s", "strict", 10, (2,))
        for _ in range(100):
            report.add_violation({"kind": "tie", "gap": 0.0})
        assert report.n_violations == 100
        assert len(report.violations) == 32

    def test_json_safe_handles_infinities(self):
        blob = json_safe({"a": float("-inf"), "b": [1.0, float("nan")]})
        assert blob["a"] == "-inf"
        assert blob["b"][1] == "nan"
        import json

        json.dumps(blob, allow_nan=False)
