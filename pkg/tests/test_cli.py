"""Command-line surface: artifacts, manifests, exit codes, determinism."""

import json

import pytest

from gstbc.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, main


def read(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


class TestGenerateBasis:
    def test_json_artifact_and_manifest(self, tmp_path):
        out = tmp_path / "basis.json"
        assert main(["generate-basis", "--a", "2", "--out", str(out)]) == EXIT_OK
        payload = read(out)
        assert payload["count"] == 16
        assert payload["elements"][5]["gen_subset"] == [1, 2]
        manifest = read(str(out) + ".manifest.json")
        assert manifest["tool"] == "gstbc"
        assert str(out) in manifest["artifacts"]

    def test_table_format(self, capsys):
        assert main(["generate-basis", "--a", "1", "--format", "table"]) == EXIT_OK
        text = capsys.readouterr().out
        assert "alpha_1" in text and "j*I" in text

    def test_sign_choice(self, tmp_path):
        plus = tmp_path / "p.json"
        minus = tmp_path / "m.json"
        main(["generate-basis", "--a", "1", "--out", str(plus)])
        main(["generate-basis", "--a", "1", "--sign-gamma1", "-1", "--out", str(minus)])
        p, m = read(plus), read(minus)
        assert p["elements"][1]["matrix"] != m["elements"][1]["matrix"]

    def test_bad_a(self):
        assert main(["generate-basis", "--a", "0"]) == EXIT_INPUT


class TestEnumerateLambdas:
    def test_count(self, capsys):
        assert main(["enumerate-lambdas", "--a", "2", "--emit", "count"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"a": 2, "count": 160}

    def test_json_fields(self, capsys):
        assert main(["enumerate-lambdas", "--a", "1"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["count"] == 8
        first = payload["candidates"][0]
        assert set(first) == {"index", "support", "coeffs", "thread_index",
                              "threads", "matrix"}

    def test_a3_opt_in_error(self):
        assert main(["enumerate-lambdas", "--a", "3", "--emit", "count"]) == EXIT_INPUT


class TestSearchCommand:
    def test_small_search_round_trips_through_verify(self, tmp_path):
        out = tmp_path / "codes.json"
        assert main(["search", "--a", "2", "--groups", "2", "--sizes", "1,1",
                     "--limit", "3", "--out", str(out)]) == EXIT_OK
        payload = read(out)
        assert payload["count"] == 3
        assert payload["rate"] == "1/4"
        assert main(["verify", "--code", str(out)]) == EXIT_OK

    def test_search_rejects_inconsistent_flags(self):
        assert main(["search", "--a", "2", "--groups", "3", "--sizes", "1,1"]) == EXIT_INPUT
        assert main(["search", "--a", "2", "--groups", "2"]) == EXIT_INPUT

    def test_artifacts_are_deterministic(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for out in (a, b):
            assert main(["search", "--a", "2", "--groups", "2", "--sizes", "2,2",
                         "--limit", "5", "--workers", "2", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        ma = read(str(a) + ".manifest.json")
        mb = read(str(b) + ".manifest.json")
        assert ma["config_hash"] == mb["config_hash"]
        assert list(ma["artifacts"].values()) == list(mb["artifacts"].values())


class TestVerifyCommand:
    def test_fixture_passes(self, tmp_path):
        report = tmp_path / "report.json"
        assert main(["verify", "--code", "fixture:rate54-2group",
                     "--constellation", "square:4", "--coding-gain",
                     "--report", str(report)]) == EXIT_OK
        payload = read(report)
        assert payload["all_passed"]
        assert payload["coding_gain"]["overall"] == "0"

    def test_corrupted_code_fails_with_verify_exit(self, tmp_path, capsys):
        from gstbc.serialize import code_to_dict, load_fixture
        doc = code_to_dict(load_fixture("rate54-2group"))
        doc["groups"][0][2][0][3] = "-1"  # flip one sign
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        assert main(["verify", "--code", str(bad)]) == EXIT_VERIFY
        err = capsys.readouterr().err
        assert json.loads(err)["error"]["kind"] == "verification"

    def test_malformed_file(self, tmp_path):
        bad = tmp_path / "junk.json"
        bad.write_text("{\"not\": \"a code\"}")
        assert main(["verify", "--code", str(bad)]) == EXIT_INPUT

    def test_budget_exit(self):
        assert main(["verify", "--code", "fixture:rate54-2group",
                     "--constellation", "square:4", "--coding-gain",
                     "--budget", "5"]) == EXIT_BUDGET

    def test_custom_constellation(self, tmp_path):
        spec = tmp_path / "c.json"
        spec.write_text(json.dumps({"M": 4, "real_axis_values": ["-1", "1"]}))
        assert main(["verify", "--code", "fixture:rate1-3group",
                     "--constellation", f"custom:{spec}", "--coding-gain"]) == EXIT_OK


class TestComplexityCommand:
    def test_orders(self, capsys):
        assert main(["complexity", "--sizes", "5,5", "--M", "16",
                     "--kind", "square"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["expression"] == "2*M^2"
        assert payload["order"] == 512

    def test_summary(self, capsys):
        assert main(["complexity", "--summary"]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert len(rows) == 4

    def test_missing_sizes(self):
        assert main(["complexity", "--M", "4"]) == EXIT_INPUT


@pytest.mark.slow
def test_repro_paper_tables(tmp_path):
    out = tmp_path / "repro.json"
    assert main(["repro", "--paper-tables", "--out", str(out)]) == EXIT_OK
    payload = read(out)
    assert payload["ok"] and payload["diffs"] == []
    steps = payload["steps"]
    assert steps["basis_a2"]["count"] == 16
    assert steps["lambdas_a2"]["count"] == 160
    assert steps["max_rate_2group_symmetric"]["max_rate"] == "5/4"
    assert steps["max_rate_3group_nonsymmetric"]["max_rate"] == "1"
    assert read(str(out) + ".manifest.json")["config_hash"]


class TestMatrixFileInputs:
    def test_search_with_custom_first_weight(self, tmp_path, capsys):
        a1 = tmp_path / "a1.json"
        a1.write_text(json.dumps([["0", "1", "0", "0"], ["1", "0", "0", "0"],
                                  ["0", "0", "0", "1"], ["0", "0", "1", "0"]]))
        assert main(["search", "--a", "2", "--groups", "2", "--sizes", "1,1",
                     "--limit", "1", "--a1", str(a1)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["codes"][0]["groups"][0][0][0] == ["0", "1", "0", "0"]
