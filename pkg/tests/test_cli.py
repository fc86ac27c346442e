import json

import pytest

from transgress.cli import (
    CHECK_NAMES,
    PRESETS,
    UsageError,
    main,
    parse_config,
    run,
)


def parse(args):
    config, _ = parse_config(args)
    return config


class TestParseConfig:
    def test_happy_path(self):
        config = parse(["--algebra", "so4", "--sub", "so3",
                        "--poly", "pfaffian", "--method", "integral,chern",
                        "--check", "all"])
        assert config.algebra == "so4"
        assert config.subalgebra == "so3"
        assert config.methods == ("integral", "chern")
        assert config.checks == CHECK_NAMES

    def test_chern_needs_even_so_with_pfaffian(self):
        with pytest.raises(UsageError):
            parse(["--algebra", "so5", "--sub", "so4",
                   "--poly", "pfaffian", "--method", "chern"])
        with pytest.raises(UsageError):
            parse(["--algebra", "so4", "--sub", "so3",
                   "--poly", "trace^2", "--method", "chern"])
        with pytest.raises(UsageError):
            parse(["--algebra", "gl3", "--sub", "gl2",
                   "--poly", "pfaffian", "--method", "chern"])

    def test_chern_accepts_index_list_subalgebra(self):
        config = parse(["--algebra", "so4", "--sub", "0,1,3",
                        "--poly", "pfaffian", "--method", "chern"])
        assert config.methods == ("chern",)

    def test_custom_file_passthrough(self):
        config = parse(["--algebra", "my.json", "--sub", "0,1,2",
                        "--poly", "trace^2"])
        assert config.algebra == "my.json"
        assert config.subalgebra == "0,1,2"

    def test_unknown_tokens_rejected(self):
        with pytest.raises(UsageError):
            parse(["--algebra", "so4", "--method", "magic"])
        with pytest.raises(UsageError):
            parse(["--algebra", "so4", "--check", "vibes"])
        with pytest.raises(UsageError):
            parse(["--algebra", "so4", "--poly", "det"])
        with pytest.raises(UsageError):
            parse(["--algebra", "so4", "--frobnicate"])
        with pytest.raises(UsageError):
            parse([])

    def test_preset(self):
        config = parse(["--preset", "paper-so4"])
        assert config.algebra == "so4"
        assert config.polynomial == "pfaffian"
        assert set(config.methods) == {"integral", "johnson", "chern"}

    def test_flags_override_preset(self):
        config = parse(["--preset", "paper-so4", "--method", "integral"])
        assert config.methods == ("integral",)

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({
            "algebra": "su2", "subalgebra": "u1", "polynomial": "trace^2",
            "methods": ["integral", "johnson"], "checks": "all",
            "field": "gaussian",
        }))
        config = parse(["--config", str(path)])
        assert config.algebra == "su2"
        assert config.methods == ("integral", "johnson")

    def test_config_file_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"algebra": "so4", "banana": 1}))
        with pytest.raises(UsageError):
            parse(["--config", str(path)])

    def test_bad_corrupt_spec(self):
        with pytest.raises(UsageError):
            parse(["--algebra", "so4", "--corrupt", "aij=x"])


class TestRun:
    def test_so4_all_pass(self):
        config = parse(["--preset", "paper-so4"])
        report = run(config)
        assert report.passed
        names = [e.name for e in report.checks]
        assert "transgression[chern]" in names
        assert report.forms["integral"]["degree"] == 3
        assert report.forms["integral"]["terms"] == report.forms["chern"]["terms"]

    def test_abelian_trace_linear(self):
        config = parse(["--algebra", "abelian2", "--sub", "none",
                        "--poly", "trace^1"])
        report = run(config)
        assert report.passed
        terms = report.forms["integral"]["terms"]
        assert terms == [["1", "w[0]"], ["1", "w[1]"]]

    def test_json_report_stable_and_schema(self):
        config = parse(["--preset", "paper-so4", "--output", "json"])
        d1 = run(config).to_dict()
        d2 = run(config).to_dict()
        d1["stats"].pop("timing")
        d2["stats"].pop("timing")
        assert d1 == d2
        assert set(d1) == {"config", "checks", "forms", "stats"}
        for entry in d1["checks"]:
            assert entry["status"] in ("pass", "fail")
            assert set(entry) <= {"name", "status", "witness"}
        for info in d1["forms"].values():
            for coeff, mono in info["terms"]:
                assert isinstance(coeff, str) and isinstance(mono, str)

    def test_rendered_two_pi_convention(self):
        config = parse(["--algebra", "so2", "--sub", "none",
                        "--poly", "pfaffian"])
        report = run(config)
        assert report.forms["integral"]["terms"] == [["-1*(2pi)^-1", "w[0]"]]

    def test_corrupted_coefficient_fixture(self):
        config = parse(["--algebra", "so4", "--sub", "so3",
                        "--poly", "pfaffian", "--method", "johnson",
                        "--corrupt", "aij=1,0"])
        report = run(config)
        assert not report.passed
        failing = [e for e in report.checks if e.status == "fail"]
        assert failing
        assert any(e.witness for e in failing)

    def test_corrupted_structure_fixture(self):
        config = parse(["--algebra", "so4", "--sub", "so3",
                        "--poly", "pfaffian", "--corrupt", "structure=0,0,1"])
        report = run(config)
        assert not report.passed
        assert any(e.name == "algebra-valid" and e.status == "fail"
                   for e in report.checks)

    def test_custom_algebra_file_runs(self, tmp_path):
        path = tmp_path / "alg.json"
        path.write_text(json.dumps({
            "dim": 2,
            "labels": ["a", "b"],
            "entries": [],
        }))
        config = parse(["--algebra", str(path), "--sub", "0",
                        "--poly", "trace^1"])
        with pytest.raises(UsageError):
            # no matrices: the trace builder cannot work
            run(config)

    def test_custom_algebra_with_matrices_full_run(self, tmp_path):
        path = tmp_path / "so3_cyclic.json"
        path.write_text(json.dumps({
            "dim": 3,
            "labels": ["L1", "L2", "L3"],
            "entries": [[2, 0, 1, "1"], [0, 1, 2, "1"], [1, 2, 0, "1"]],
            "matrices": [
                [["0", "0", "0"], ["0", "0", "-1"], ["0", "1", "0"]],
                [["0", "0", "1"], ["0", "0", "0"], ["-1", "0", "0"]],
                [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
            ],
        }))
        config = parse(["--algebra", str(path), "--sub", "2",
                        "--poly", "trace^2", "--method", "integral,johnson"])
        report = run(config)
        assert report.passed
        assert report.forms["integral"]["terms"] == \
            report.forms["johnson"]["terms"]

    def test_missing_polynomial_file(self):
        config = parse(["--algebra", "so4", "--poly", "nowhere/poly.json"])
        with pytest.raises(UsageError):
            run(config)

    def test_custom_polynomial_file(self, tmp_path):
        poly = tmp_path / "poly.json"
        poly.write_text(json.dumps({
            "degree": 1,
            "values": [[[1], "1"]],
        }))
        config = parse(["--algebra", "abelian2", "--sub", "0",
                        "--poly", str(poly)])
        report = run(config)
        assert report.passed
        assert report.forms["integral"]["terms"] == [["1", "w[1]"]]

    def test_field_mismatch_is_usage_error(self):
        config = parse(["--algebra", "su2", "--sub", "u1",
                        "--poly", "trace^2", "--field", "rational"])
        with pytest.raises(UsageError):
            run(config)


class TestMain:
    def test_exit_codes(self, tmp_path, capsys):
        assert main(["--preset", "paper-so4"]) == 0
        capsys.readouterr()
        assert main(["--algebra", "so4", "--sub", "so3", "--poly", "pfaffian",
                     "--method", "johnson", "--corrupt", "aij=0,1"]) == 1
        capsys.readouterr()
        assert main(["--algebra", "so5", "--sub", "so4", "--poly", "pfaffian",
                     "--method", "chern"]) == 2
        capsys.readouterr()

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["--algebra", "su2", "--sub", "u1", "--poly", "trace^2",
                     "--output", "json", "--out", str(out)])
        assert code == 0
        capsys.readouterr()
        data = json.loads(out.read_text())
        assert data["config"]["field"] == "gaussian"
        assert all(e["status"] == "pass" for e in data["checks"])

    def test_presets_exist(self):
        assert set(PRESETS) == {"paper-so4", "paper-so6", "paper-gl3"}
