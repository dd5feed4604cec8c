"""CLI tests: exit codes, output formats, config precedence, determinism."""

import sys

import pytest

from qrgames import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMatchingsGen:
    def test_canonical_to_stdout(self, capsys):
        code, out, _ = run(["matchings", "gen", "--family", "canonical", "--k", "3"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "8 3"
        assert lines[1] == "1-2 3-4 5-6 7-8"
        assert lines[2] == "1-3 2-4 5-7 6-8"
        assert lines[3] == "1-5 2-6 3-7 4-8"

    def test_writes_file(self, tmp_path, capsys):
        path = tmp_path / "fam.txt"
        code, out, _ = run(["matchings", "gen", "--family", "sextet", "--k", "3", "--out", str(path)], capsys)
        assert code == 0
        assert out == ""
        assert path.read_text().startswith("6 3\n")

    def test_rejects_file_input(self, tmp_path, capsys):
        path = tmp_path / "fam.txt"
        path.write_text("4 1\n1-2 3-4\n")
        code, _, err = run(["matchings", "gen", "--family", str(path)], capsys)
        assert code == 2
        assert "named families" in err

    def test_rejects_bad_k(self, capsys):
        code, _, err = run(["matchings", "gen", "--family", "canonical", "--k", "0"], capsys)
        assert code == 2
        assert "error:" in err


class TestMatchingsCheck:
    def test_independent_family(self, capsys):
        code, out, _ = run(["matchings", "check", "--family", "canonical", "--k", "3"], capsys)
        assert code == 0
        assert out.strip() == "independent"

    def test_singleton_is_independent(self, tmp_path, capsys):
        path = tmp_path / "one.txt"
        path.write_text("4 1\n1-2 3-4\n")
        code, out, _ = run(["matchings", "check", "--family", str(path)], capsys)
        assert code == 0
        assert out.strip() == "independent"

    def test_dependent_family_exits_one_with_witness(self, tmp_path, capsys):
        path = tmp_path / "dep.txt"
        path.write_text("4 3\n1-2 3-4\n1-3 2-4\n1-4 2-3\n")
        code, out, _ = run(["matchings", "check", "--family", str(path)], capsys)
        assert code == 1
        lines = out.strip().split("\n")
        assert lines[0] == "dependent"
        assert lines[1].startswith("cycle_nodes=")
        assert lines[2].startswith("cycle_labels=")
        labels = lines[2].split("=", 1)[1].split(",")
        assert len(set(labels)) == len(labels)

    def test_malformed_file_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("not a family\n")
        code, _, err = run(["matchings", "check", "--family", str(path)], capsys)
        assert code == 2
        assert "error:" in err

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run(["matchings", "check", "--family", "/nonexistent/f.txt"], capsys)
        assert code == 2
        assert "error:" in err

    def test_k_contradicting_file_exits_two(self, tmp_path, capsys):
        path = tmp_path / "one.txt"
        path.write_text("4 1\n1-2 3-4\n")
        code, _, err = run(["matchings", "check", "--family", str(path), "--k", "2"], capsys)
        assert code == 2
        assert "contradicts" in err


class TestValue:
    def test_sv_canonical_two(self, capsys):
        code, out, _ = run(["value", "sv", "--family", "canonical", "--k", "2"], capsys)
        assert code == 0
        fields = dict(line.split("=", 1) for line in out.strip().split("\n"))
        assert float(fields["value"]) == pytest.approx(0.75, abs=1e-9)
        assert float(fields["bound"]) == pytest.approx(0.75, abs=1e-12)
        assert fields["mode"] == "exhaustive"
        assert ":" in fields["argmax_answer"]

    def test_sv_canonical_three(self, capsys):
        code, out, _ = run(["value", "sv", "--family", "canonical", "--k", "3"], capsys)
        assert code == 0
        fields = dict(line.split("=", 1) for line in out.strip().split("\n"))
        assert float(fields["value"]) == pytest.approx(0.5, abs=1e-9)

    def test_sv_sampled_reports_stream(self, capsys):
        code, out, _ = run(
            ["value", "sv", "--family", "canonical", "--k", "5", "--samples", "50", "--seed", "3"],
            capsys,
        )
        assert code == 0
        fields = dict(line.split("=", 1) for line in out.strip().split("\n"))
        assert fields["mode"] == "sampled"
        assert fields["samples"] == "50"
        assert fields["seed"] == "3"
        assert float(fields["value"]) <= float(fields["bound"]) + 1e-9

    def test_sv_oversized_space_without_samples_exits_two(self, capsys):
        code, _, err = run(["value", "sv", "--family", "canonical", "--k", "5"], capsys)
        assert code == 2
        assert "error:" in err

    def test_pv_canonical_two(self, capsys):
        code, out, _ = run(["value", "pv", "--family", "canonical", "--k", "2"], capsys)
        assert code == 0
        fields = dict(line.split("=", 1) for line in out.strip().split("\n"))
        assert float(fields["value"]) == pytest.approx(0.75, abs=1e-4)
        assert float(fields["gap"]) <= 1e-6
        assert fields["converged"] == "true"


class TestCurves:
    def test_single_series_csv(self, tmp_path, capsys):
        out_path = tmp_path / "c.csv"
        code, _, _ = run(
            ["curves", "--alpha-min", "0", "--alpha-max", "1", "--alpha-steps", "3",
             "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        lines = out_path.read_text().strip().split("\n")
        assert lines[0] == "alpha,winning_paper,winning_conditional,cheating,threshold"
        assert len(lines) == 4
        assert lines[1].startswith("0,0.5,0.5,")

    def test_single_point_grid(self, capsys):
        code, out, _ = run(
            ["curves", "--alpha-min", "0", "--alpha-max", "0", "--alpha-steps", "1"], capsys
        )
        assert code == 0
        assert len(out.strip().split("\n")) == 2

    def test_seeded_rerun_is_byte_identical(self, tmp_path, capsys):
        args = ["curves", "--alpha-min", "0.2", "--alpha-max", "0.8", "--alpha-steps", "3"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(a)], capsys)[0] == 0
        assert run(args + ["--out", str(b)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_multi_series_preset_requires_out(self, capsys):
        code, _, err = run(["curves", "--preset", "fig7"], capsys)
        assert code == 2
        assert "--out" in err

    def test_preset_conflicts_with_pinned_flags(self, capsys):
        code, _, err = run(["curves", "--preset", "fig5", "--eta", "0.5", "--out", "x.csv"], capsys)
        assert code == 2
        assert "pins" in err

    def test_bad_grid_exits_two(self, capsys):
        code, _, err = run(
            ["curves", "--alpha-min", "2", "--alpha-max", "1", "--alpha-steps", "3"], capsys
        )
        assert code == 2
        assert "alpha-max" in err

    def test_plot_svg(self, tmp_path, capsys):
        csv, svg = tmp_path / "c.csv", tmp_path / "c.svg"
        code, _, _ = run(
            ["curves", "--alpha-min", "0", "--alpha-max", "1", "--alpha-steps", "3",
             "--out", str(csv), "--plot", str(svg)],
            capsys,
        )
        assert code == 0
        body = svg.read_text()
        assert body.startswith("<svg ")
        assert "<polyline" in body
        assert "cheating" in body and "threshold" in body

    def test_plot_variant_defaults_to_raw_two_click_column(self, tmp_path, capsys):
        # at nu < 1 the two winning columns differ, so the plots do too
        base = ["curves", "--alpha-min", "0.5", "--alpha-max", "1", "--alpha-steps", "2",
                "--nu", "0.9"]
        svgs = {}
        for name, extra in (
            ("default", []),
            ("paper", ["--variant", "paper_exact"]),
            ("cond", ["--variant", "conditional"]),
        ):
            csv, svg = tmp_path / f"{name}.csv", tmp_path / f"{name}.svg"
            code, _, _ = run(base + extra + ["--out", str(csv), "--plot", str(svg)], capsys)
            assert code == 0
            svgs[name] = svg.read_bytes()
        assert svgs["default"] == svgs["paper"]
        assert svgs["default"] != svgs["cond"]

    def test_unknown_preset_exits_two(self, capsys):
        code, _, _ = run(["curves", "--preset", "fig4"], capsys)
        assert code == 2


class TestSimulate:
    def test_csv_to_stdout_and_summary_to_stderr(self, capsys):
        code, out, err = run(["simulate", "--trials", "2000", "--seed", "5"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "trials,wins,estimate,stderr,seed,eta,nu,alpha,n,k"
        assert lines[1].startswith("2000,")
        fields = dict(line.split("=", 1) for line in err.strip().split("\n"))
        assert "estimate" in fields and "variant" in fields
        assert fields["paper_exact"] == fields["conditional"]  # nu = 1

    def test_seeded_rerun_is_byte_identical(self, tmp_path, capsys):
        args = ["simulate", "--trials", "3000", "--seed", "11", "--eta", "0.8", "--nu", "0.9"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(a)], capsys)[0] == 0
        assert run(args + ["--out", str(b)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_trials_exits_two(self, capsys):
        code, _, err = run(["simulate", "--trials", "0"], capsys)
        assert code == 2
        assert "error:" in err

    def test_bad_nu_exits_two(self, capsys):
        code, _, err = run(["simulate", "--nu", "1.5"], capsys)
        assert code == 2


class TestConfig:
    def test_config_supplies_defaults(self, tmp_path, capsys):
        conf = tmp_path / "conf.txt"
        conf.write_text("trials=2500  # comment\nseed=7\nalpha=0.5\n")
        code, out, _ = run(["--config", str(conf), "simulate"], capsys)
        assert code == 0
        row = out.strip().split("\n")[1].split(",")
        assert row[0] == "2500"
        assert row[4] == "7"
        assert float(row[7]) == 0.5

    def test_flags_override_config(self, tmp_path, capsys):
        conf = tmp_path / "conf.txt"
        conf.write_text("trials=2500\nseed=7\n")
        code, out, _ = run(["--config", str(conf), "simulate", "--trials", "800"], capsys)
        assert code == 0
        row = out.strip().split("\n")[1].split(",")
        assert row[0] == "800"
        assert row[4] == "7"

    def test_unknown_key_exits_two(self, tmp_path, capsys):
        conf = tmp_path / "conf.txt"
        conf.write_text("bogus=1\n")
        code, _, err = run(["--config", str(conf), "simulate"], capsys)
        assert code == 2
        assert "unknown config key" in err

    def test_malformed_line_exits_two(self, tmp_path, capsys):
        conf = tmp_path / "conf.txt"
        conf.write_text("just words\n")
        code, _, err = run(["--config", str(conf), "simulate"], capsys)
        assert code == 2
        assert "key=value" in err

    def test_bad_type_exits_two(self, tmp_path, capsys):
        conf = tmp_path / "conf.txt"
        conf.write_text("trials=lots\n")
        code, _, err = run(["--config", str(conf), "simulate"], capsys)
        assert code == 2
        assert "needs a int" in err

    def test_missing_config_file_exits_two(self, capsys):
        code, _, err = run(["--config", "/nonexistent/conf.txt", "simulate"], capsys)
        assert code == 2

    def test_config_keys_for_other_commands_are_ignored(self, tmp_path, capsys):
        conf = tmp_path / "conf.txt"
        conf.write_text("trials=2500\nk=2\n")
        code, out, _ = run(["--config", str(conf), "value", "sv"], capsys)
        assert code == 0
        assert "value=0.75" in out


class TestUsage:
    def test_no_command_exits_two(self, capsys):
        assert run([], capsys)[0] == 2

    def test_unknown_command_exits_two(self, capsys):
        assert run(["frobnicate"], capsys)[0] == 2

    def test_help_exits_zero(self, capsys):
        assert run(["--help"], capsys)[0] == 0

    def test_module_entry_point(self):
        import subprocess

        proc = subprocess.run(
            [sys.executable, "-m", "qrgames", "matchings", "check", "--family", "canonical", "--k", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "independent"
