from __future__ import annotations

import json
import subprocess
import sys

import pytest
from conftest import ROOT

from cohott import cli

NEEDS_SHARP = str(ROOT / "samples" / "needs_sharp.cht")


def run(capsys, *argv: str) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


# -- check ------------------------------------------------------------------------


def test_empty_check_with_builtin_prelude(capsys):
    code, out = run(capsys, "check", "--prelude=builtin")
    assert code == 0
    assert "records" not in out.splitlines()[-1]


def test_needs_sharp_without_prelude(capsys):
    code, out = run(capsys, "check", "--prelude=none", NEEDS_SHARP)
    assert code == 1
    assert "needs_sharp.cht:3:44: in sharpen: unbound: Sharp" in out


def test_needs_sharp_with_prelude(capsys):
    code, report = run_json(capsys, "check", NEEDS_SHARP)
    assert code == 0 and report["ok"]
    assert [r["status"] for r in report["records"]] == ["checked"]


def test_json_schema_fields(capsys):
    _, report = run_json(capsys, "check", "--prelude=none", NEEDS_SHARP)
    assert report["schema"] == 1 and report["tool"] == "cohott"
    assert report["failures"] == ["sharpen"]
    rec = report["records"][0]
    assert (rec["kind"], rec["line"], rec["column"]) == ("unbound", 3, 44)
    assert "time" not in rec


def test_json_is_byte_stable(capsys):
    _, a = run(capsys, "check", "--json", NEEDS_SHARP)
    _, b = run(capsys, "check", "--json", NEEDS_SHARP)
    assert a == b


def test_timings_are_opt_in(capsys):
    _, report = run_json(capsys, "check", "--timings", NEEDS_SHARP)
    assert "time" in report["records"][0]


def test_missing_file_is_a_usage_error(capsys):
    code, _ = run(capsys, "check", "no/such/file.cht")
    assert code == 2


def test_parse_error_is_reported(tmp_path, capsys):
    bad = tmp_path / "bad.cht"
    bad.write_text("def x : := 3\n", encoding="utf-8")
    code, report = run_json(capsys, "check", "--prelude=none", str(bad))
    assert code == 1 and not report["ok"]


def test_assume_on_check(tmp_path, capsys):
    src = tmp_path / "t.cht"
    src.write_text("axiom A : Type 0\ndef bad : A := bad\n", encoding="utf-8")
    code, _ = run(capsys, "check", "--prelude=none", str(src))
    assert code == 1
    code, report = run_json(capsys, "check", "--prelude=none", "--assume", "bad", str(src))
    assert code == 0
    assert [r["status"] for r in report["records"]] == ["postulate", "assumed"]


def test_type_in_type_flag(tmp_path, capsys):
    src = tmp_path / "t.cht"
    src.write_text("def U : Type 0 := Type 0\n", encoding="utf-8")
    assert run(capsys, "check", "--prelude=none", str(src))[0] == 1
    assert run(capsys, "check", "--prelude=none", "--type-in-type", str(src))[0] == 0


# -- normalize --------------------------------------------------------------------


def test_normalize_expression(capsys):
    code, out = run(capsys, "normalize", "--prelude=none", "(fun (A : Type 0) => A) Unit")
    assert code == 0 and "Unit" in out


def test_normalize_name(tmp_path, capsys):
    src = tmp_path / "t.cht"
    src.write_text("def two : Unit * Unit := let u : Unit := tt in (u, u)\n", encoding="utf-8")
    code, report = run_json(capsys, "normalize", "--prelude=none", "two", str(src))
    assert code == 0
    assert report["records"][-1]["normal_form"] == "(tt, tt)"


def test_normalize_ill_typed(capsys):
    code, _ = run(capsys, "normalize", "--prelude=none", "tt tt")
    assert code == 1


# -- stdlib-report ----------------------------------------------------------------


def test_stdlib_report_default_flags_waived_entry(capsys):
    code, report = run_json(capsys, "stdlib-report")
    assert code == 1
    assert not report["release_ready"]
    status = {r["name"]: r["status"] for r in report["records"]}
    assert status["esc_eta"] == "unproved" and status["fact_sharp"] == "proved"


def test_stdlib_report_release(capsys):
    code, report = run_json(capsys, "stdlib-report", "--assume", "esc_eta")
    assert code == 0 and report["release_ready"]
    assert report["assumed"] == ["esc_eta"]
    assert "esc_eta" in report["waivers"]


def test_stdlib_report_unknown_assume(capsys):
    assert run(capsys, "stdlib-report", "--assume", "nope")[0] == 2


def test_stdlib_report_without_prelude(capsys):
    code, out = run(capsys, "stdlib-report", "--prelude=none")
    assert code == 1 and "missing axiom Sharp" in out


# -- model-verify -----------------------------------------------------------------


def test_model_verify_small(capsys):
    code, report = run_json(capsys, "model-verify", "--max-vertices", "2")
    assert code == 0 and report["ok"]


def test_model_verify_fault(capsys):
    code, report = run_json(capsys, "model-verify", "--max-vertices", "2", "--fault", "nabla")
    assert code == 1
    assert report["failures"] == ["b-fully-faithful"]


def test_model_verify_out_of_range(capsys):
    assert run(capsys, "model-verify", "--max-vertices", "9")[0] == 2


def test_model_verify_rejects_assume(capsys):
    assert run(capsys, "model-verify", "--assume", "x")[0] == 2


# -- entry point ------------------------------------------------------------------


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["check", "--prelude"]])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 2


def test_console_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cohott", "check", "--prelude=none", NEEDS_SHARP],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 1
    assert "unbound: Sharp" in proc.stdout
