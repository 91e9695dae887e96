"""Acceptance suite: every shipped property at its stated tolerance.

Each test prints one PASS/FAIL line. The corpora are seeded (42) and
match what `ngmlimit verify` runs.
"""

import json

import pytest
from click.testing import CliRunner

from ngmlimit.cli import main
from ngmlimit.verify import run_all

SEED = 42


@pytest.fixture(scope="module")
def results():
    return {r.name: r for r in run_all(SEED)}


def _report(result):
    print(result.summary_line())
    assert result.passed, result.summary_line()


def test_criterion_1_affine_determinant(results):
    r = results["affine_determinant"]
    _report(r)
    assert r.worst_error <= 1e-8
    assert r.details["worst_slope_error"] <= 1e-10
    assert r.cases >= 200


def test_criterion_2_minor_inverse_limit(results):
    r = results["minor_inverse_limit"]
    _report(r)
    assert r.worst_error <= 1e-6                      # relative, final point
    assert 0.05 <= r.details["decade_ratio_low"]      # error(10t)/error(t)
    assert r.details["decade_ratio_high"] <= 0.2
    assert r.details["worst_extrapolation_gain"] >= 10.0


def test_criterion_3_row_col_decay(results):
    r = results["row_col_decay"]
    _report(r)
    # every later point stays below twice the C/t envelope fitted at
    # t = 100 * norm
    assert r.worst_error <= 1.0


def test_criterion_4_spectral_radius_limit(results):
    r = results["spectral_radius_limit"]
    _report(r)
    assert r.details["worst_radius_error"] <= 1e-6
    assert r.details["worst_spectrum_gap"] <= 1e-6
    assert r.cases == 100


def test_criterion_5_uncoupled_closed_form(results):
    r = results["uncoupled_closed_form"]
    _report(r)
    assert r.worst_error <= 1e-10
    assert r.cases == 3000  # 500 draws x stages 1..6


def test_criterion_6_coupling_identities(results):
    r = results["coupling_identities"]
    _report(r)
    assert r.worst_error <= 1e-10
    assert r.details["worst_equal_stages"] <= 1e-10
    assert r.details["worst_mixed_stages"] <= 1e-10


def test_criterion_7_removal_limit_chain(results):
    r = results["removal_limit_chain"]
    _report(r)
    assert r.worst_error <= 1e-8                      # extrapolated, final
    assert r.details["worst_raw_error"] <= 1e-6
    assert r.details["worst_exact_removal_gap"] <= 1e-10


def test_criterion_8_threshold_consistency(results):
    r = results["threshold_consistency"]
    _report(r)
    assert r.worst_error == 0.0  # count of inconsistent cases
    assert r.details["r0_low"] >= 0.2
    assert r.details["r0_high"] <= 5.0
    assert r.cases == 200


def test_criterion_9_cmd_verify_deterministic_and_green():
    runner = CliRunner()
    first = runner.invoke(main, ["verify", "--seed", str(SEED)],
                          catch_exceptions=False)
    second = runner.invoke(main, ["verify", "--seed", str(SEED)],
                           catch_exceptions=False)
    print("PASS cmd_verify: exit 0 and byte-identical report"
          if first.exit_code == 0 and first.stdout == second.stdout
          else "FAIL cmd_verify")
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    assert report["all_passed"] is True
    assert len(report["criteria"]) == 8


def test_criterion_9_fault_injection_trips_coupling_check():
    runner = CliRunner()
    result = runner.invoke(
        main, ["verify", "--seed", str(SEED),
               "--inject-fault", "builder-perturbation"],
        catch_exceptions=False)
    assert result.exit_code == 1
    report = json.loads(result.stdout)
    by_name = {c["name"]: c for c in report["criteria"]}
    assert by_name["coupling_identities"]["passed"] is False
    assert report["all_passed"] is False
    # the fault is surgical: everything else still passes
    others = [c for c in report["criteria"]
              if c["name"] != "coupling_identities"]
    assert all(c["passed"] for c in others)
