import asyncio
import json

import pytest

from cells.algebra import AiSemiring
from cells.errors import ConfigError
from systems.suite import (
    CHECKS,
    CheckResult,
    SuiteContext,
    VerificationReport,
    check_catalog_sizes,
    check_division,
    check_end_chain_structure,
    check_identity_contrasts,
    check_jump_criterion,
    check_meet_addition,
    check_property_laws,
    check_word_transfer,
    load_check_catalog,
    run_suite,
)

DECLARED = [
    "catalog-sizes", "axioms", "identity-contrasts", "prop-3.2", "cor-3.3", "sn-construction",
    "cor-5.2", "prop-5.3", "prop-5.1", "jump-criterion", "end-chain-structure", "meet-addition",
    "theorem-premises", "property-laws",
]


def quick_context(**config):
    return SuiteContext({"n_max": 2, "word_length": 3, "property_cases": 50, **config})


def test_catalog_order():
    names = [entry["name"] for entry in load_check_catalog()]
    assert names == DECLARED
    assert set(names) == set(CHECKS)


def test_catalog_rejects_unknown_checks(tmp_path):
    path = tmp_path / "checks.yaml"
    path.write_text("checks:\n  - name: nope\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_check_catalog(str(path))
    with pytest.raises(ConfigError):
        load_check_catalog(str(tmp_path / "absent.yaml"))


def test_only_runs_the_selected_checks():
    report = asyncio.run(run_suite(quick_context(), only=["prop-3.2"]))
    assert report.passed
    assert [c.name for c in report.checks] == DECLARED
    statuses = {c.name: c.status for c in report.checks}
    assert statuses["prop-3.2"] == "pass"
    assert sum(status == "skipped" for status in statuses.values()) == len(DECLARED) - 1
    assert report.counts() == {"pass": 1, "fail": 0, "skipped": len(DECLARED) - 1}


def test_unknown_selection():
    with pytest.raises(ConfigError):
        asyncio.run(run_suite(quick_context(), only=["prop-9.9"]))


def test_n_max_lower_bound():
    with pytest.raises(ConfigError):
        SuiteContext({"n_max": 1})


def test_corrupted_override_fails_axioms(a21):
    add = a21.add.copy()
    add[0, 1] = 0
    broken = AiSemiring(a21.labels, add, a21.mul)
    ctx = SuiteContext({"n_max": 2}, overrides={"a21": broken})
    report = asyncio.run(run_suite(ctx, only=["axioms"]))
    assert not report.passed
    assert report.exit_code == 1
    axioms = next(c for c in report.checks if c.name == "axioms")
    assert axioms.status == "fail"
    assert axioms.detail.startswith("a21: ")
    assert "commutativity" in axioms.detail


def test_report_rendering():
    report = VerificationReport([
        CheckResult("prop-3.2", "B21 divides A21 squared", "pass", 0.5, "ok"),
        CheckResult("axioms", "axiom suites", "skipped"),
    ])
    text = report.render_text(timing=False)
    assert text.splitlines()[0] == "verify-paper: PASS (1 passed, 0 failed, 1 skipped)"
    assert "[PASS   ] prop-3.2" in text
    assert "[SKIPPED] axioms" in text
    assert report.dumps() == report.dumps()
    doc = json.loads(report.dumps())
    assert doc["verdict"] == "pass"
    assert "elapsed" not in doc["checks"][0]
    assert json.loads(report.dumps(timing=True))["checks"][0]["elapsed"] == 0.5


@pytest.mark.parametrize("check", [
    check_catalog_sizes,
    check_identity_contrasts,
    check_division,
    check_word_transfer,
    check_jump_criterion,
    check_end_chain_structure,
    check_meet_addition,
    check_property_laws,
])
def test_quick_checks(check):
    assert check(quick_context())


@pytest.mark.slow
def test_full_run():
    report = asyncio.run(run_suite(SuiteContext({"n_max": 3}), jobs=2))
    failed = [(c.name, c.detail) for c in report.checks if c.status != "pass"]
    assert failed == []
