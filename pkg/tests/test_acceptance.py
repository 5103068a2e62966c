"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import subprocess
import sys
import time

import pytest

from tc_lab import suites

from conftest import ACCEPTANCE_LINES


def report(n, ok, note):
    line = "criterion %d: %s %s" % (n, "PASS" if ok else "FAIL", note)
    print(line)
    ACCEPTANCE_LINES.append(line)


def check_suite(n, name, budget=None):
    t0 = time.perf_counter()
    rep = suites.run_suite(name)
    dt = time.perf_counter() - t0
    (crit,) = rep["criteria"]
    ok = crit["passed"] and (budget is None or dt < budget)
    note = "%s (%d instances, %.1fs)" % (name, crit["instances"], dt)
    if not crit["passed"]:
        note += ": " + crit["first_failure"]
    elif budget is not None and dt >= budget:
        note += ": over the %gs budget" % budget
    report(n, ok, note)
    assert crit["passed"], crit["first_failure"]
    if budget is not None:
        assert dt < budget
    return crit


def test_criterion_01_tc_values():
    crit = check_suite(1, "tc-values", budget=5.0)
    got = {row["space"]: (row["zdcl"], row["tc_lower"]) for row in crit["details"]}
    assert got["wedge:4"] == (2, 3) and got["surface:3"] == (4, 5)
    assert got["circle"] == (1, 2) and got["torus:3"] == (3, 4)


def test_criterion_02_e0_decomposition():
    crit = check_suite(2, "e0-decomposition", budget=120.0)
    assert crit["instances"] == 4 * 2 * 2 * 3


def test_criterion_03_canonical_identities():
    check_suite(3, "canonical")


def test_criterion_04_bockstein():
    crit = check_suite(4, "bockstein")
    assert crit["instances"] >= 20


def test_criterion_05_kappa():
    check_suite(5, "kappa")


def test_criterion_06_degree_one():
    crit = check_suite(6, "degree-one")
    verdicts = {row["verdict"] for row in crit["details"]}
    assert verdicts == {"essential", "blocked"}
    assert all(row["certificate"] is not None for row in crit["details"] if row["verdict"] == "essential")


def test_criterion_07_universality():
    check_suite(7, "universality")


def test_criterion_08_phi_gamma():
    check_suite(8, "phi-gamma")


def test_criterion_09_abelian():
    crit = check_suite(9, "abelian")
    assert [row["terms"] for row in crit["details"][:4]] == [2, 4, 8, 16]


def test_criterion_10_symplectic():
    crit = check_suite(10, "symplectic")
    assert [abs(row["coefficient"]) for row in crit["details"]] == [2, 6, 20]


def test_criterion_11_couple():
    check_suite(11, "couple")


def test_criterion_12_determinism():
    cmd = [sys.executable, "-m", "tc_lab.cli", "--format", "json", "verify", "--suite", "all"]
    outs = []
    t0 = time.perf_counter()
    for _ in range(2):
        proc = subprocess.run(cmd, capture_output=True, timeout=900)
        outs.append((proc.returncode, proc.stdout))
    dt = time.perf_counter() - t0
    ok = outs[0] == outs[1] and outs[0][0] == 0 and dt <= 900
    report(12, ok, "verify --suite all twice: %s, exit %d, %.1fs"
           % ("byte-identical" if outs[0][1] == outs[1][1] else "outputs differ", outs[0][0], dt))
    assert outs[0][0] == 0
    assert outs[0][1] == outs[1][1]
    assert dt <= 900
