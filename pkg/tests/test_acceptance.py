"""Acceptance gate: every top-level numerical claim, one test per criterion.

Each test runs the corresponding scorecard criterion at its stated tolerance
and prints a PASS/FAIL line (run with -s or look at captured output on
failure).  The detail string names the quantity and the worst error seen.
"""
import pytest

from mrdiv.reproduce import CRITERIA


def _run(number: int):
    ok, detail = CRITERIA[number]()
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_max_entangled_sandwich():
    _run(1)


def test_criterion_2_isotropic_sandwich_formula():
    _run(2)


def test_criterion_3_isotropic_closed_form_routes():
    _run(3)


def test_criterion_4_certificates_and_dual_recovery():
    _run(4)


def test_criterion_5_variational_gap_branches():
    _run(5)


def test_criterion_6_antisymmetric_certificates():
    _run(6)


def test_criterion_7_exponent_presets():
    _run(7)


def test_criterion_8_property_suites():
    _run(8)


def test_criterion_9_infinite_vs_constrained():
    _run(9)
