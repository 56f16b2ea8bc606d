import dataclasses
import json

import pytest

from deformed_boson.deformation import DeformationSpec, build_ladder_table
from deformed_boson.verify import (
    check_bullet,
    check_commutator,
    check_sigma_round_trip,
    commutator_deviation,
    run_suite,
)


@pytest.mark.parametrize(
    "spec",
    [DeformationSpec.standard(), DeformationSpec.qp(2.0, 1.0), DeformationSpec.q_symmetric(0.8), DeformationSpec.series([1, 0.1])],
)
def test_suite_passes(spec):
    report = run_suite(spec, 16)
    assert report["passed"], [c for c in report["checks"] if not c["passed"]]
    json.dumps(report)


def test_suite_rational():
    report = run_suite(DeformationSpec.series([1, 0.1, 0.01]), 12, "rational")
    assert report["passed"]
    comm = next(c for c in report["checks"] if c["name"] == "commutator_identity")
    assert comm["residual"] == 0


def test_suite_deterministic():
    spec = DeformationSpec.q_symmetric(1.3)
    assert run_suite(spec, 10, seed=3) == run_suite(spec, 10, seed=3)


def test_fixture_reports_level():
    report = run_suite(DeformationSpec.table([1, 0, -1]))
    assert not report["passed"] and report["dim"] == 3 and report["first_degenerate_level"] == 3


@pytest.mark.parametrize("args", [(64 + 1, "float"), (17, "rational"), (8, "complex")])
def test_limits(args):
    with pytest.raises(ValueError):
        run_suite(DeformationSpec.standard(), *args)


def test_commutator_detects_wrong_f():
    # build a table whose f does not match its F: the check must notice
    t = build_ladder_table(DeformationSpec.qp(2.0, 1.0, level_cap=8))
    assert commutator_deviation(t) < 1e-12
    bad = dataclasses.replace(t, f=tuple(v + 1e-6 for v in t.f))
    assert not check_commutator(bad).passed


def test_individual_checks_on_fixture(fixture_table):
    assert not check_sigma_round_trip(fixture_table).passed
    assert not check_bullet(fixture_table).passed
