import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deformed_boson.deformation import (
    DeformationSpec,
    as_rational,
    build_ladder_table,
    eval_f,
    scale_coefficients,
)
from deformed_boson.errors import LevelCapError, SpecError, UnsupportedKindError


def truncated_commutator_diag(F_values, D):
    """Diagonal of ``a a+ - a+ a`` for ``a = sum sqrt(F(n+1)) |n><n+1|`` (dense oracle)."""
    a = np.zeros((D, D))
    for n in range(D - 1):
        a[n, n + 1] = math.sqrt(F_values[n + 1])
    return np.diag(a @ a.T - a.T @ a)


class TestEvalF:
    def test_standard(self):
        assert eval_f(DeformationSpec.standard(), 5) == 1.0

    def test_standard_hbar(self):
        assert eval_f(DeformationSpec.standard(hbar=0.25), 3) == 0.25

    def test_constant_series_matches_standard(self):
        s = DeformationSpec.series([1])
        for n in range(10):
            assert eval_f(s, n) == eval_f(DeformationSpec.standard(), n)

    def test_qp_closed_form(self):
        assert eval_f(DeformationSpec.qp(2.0, 1.0), 2) == 4.0

    def test_qp_against_brute_force_commutator(self):
        # F(n) = 2**n - 1; the commutator of the truncated ladder gives f(n)
        D = 5
        F = [2.0**n - 1 for n in range(D + 1)]
        diag = truncated_commutator_diag(F, D)
        spec = DeformationSpec.qp(2.0, 1.0)
        for n in range(D - 1):
            assert diag[n] == pytest.approx(eval_f(spec, n), rel=1e-14)

    def test_q_symmetric(self):
        q = 1.3
        F = lambda n: (q**n - q**-n) / (q - 1 / q)
        assert eval_f(DeformationSpec.q_symmetric(q), 4) == pytest.approx(F(5) - F(4), rel=1e-14)

    def test_series_polynomial(self):
        assert eval_f(DeformationSpec.series([1, 2, 3]), 2) == 1 + 4 + 12

    def test_table(self):
        assert eval_f(DeformationSpec.table([1, 0, -1]), 2) == -1.0

    def test_exact(self):
        v = eval_f(DeformationSpec.series([1, 0.1]), 3, exact=True)
        assert v == Fraction(13, 10)

    def test_level_cap(self):
        with pytest.raises(LevelCapError):
            eval_f(DeformationSpec.standard(level_cap=4), 4)
        with pytest.raises(LevelCapError):
            eval_f(DeformationSpec.standard(), -1)


class TestLadderTable:
    def test_standard(self):
        t = build_ladder_table(DeformationSpec.standard(level_cap=10))
        assert t.F == tuple(float(n) for n in range(11))
        assert t.F_fact == tuple(float(math.factorial(n)) for n in range(11))
        assert t.E == tuple(n + 0.5 for n in range(10))

    def test_anchors(self):
        for spec in (DeformationSpec.qp(2.0, 0.5), DeformationSpec.table([1, 0, -1])):
            t = build_ladder_table(spec)
            assert t.F[0] == 0 and t.F_fact[0] == 1

    def test_fixture(self, fixture_table):
        assert fixture_table.F == (0, 1, 1, 0)
        assert fixture_table.F_fact == (1, 1, 1, 0)
        assert fixture_table.first_degenerate_level() == 3

    def test_qp_fixture(self):
        t = build_ladder_table(DeformationSpec.qp(2.0, 1.0))
        assert t.F[:4] == (0, 1, 3, 7)

    def test_lengths(self):
        t = build_ladder_table(DeformationSpec.standard(level_cap=7))
        assert (len(t.F), len(t.F_fact), len(t.E), len(t.f)) == (8, 8, 7, 7)

    def test_exact_table(self):
        t = build_ladder_table(DeformationSpec.series([1, 0.1, 0.01], level_cap=8), exact=True)
        assert all(isinstance(v, Fraction) for v in t.F + t.F_fact + t.E)

    def test_cached(self):
        s = DeformationSpec.standard(level_cap=5)
        assert build_ladder_table(s) is build_ladder_table(s)

    def test_q_to_one_limit(self):
        eps = 1e-6
        tq = build_ladder_table(DeformationSpec.q_symmetric(1 + eps, level_cap=20))
        for n in range(1, 21):
            assert tq.F[n] == pytest.approx(n, rel=1e-4)

    def test_positive_presets(self):
        for spec in (DeformationSpec.q_symmetric(0.7), DeformationSpec.qp(0.5, 3.0), DeformationSpec.standard()):
            t = build_ladder_table(spec)
            assert all(v > 0 for v in t.F_fact)
            assert t.first_degenerate_level() is None


coeff = st.floats(min_value=-2, max_value=2, allow_nan=False).map(lambda x: round(x, 3))


@settings(max_examples=50, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=4), st.integers(2, 20))
def test_spectral_gap_identity_exact(coeffs, D):
    t = build_ladder_table(DeformationSpec.series(coeffs, level_cap=D), exact=True)
    for n in range(1, D + 1):
        assert t.F[n] - t.F[n - 1] == t.f[n - 1]
    for n in range(D - 1):
        assert t.E[n + 1] - t.E[n] == (t.f[n + 1] + t.f[n]) / 2


@settings(max_examples=50, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=4), st.integers(2, 20))
def test_spectral_gap_identity_float(coeffs, D):
    t = build_ladder_table(DeformationSpec.series(coeffs, level_cap=D))
    scale = max(1.0, max(abs(v) for v in t.F))
    for n in range(1, D + 1):
        assert abs(t.F[n] - t.F[n - 1] - t.f[n - 1]) <= 1e-12 * scale


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 5, allow_nan=False), min_size=2, max_size=30))
def test_nonnegative_f_gives_monotone_F(values):
    t = build_ladder_table(DeformationSpec.table(values))
    assert all(b >= a for a, b in zip(t.F, t.F[1:]))


class TestScaling:
    def test_identity_at_hbar_one(self):
        s = DeformationSpec.series([3, 2, 1])
        assert scale_coefficients(s).coeffs == (3, 2, 1)

    def test_half(self):
        s = DeformationSpec.series([1, 1, 1], hbar=0.5)
        assert scale_coefficients(s).coeffs == (1, 0.5, 0.25)

    def test_constant(self):
        assert scale_coefficients(DeformationSpec.series([2], hbar=0.3)).coeffs == (2,)

    def test_non_series(self):
        with pytest.raises(UnsupportedKindError):
            scale_coefficients(DeformationSpec.standard())


class TestSpecValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(kind="bogus"),
            dict(kind="standard", hbar=0.0),
            dict(kind="standard", hbar=-1.0),
            dict(kind="standard", level_cap=0),
            dict(kind="q", q=1.0),
            dict(kind="q", q=-2.0),
            dict(kind="qp", q=2.0, p=2.0),
            dict(kind="series"),
            dict(kind="series", coeffs=(1.0, float("nan"))),
            dict(kind="table", values=(1.0,), level_cap=3),
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(SpecError):
            DeformationSpec(**kwargs)

    def test_json_round_trip(self):
        for spec in (
            DeformationSpec.standard(hbar=0.5, level_cap=8),
            DeformationSpec.q_symmetric(1.3),
            DeformationSpec.qp(2.0, 0.5),
            DeformationSpec.series([1.0, 0.1]),
            DeformationSpec.table([1, 0, -1]),
        ):
            assert DeformationSpec.from_json(json.dumps(spec.to_dict())) == spec

    def test_json_document(self):
        s = DeformationSpec.from_json('{"hbar": 1.0, "kind": "series", "coeffs": [1.0, 0.1], "level_cap": 32}')
        assert s.coeffs == (1.0, 0.1) and s.level_cap == 32

    @pytest.mark.parametrize(
        "doc",
        [
            '{"kind": "standard", "colour": 1}',
            '{"kind": "q"}',
            '{"kind": "standard", "q": 2.0}',
            '{"kind": "nope"}',
            "[1, 2]",
            "not json",
        ],
    )
    def test_json_rejects(self, doc):
        with pytest.raises(SpecError):
            DeformationSpec.from_json(doc)

    def test_as_rational_uses_decimal_repr(self):
        assert as_rational(0.1) == Fraction(1, 10)
        with pytest.raises(SpecError):
            as_rational(float("inf"))
