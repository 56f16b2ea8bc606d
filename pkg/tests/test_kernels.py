import subprocess
import sys

import numpy as np
import pytest

from deformed_boson import kernels
from deformed_boson.deformation import DeformationSpec, build_ladder_table

py = kernels.python_backend
cy = kernels.compiled_backend

needs_compiled = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    assert (kernels.BACKEND == "cython") == (cy is not None)


@pytest.mark.parametrize(
    "spec", [DeformationSpec.standard(), DeformationSpec.qp(2.0, 0.5), DeformationSpec.q_symmetric(1.3)]
)
def test_python_ladder_products(spec):
    t = build_ladder_table(spec.with_level_cap(10))
    R = py.ladder_products(t.sqrt_F())
    # R[a, i] = sqrt(F(i+1) ... F(i+a))
    for a in range(4):
        for i in range(10 - a + 1):
            ref = np.prod([t.F[i + j] for j in range(1, a + 1)]) ** 0.5
            assert R[a, i] == pytest.approx(ref, rel=1e-14)


@needs_compiled
@pytest.mark.parametrize(
    "spec",
    [
        DeformationSpec.standard(),
        DeformationSpec.qp(2.0, 0.5),
        DeformationSpec.q_symmetric(1.3),
        DeformationSpec.series([1, 0.1, 0.01]),
    ],
)
def test_sigma_tables_agree(spec):
    sF = build_ladder_table(spec.with_level_cap(24)).sqrt_F()
    a, b = py.ladder_products(sF), cy.ladder_products(sF)
    # entries outside the valid triangle are NaN in both
    assert np.allclose(a, b, rtol=1e-14, atol=0, equal_nan=True)
    R = a
    a, b = py.sigma_inverse_table(sF), cy.sigma_inverse_table(sF)
    assert np.array_equal(np.isnan(a), np.isnan(b))
    # the recursion cancels heavily; measure each entry against the size of its summands
    D = a.shape[0]
    for n in range(D):
        for m in range(D):
            for k in range(1, D - max(n, m)):
                i = np.arange(k)
                scale = np.sum(np.abs(R[n + i, k - i] * R[m + i, k - i] * a[n, m, :k])) / (R[n + k, 0] * R[m + k, 0])
                assert abs(a[n, m, k] - b[n, m, k]) <= 1e-12 * scale


@needs_compiled
@pytest.mark.parametrize("nm", [(0, 0), (3, 1), (1, 3), (7, 7), (10, 2)])
@pytest.mark.parametrize("hbar", [1.0, 0.3])
def test_omega_field_agrees(nm, hbar):
    ax = np.linspace(-4, 4, 33)
    a = py.omega_field(*nm, ax, ax, hbar)
    b = cy.omega_field(*nm, ax, ax, hbar)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@needs_compiled
def test_trapz_agrees(rng):
    x = rng.normal(size=(40, 40)) + 1j * rng.normal(size=(40, 40))
    y = rng.normal(size=(40, 40)) + 1j * rng.normal(size=(40, 40))
    assert py.trapz_inner(x, y, 0.1) == pytest.approx(cy.trapz_inner(x, y, 0.1), rel=1e-13)


def test_trapz_weights():
    # trapezoid on a 3x3 grid: corner 1/4, edge 1/2, centre 1
    ones = np.ones((3, 3))
    assert kernels.trapz_inner(ones, ones, 1.0) == pytest.approx(4.0)
    y = np.zeros((3, 3))
    y[0, 0] = 1.0
    assert kernels.trapz_inner(ones, y, 2.0) == pytest.approx(1.0)


def test_fallback_selected_without_extension():
    code = (
        "import sys; sys.modules['deformed_boson._kernels'] = None\n"
        "import deformed_boson as db\n"
        "from deformed_boson.deformation import DeformationSpec, build_ladder_table\n"
        "from deformed_boson.verify import run_suite\n"
        "assert db.BACKEND == 'python', db.BACKEND\n"
        "assert run_suite(DeformationSpec.qp(2.0, 1.0), 8)['passed']\n"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
