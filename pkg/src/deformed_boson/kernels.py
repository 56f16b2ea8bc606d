"""Kernel dispatch: compiled Cython core when built, numpy fallback otherwise.

``BACKEND`` names the implementation selected at import time.
"""
from . import _kernels_py as python_backend

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

ladder_products = _impl.ladder_products
sigma_inverse_table = _impl.sigma_inverse_table
omega_field = _impl.omega_field
trapz_inner = _impl.trapz_inner
