"""Hot integer kernels for the seed search and coding-gain enumeration.

Two interchangeable backends share one contract: numba ``@njit`` loops
(default) and a pure-numpy fallback.  Set ``GSTBC_NO_NUMBA=1`` to force the
fallback; it is also selected automatically when numba cannot be imported.
``benchmarks/bench_kernels.py`` compares the two.

Both backends perform exact integer arithmetic on single-thread matrix
encodings; they must produce identical results, which the test suite checks.
"""

from __future__ import annotations

import os

from . import _numpy

_FLAG = os.environ.get("GSTBC_NO_NUMBA", "").strip().lower()
_want_numba = _FLAG not in ("1", "true", "yes")

if _want_numba:
    try:
        from . import _numba as _impl
        _BACKEND = "numba"
    except ImportError:
        _impl = _numpy
        _BACKEND = "numpy"
else:
    _impl = _numpy
    _BACKEND = "numpy"


def backend_name() -> str:
    return _BACKEND


def get_backend(name: str):
    """Explicit backend module lookup (used by tests and the benchmark)."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown kernel backend {name!r}")


anticommute_table = _impl.anticommute_table
middle_table = _impl.middle_table
flatten_encoded = _impl.flatten_encoded
anchor_product_vectors = _impl.anchor_product_vectors
reduce_row = _impl.reduce_row
quotient_rank = _impl.quotient_rank
hermitian_int_det = _impl.hermitian_int_det
min_gram_det = _impl.min_gram_det

__all__ = [
    "backend_name",
    "get_backend",
    "anticommute_table",
    "middle_table",
    "flatten_encoded",
    "anchor_product_vectors",
    "reduce_row",
    "quotient_rank",
    "hermitian_int_det",
    "min_gram_det",
]
