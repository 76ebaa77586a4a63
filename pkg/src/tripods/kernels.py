"""Backend selection for the tripod-search kernels.

The compiled extension ``tripods._seeds`` is preferred when it imported
successfully; setting ``TRIPOD_PURE_PYTHON=1`` forces the numpy
fallback.  Both backends implement identical numerics (see
``benchmarks/bench_kernels.py`` for a timing comparison).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from ._kernels_py import CurveTable, eval_curve, table_from_curve

_seeds = None
if not os.environ.get("TRIPOD_PURE_PYTHON"):
    try:
        from . import _seeds as _seeds  # type: ignore[no-redef]
    except ImportError:
        _seeds = None


def backend_name() -> str:
    return "compiled" if _seeds is not None else "python"


def residual(table: CurveTable, tuv, p):
    """Chart gradient of the tripod functional (always the numpy path)."""
    return _kernels_py.residual(table, np.asarray(tuv, dtype=float), np.asarray(p, dtype=float))


def compiled_residual(table: CurveTable, tuv, p):
    """Compiled-backend gradient, for parity tests; None if unavailable."""
    if _seeds is None:
        return None
    return _seeds.residual(
        table.kind,
        table.a0,
        np.ascontiguousarray(table.cos),
        np.ascontiguousarray(table.sin),
        table.omega,
        np.ascontiguousarray(tuv, dtype=float),
        np.ascontiguousarray(p, dtype=float),
    )


def newton_refine(table: CurveTable, state, tol: float = 1e-12, max_iter: int = 60, fd_step: float = 1e-6, force_python: bool = False):
    state = np.ascontiguousarray(state, dtype=float)
    if _seeds is not None and not force_python:
        return _seeds.newton_refine(
            table.kind,
            table.a0,
            np.ascontiguousarray(table.cos),
            np.ascontiguousarray(table.sin),
            table.omega,
            table.period,
            state,
            tol,
            max_iter,
            fd_step,
        )
    return _kernels_py.newton_refine(table, state, tol=tol, max_iter=max_iter, fd_step=fd_step)
