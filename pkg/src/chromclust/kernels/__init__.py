"""Backend dispatch for the two hot loops.

The package has exactly two compute-bound paths: exhaustive partition
scans (exact solver) and Monte Carlo rounding trials.  Both exist in
two interchangeable implementations with identical semantics:

* ``numba``: scalar loops compiled with ``@njit`` (default when numba
  imports cleanly),
* ``numpy``: vectorized array code, no compilation step.

Selection is per call.  The CHROMCLUST_BACKEND environment variable
("numba" or "numpy") overrides the default; an explicit ``backend=``
argument overrides both.  The two backends share one counter-based
splitmix64 RNG, so for equal seeds they produce bitwise identical trial
outcomes.  tests/test_kernels.py and the bench CLI subcommand rely on
that equality.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import CapacityError, ContractError
from . import _numpy_impl

try:
    from . import _numba_impl

    HAS_NUMBA = True
except ImportError:
    _numba_impl = None  # type: ignore[assignment]
    HAS_NUMBA = False

ENV_VAR = "CHROMCLUST_BACKEND"

# bitmask state in the trial loop is a single uint64
MAX_KERNEL_VERTICES = 62


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAS_NUMBA else ("numpy",)


def resolve_backend(backend: str | None = None):
    """Map a backend name (or None) to an implementation module."""
    name = backend or os.environ.get(ENV_VAR, "").strip().lower() or None
    if name is None:
        name = "numba" if HAS_NUMBA else "numpy"
    if name == "numpy":
        return _numpy_impl
    if name == "numba":
        if not HAS_NUMBA:
            raise ContractError(
                "numba backend requested but numba is not importable; "
                "install the 'fast' extra or set CHROMCLUST_BACKEND=numpy"
            )
        return _numba_impl
    raise ContractError(f"unknown backend {name!r}, expected 'numba' or 'numpy'")


def backend_name(backend: str | None = None) -> str:
    return resolve_backend(backend).NAME


def _check_kernel_size(n: int) -> None:
    if n > MAX_KERNEL_VERTICES:
        raise CapacityError(f"kernels handle at most {MAX_KERNEL_VERTICES} vertices, got {n}")


def exact_scan(labels: np.ndarray, n: int, n_colors: int, backend: str | None = None):
    """(best_cost, optima_count, partitions_visited) over all partitions."""
    _check_kernel_size(n)
    impl = resolve_backend(backend)
    return impl.exact_scan(np.ascontiguousarray(labels, np.int16), n, n_colors)


def exact_collect(
    labels: np.ndarray,
    n: int,
    n_colors: int,
    best_cost: int,
    optima_count: int,
    backend: str | None = None,
) -> np.ndarray:
    """All optimal partitions as restricted-growth rows, lexicographic."""
    _check_kernel_size(n)
    impl = resolve_backend(backend)
    return impl.exact_collect(
        np.ascontiguousarray(labels, np.int16), n, n_colors, best_cost, optima_count
    )


def rounding_trials(
    labels: np.ndarray,
    n: int,
    n_colors: int,
    masks: np.ndarray,
    set_colors: np.ndarray,
    cumw: np.ndarray,
    seed: int,
    trials: int,
    cap: int,
    backend: str | None = None,
):
    """Monte Carlo rounding; see rounding.estimate for the aggregate shape."""
    _check_kernel_size(n)
    impl = resolve_backend(backend)
    return impl.rounding_trials(
        np.ascontiguousarray(labels, np.int16),
        n,
        n_colors,
        np.ascontiguousarray(masks, np.uint64),
        np.ascontiguousarray(set_colors, np.int8),
        np.ascontiguousarray(cumw, np.float64),
        np.uint64(seed),
        int(trials),
        int(cap),
    )


def round_single(
    labels: np.ndarray,
    n: int,
    n_colors: int,
    masks: np.ndarray,
    set_colors: np.ndarray,
    cumw: np.ndarray,
    seed: int,
    trial_index: int,
    cap: int,
    backend: str | None = None,
):
    """One trial of the rounding chain; replays trial `trial_index` of a run."""
    _check_kernel_size(n)
    impl = resolve_backend(backend)
    return impl.round_single(
        np.ascontiguousarray(labels, np.int16),
        n,
        n_colors,
        np.ascontiguousarray(masks, np.uint64),
        np.ascontiguousarray(set_colors, np.int8),
        np.ascontiguousarray(cumw, np.float64),
        np.uint64(seed),
        int(trial_index),
        int(cap),
    )
