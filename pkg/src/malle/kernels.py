"""Kernel backend selection.

Prefers the compiled extension, falls back to the numpy/pure implementation.
Set MALLE_KERNELS=pure or MALLE_KERNELS=compiled to force a backend (the
latter raises if the extension is not built).
"""

from __future__ import annotations

import os

_forced = os.environ.get("MALLE_KERNELS", "").strip().lower()

if _forced == "pure":
    from . import _purekernels as _impl
elif _forced == "compiled":
    from . import _fastkernels as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _fastkernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _purekernels as _impl

BACKEND: str = _impl.BACKEND

primes_up_to = _impl.primes_up_to
smallest_prime_factors = _impl.smallest_prime_factors
expand_multiplicative_int = _impl.expand_multiplicative_int
bounded_products_grid = _impl.bounded_products_grid
bounded_products_exact = _impl.bounded_products_exact


def backends() -> list[str]:
    """Names of the importable backends."""
    out = ["pure"]
    try:
        from . import _fastkernels  # noqa: F401
        out.append("compiled")
    except ImportError:
        pass
    return out


def load(name: str):
    """Import a backend module by name (for parity tests and benchmarks)."""
    if name == "pure":
        from . import _purekernels
        return _purekernels
    if name == "compiled":
        from . import _fastkernels
        return _fastkernels
    raise ValueError(f"unknown backend {name!r}")
