"""Exact Carlitz and degenerate Carlitz q-Bernoulli numbers and polynomials."""
from .exactcore import L, Q, RatFunc, q, rf_eq, rf_limit, rf_subst

__all__ = ["L", "Q", "RatFunc", "q", "rf_eq", "rf_limit", "rf_subst", "clear_caches"]


def clear_caches() -> None:
    """Drop every memoized value (used to make budget checks reproducible)."""
    from . import carlitz, degenerate

    for mod in (carlitz, degenerate):
        for obj in vars(mod).values():
            if hasattr(obj, "cache_clear"):
                obj.cache_clear()
