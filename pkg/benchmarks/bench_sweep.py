"""Performance benchmarks for dqs.

Covers: series construction, Y columns, exact recurrence checks, identities.
Run: python benchmarks/bench_sweep.py
"""
from __future__ import annotations

import os
import statistics
import sys
import time

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dqs.f_family import build_f7_vee, build_Y
from dqs.logging import set_enabled
from dqs.matrix_system import check_identities
from dqs.services.series_cache import get_series_cache
from dqs.types import FamilyIndex
from dqs.verifier.recurrence import verify_exact_one


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _bench(func, rounds=5, label=""):
    """Run func `rounds` times on a cold series cache, return (median_ms, min_ms, max_ms)."""
    times = []
    for _ in range(rounds):
        get_series_cache().clear()
        t0 = time.perf_counter()
        func()
        times.append((time.perf_counter() - t0) * 1000)
    med = statistics.median(times)
    lo, hi = min(times), max(times)
    print(f"  {label:.<50s} median={med:.1f}ms  min={lo:.1f}ms  max={hi:.1f}ms  (n={rounds})")
    return med, lo, hi


# ---------------------------------------------------------------------------
# Benchmarks
# ---------------------------------------------------------------------------

def bench_f7_vee_nu12():
    build_f7_vee(2, 12, 64)


def bench_y_column_l2_k7_nu12():
    build_Y(FamilyIndex(2, 7, 12), 64)


def bench_exact_eq16_l0_k3_nu12():
    verify_exact_one("eq16", 0, 3, 12, 64)


def bench_exact_eq17_l2_k7_nu12():
    verify_exact_one("eq17", 2, 7, 12, 64)


def bench_identities_l2():
    check_identities(2)


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------

def main():
    set_enabled(False)
    print("=" * 70)
    print("dqs Performance Benchmarks")
    print("=" * 70)

    print("\n[Series construction]")
    _bench(bench_f7_vee_nu12, label="f7 vee, l=2, nu=12, T=64")
    _bench(bench_y_column_l2_k7_nu12, label="Y column, l=2, k=7, nu=12")

    print("\n[Exact recurrence]")
    _bench(bench_exact_eq16_l0_k3_nu12, label="eq16, l=0, k=3, nu=12")
    _bench(bench_exact_eq17_l2_k7_nu12, rounds=3, label="eq17, l=2, k=7, nu=12")

    print("\n[Matrix identities]")
    _bench(bench_identities_l2, rounds=3, label="Four identities, l=2")

    print("\n" + "=" * 70)
    print("Done.")


if __name__ == "__main__":
    main()
