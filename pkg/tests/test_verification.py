import time

import numpy as np

from adec import verification
from adec.operators import dbar_rho


def test_quick_level_is_fast_and_exact():
    t0 = time.perf_counter()
    results = verification.verify("quick")
    assert time.perf_counter() - t0 < 5
    assert [r.name for r in results] == list(verification.QUICK)
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_flipped_dbar_negative_control():
    results = {r.name: r for r in verification.verify("quick", dbar=lambda m, rho: -dbar_rho(m, rho))}
    assert not results["twist_scale"].passed


def test_transposed_dbar_negative_control():
    results = {r.name: r for r in verification.verify("quick", dbar=lambda m, rho: dbar_rho(m, rho).T.copy())}
    assert not results["twist_scale"].passed


def test_full_level_passes():
    results = verification.verify("full")
    failed = [r.line() for r in results if not r.passed]
    assert not failed, failed


def test_crashing_check_is_reported():
    def boom():
        raise RuntimeError("x")

    res = verification._timed("boom", boom)
    assert not res.passed and "RuntimeError" in res.detail


def test_unknown_level():
    try:
        verification.verify("medium")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")


def test_decay_slopes_are_ordered():
    slopes = verification.decay_slopes(trials=4)
    assert slopes[1] > slopes[2] > slopes[3]
    assert np.isfinite(list(slopes.values())).all()
