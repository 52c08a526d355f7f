import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adec import _fallback
from adec.operators import delta_pow
from adec.quantizer import Alphabet, q0, q0_real, sigma_delta, stability_margin


def test_alphabet_levels():
    a = Alphabet(0.5, 2)
    assert a.levels.tolist() == [-0.75, -0.25, 0.25, 0.75]
    assert a.size == 4 and 0 not in a.levels
    with pytest.raises(ValueError):
        Alphabet(0.0, 2)
    with pytest.raises(ValueError):
        Alphabet(0.5, 0)


def test_q0_examples():
    a = Alphabet(0.5, 2)
    assert a.value(q0_real(0.3, a)[0]) == 0.25
    assert a.value(q0_real(0.0, a)[0]) == 0.25
    j, over = q0_real(10.0, a)
    assert a.value(j) == 0.75 and over
    j, over = q0_real(-1.0, a)
    assert a.value(j) == -0.75 and not over
    jr, ji, over = q0(0.3 - 0.6j, a)
    assert a.complex_value(jr, ji) == 0.25 - 0.75j and not over


def test_hand_recursion():
    out = sigma_delta([0.3, 0.3, 0.3], 1, Alphabet(0.5, 2))
    assert not out.is_complex
    assert out.q.tolist() == [0.25, 0.25, 0.25]
    assert np.allclose(out.u, [0.05, 0.10, 0.15])


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_zero_signal(r):
    a = Alphabet(0.25, 8)
    out = sigma_delta(np.zeros(32, dtype=complex), r, a)
    assert out.u_inf_component <= a.delta / 2
    assert np.array_equal(-out.q, delta_pow(32, r) @ out.u)


@settings(max_examples=60, deadline=None)
@given(r=st.integers(1, 3), m=st.integers(1, 80), seed=st.integers(0, 10_000), frac=st.floats(0, 1))
def test_noise_identity_and_stability(r, m, seed, frac):
    a = Alphabet(0.25, 8)
    rng = np.random.default_rng(seed)
    room = a.L * a.delta - (2**r - 1) * a.delta / 2
    y = frac * room * (rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m))
    out = sigma_delta(y, r, a)
    assert stability_margin(y, r, a) >= 0
    assert not out.overloaded
    assert out.u_inf_component <= a.delta / 2 + 1e-15
    resid = y - out.q - delta_pow(m, r) @ out.u
    assert np.max(np.abs(resid)) <= 1e-12 * (np.max(np.abs(y)) + a.L * a.delta)


def test_overload_flag():
    out = sigma_delta(np.full(5, 3.0 + 0j), 1, Alphabet(0.25, 8))
    assert out.overloaded


def test_stability_margin_examples():
    assert stability_margin([0.3], 1, Alphabet(0.25, 8)) == pytest.approx(1.575)
    assert stability_margin([0.0], 1, Alphabet(1.0, 1)) == pytest.approx(0.5)
    for r in (1, 2, 3):
        assert stability_margin([2.0j], r, Alphabet(0.25, 8)) < 0


@settings(max_examples=30, deadline=None)
@given(r=st.integers(1, 4), seed=st.integers(0, 999))
def test_backends_agree(r, seed):
    y = np.random.default_rng(seed).uniform(-3, 3, 64)
    got = sigma_delta(y, r, Alphabet(0.25, 8))
    lv, u, over = _fallback.greedy_sd_real(y, r, 0.25, 8)
    assert np.array_equal(got.levels_re, lv)
    assert np.array_equal(got.u, u)
    assert got.overloaded == bool(over)
