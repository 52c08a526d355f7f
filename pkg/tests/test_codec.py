import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adec import codec
from adec.errors import Malformed, Overflow, RangeViolation
from adec.frames import FrameSpec, build_ugf
from adec.operators import DecimationPlan, adapted_scaled
from adec.quantizer import Alphabet, QuantizationOutput, sigma_delta


def quant_from_levels(re, im, alphabet, r):
    re = np.asarray(re, dtype=np.int64)
    im = None if im is None else np.asarray(im, dtype=np.int64)
    return QuantizationOutput(re, im, np.zeros(re.size, dtype=complex), r, alphabet, False)


def test_window_sums():
    plan = DecimationPlan(1, 4, 2)
    block = codec.encode(quant_from_levels([0] * 4, [0] * 4, Alphabet(0.5, 2), 1), plan)
    samples, pairs = codec.decode(block)
    assert pairs == [(2, 2), (2, 2)]
    assert np.allclose(samples, [0.5 + 0.5j, 0.5 + 0.5j])


@settings(max_examples=100, deadline=None)
@given(r=st.integers(1, 3), eta=st.integers(1, 10), rho=st.integers(1, 8), L=st.integers(1, 16),
       seed=st.integers(0, 2**31))
def test_roundtrip(r, eta, rho, L, seed):
    plan = DecimationPlan.from_eta(r, eta, rho)
    rng = np.random.default_rng(seed)
    re = rng.integers(-L, L, plan.m)
    im = rng.integers(-L, L, plan.m)
    block = codec.EncodedBlock.from_bytes(codec.encode(quant_from_levels(re, im, Alphabet(0.25, L), r), plan).to_bytes())
    samples, pairs = codec.decode(block)
    S = adapted_scaled(plan)
    want_re = S @ (2 * re + 1)
    want_im = S @ (2 * im + 1)
    assert [p[0] for p in pairs] == want_re.tolist()
    assert [p[1] for p in pairs] == want_im.tolist()
    assert np.array_equal(samples, (want_re + 1j * want_im) * 0.125)


def test_real_run_stores_zero_imaginary():
    plan = DecimationPlan(1, 4, 2)
    _, pairs = codec.decode(codec.encode(quant_from_levels([1, 0, -1, 0], None, Alphabet(0.5, 2), 1), plan))
    assert pairs == [(4, 0), (0, 0)]


def test_e1_bit_total():
    plan = DecimationPlan.from_eta(1, 6, 4)
    spec = FrameSpec.from_eigen([1], [1], plan.m)
    frame = build_ugf(spec)
    quant = sigma_delta(frame.phi @ np.array([0.3 + 0.2j]), 1, Alphabet(0.25, 8))
    block = codec.encode(quant, plan)
    assert codec.n_max(8, 24, 1) == 816
    assert block.width == 11 == math.ceil(math.log2(2 * 816 + 1))
    assert codec.bit_budget(plan, 8) == pytest.approx(12 * math.log2(48) + 12 * math.log2(16))
    assert codec.bit_budget(plan, 8) == pytest.approx(115.02, abs=0.01)
    assert block.payload_bits == 132 <= codec.bit_budget(plan, 8) + 4 * plan.eta


def test_bit_budget_laws():
    plan = DecimationPlan.from_eta(2, 6, 4)
    assert codec.bit_budget(plan, 1) == pytest.approx(2 * 6 * 2 * math.log2(48) + 12)
    doubled = DecimationPlan.from_eta(2, 6, 8)
    assert codec.bit_budget(doubled, 8) - codec.bit_budget(plan, 8) == pytest.approx(2 * 6 * 2)


@pytest.mark.parametrize("r,eta,rho,L", [(1, 6, 4, 8), (2, 12, 8, 2), (3, 18, 16, 64)])
def test_exponent_identity(r, eta, rho, L):
    plan = DecimationPlan.from_eta(r, eta, rho)
    lhs = 2.0 ** (-codec.bit_budget(plan, L) / (2 * eta))
    assert lhs == pytest.approx((2 * plan.m) ** (-r) / (2 * L), rel=1e-12)


def test_empty_block():
    block = codec.EncodedBlock(m=0, rho=1, r=1, L=1, delta=1.0, width=3, payload=b"")
    samples, pairs = codec.decode(block)
    assert samples.size == 0 and pairs == []


def test_malformed_streams():
    plan = DecimationPlan(1, 4, 2)
    data = codec.encode(quant_from_levels([0] * 4, [0] * 4, Alphabet(0.5, 2), 1), plan).to_bytes()
    with pytest.raises(Malformed):
        codec.EncodedBlock.from_bytes(b"XDEC" + data[4:])
    with pytest.raises(Malformed):
        codec.EncodedBlock.from_bytes(data[:4] + b"\x02" + data[5:])
    with pytest.raises(Malformed):
        codec.EncodedBlock.from_bytes(data[:-1])
    with pytest.raises(Malformed):
        codec.EncodedBlock.from_bytes(data[:10])


def test_header_layout():
    plan = DecimationPlan(2, 12, 3)
    data = codec.encode(quant_from_levels([0] * 12, [0] * 12, Alphabet(0.25, 8), 2), plan).to_bytes()
    assert data[:5] == b"ADEC\x01"
    assert int.from_bytes(data[5:9], "little") == 12
    assert int.from_bytes(data[9:13], "little") == 3
    assert int.from_bytes(data[13:17], "little") == 8
    assert data[17] == 2


def test_range_violation():
    plan = DecimationPlan(1, 4, 2)
    block = codec.encode(quant_from_levels([0] * 4, [0] * 4, Alphabet(0.5, 2), 1), plan)
    # widen the field so an out-of-range numerator is representable
    forged = codec.EncodedBlock(4, 2, 1, 2, 0.5, 12, codec._pack([2000, 0, 2, 2], 12))
    with pytest.raises(RangeViolation):
        codec.decode(forged)
    assert codec.decode(block)[1] == [(2, 2), (2, 2)]


def test_overflow_on_levels_outside_alphabet():
    plan = DecimationPlan(1, 4, 2)
    with pytest.raises(Overflow):
        codec.encode(quant_from_levels([500] * 4, [0] * 4, Alphabet(0.5, 2), 1), plan)


def test_file_roundtrip(tmp_path):
    plan = DecimationPlan(2, 12, 2)
    block = codec.encode(quant_from_levels(range(-6, 6), [0] * 12, Alphabet(0.25, 8), 2), plan)
    codec.write(tmp_path / "b.adec", block)
    assert codec.read(tmp_path / "b.adec") == block
