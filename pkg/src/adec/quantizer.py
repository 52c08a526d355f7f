"""Mid-rise alphabets and the greedy r-th order sigma-delta quantizer.

The quantizer runs independently on the real and imaginary channels and
keeps the integer level index of every output, so the decimated samples can
later be formed in exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import floor

import numpy as np

from . import _core


@dataclass(frozen=True)
class Alphabet:
    """Levels ``(2j + 1) delta / 2`` for ``-L <= j <= L - 1``."""

    delta: float
    L: int

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError("alphabet gap must be positive")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError("alphabet half-length must be a positive integer")

    @property
    def levels(self) -> np.ndarray:
        j = np.arange(-self.L, self.L)
        return (2 * j + 1) * self.delta / 2

    @property
    def size(self) -> int:
        return 2 * self.L

    def value(self, j):
        return (2 * np.asarray(j) + 1) * self.delta / 2

    def complex_value(self, j_re, j_im):
        return self.value(j_re) + 1j * self.value(j_im)


def q0_real(v: float, alphabet: Alphabet) -> tuple[int, bool]:
    """Nearest level index of a real value and its overload flag."""
    hi = alphabet.L * alphabet.delta
    overloaded = v > hi or v < -hi
    j = floor(v / alphabet.delta)  # midpoint ties go to the upper level
    j = min(max(j, -alphabet.L), alphabet.L - 1)
    return j, overloaded


def q0(v: complex, alphabet: Alphabet) -> tuple[int, int, bool]:
    """Nearest complex level as ``(j_re, j_im, overloaded)``.

    Out-of-range components clamp to the extreme level and raise the flag.
    """
    v = complex(v)
    j_re, o_re = q0_real(v.real, alphabet)
    j_im, o_im = q0_real(v.imag, alphabet)
    return j_re, j_im, o_re or o_im


@dataclass(frozen=True)
class QuantizationOutput:
    levels_re: np.ndarray
    levels_im: np.ndarray | None  # None for a real-valued run
    u: np.ndarray
    r: int
    alphabet: Alphabet
    overloaded: bool

    @property
    def q(self) -> np.ndarray:
        if self.levels_im is None:
            return self.alphabet.value(self.levels_re)
        return self.alphabet.complex_value(self.levels_re, self.levels_im)

    @property
    def is_complex(self) -> bool:
        return self.levels_im is not None

    @property
    def m(self) -> int:
        return self.u.size

    @property
    def u_inf(self) -> float:
        """``max_n |u_n|`` with the complex modulus."""
        return float(np.max(np.abs(self.u))) if self.u.size else 0.0

    @property
    def u_inf_component(self) -> float:
        if not self.u.size:
            return 0.0
        u = np.asarray(self.u, dtype=np.complex128)
        return float(max(np.max(np.abs(u.real)), np.max(np.abs(u.imag))))


def sigma_delta(y, r: int, alphabet: Alphabet) -> QuantizationOutput:
    """Greedy r-th order sigma-delta: ``y - q = delta^r u`` with ``u_n = 0`` for ``n <= 0``.

    Real input is quantized with the real alphabet only; complex input uses
    the product alphabet channel by channel.  The state update is
    ``w_n = sum_{l=1}^r (-1)^(l+1) C(r, l) u_{n-l}``, ``q_n = Q0(y_n + w_n)`` and ``u_n = y_n + w_n - q_n``.
    """
    if r < 1:
        raise ValueError("sigma-delta order must be at least 1")
    delta, L = float(alphabet.delta), int(alphabet.L)
    if not np.iscomplexobj(y):
        y = np.ascontiguousarray(np.asarray(y, dtype=np.float64).ravel())
        lr, ur, over = _core.greedy_sd_real(y, r, delta, L)
        return QuantizationOutput(np.asarray(lr, dtype=np.int64), None, np.asarray(ur), r, alphabet, bool(over))
    y = np.asarray(y, dtype=np.complex128).ravel()
    lr, ur, o_re = _core.greedy_sd_real(np.ascontiguousarray(y.real), r, delta, L)
    li, ui, o_im = _core.greedy_sd_real(np.ascontiguousarray(y.imag), r, delta, L)
    return QuantizationOutput(
        levels_re=np.asarray(lr, dtype=np.int64),
        levels_im=np.asarray(li, dtype=np.int64),
        u=np.asarray(ur) + 1j * np.asarray(ui),
        r=r,
        alphabet=alphabet,
        overloaded=bool(o_re or o_im),
    )


def stability_margin(y, r: int, alphabet: Alphabet) -> float:
    """``L delta - max component of |y| - (2^r - 1) delta / 2``.

    A nonnegative margin guarantees no overload and ``|Re u|, |Im u| <= delta/2``.
    """
    y = np.asarray(y, dtype=np.complex128).ravel()
    peak = float(max(np.max(np.abs(y.real)), np.max(np.abs(y.imag)))) if y.size else 0.0
    return alphabet.L * alphabet.delta - peak - (2**r - 1) * alphabet.delta / 2
