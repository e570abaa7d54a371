"""Digit-set masks and their zero sets.

The mask of a finite integer set is the normalized exponential sum
(1/#digits) * sum_b exp(-2*pi*i*b*x).  It has period 1 and value 1 at
x = 0.  Its zeros on [0,1) split into a rational part (fractions j/n
where the corresponding root-of-unity sum vanishes, detected exactly
through cyclotomic factors) and possibly finitely many irrational
points (unit circle roots of the residual polynomial, located
numerically and only ever reported, never silently used in exact
decisions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .cyclotomic import cyclotomic_orders, unit_circle_angles
from .measures import frac_mod1, frac_str, parse_frac, phase_unit

Rational = Union[Fraction, int]


def eval_mask(digits: Sequence[int], x) -> complex:
    """Mean of exp(-2*pi*i*b*x) over the digit set.

    Exact phase bookkeeping for Fraction input, float otherwise.  This
    is the Fourier transform of the uniform atomic measure on the
    digits, and scaling the argument by 1/scale gives the transfer
    factor each convolution level contributes.
    """
    digits = list(digits)
    if not digits:
        raise ValueError("digit set must be nonempty")
    if isinstance(x, Fraction):
        total = 0 + 0j
        for b in digits:
            total += phase_unit(frac_mod1(b * x))
        return total / len(digits)
    total = np.exp(-2j * np.pi * np.asarray(digits, dtype=float) * float(x)).sum()
    return complex(total / len(digits))


def mask_values(digits: Sequence[int], xs: np.ndarray) -> np.ndarray:
    """Vectorized digit-set transform over a float array."""
    b = np.asarray(list(digits), dtype=float)
    return np.exp(-2j * np.pi * np.asarray(xs, dtype=float)[..., None] * b).mean(axis=-1)


@dataclass(frozen=True)
class RationalZeroSet:
    """The periodic set {phase + k*period : k integer, phase in phases}.

    Canonical form: period > 0, phases sorted, each in [0, period).
    """

    period: Fraction
    phases: tuple[Fraction, ...]

    def __post_init__(self):
        period = Fraction(self.period)
        if period <= 0:
            raise ValueError("period must be positive")
        reduced = sorted(set(Fraction(p) % period for p in self.phases))
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "phases", tuple(reduced))

    def __bool__(self) -> bool:
        return bool(self.phases)

    def contains(self, x: Rational) -> bool:
        return Fraction(x) % self.period in self.phases

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def members_in(self, lo: Rational, hi: Rational) -> list[Fraction]:
        """All elements in the closed interval [lo, hi], ascending."""
        lo, hi = Fraction(lo), Fraction(hi)
        out = []
        if hi < lo:
            return out
        for p in self.phases:
            # smallest k with p + k*period >= lo
            k = -((p - lo) // self.period)
            x = p + k * self.period
            while x <= hi:
                out.append(x)
                x += self.period
        return sorted(out)

    def min_abs_nonzero(self) -> Fraction:
        """Distance from 0 to the nearest nonzero element."""
        best = self.period
        for p in self.phases:
            if p != 0:
                best = min(best, p, self.period - p)
        return best

    def scaled(self, c: Rational) -> "RationalZeroSet":
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return RationalZeroSet(self.period * c, tuple(p * c for p in self.phases))

    def shifted(self, t: Rational) -> "RationalZeroSet":
        return RationalZeroSet(self.period, tuple((p + Fraction(t)) % self.period for p in self.phases))

    def progressions(self) -> list[tuple[Fraction, Fraction]]:
        return [(p, self.period) for p in self.phases]

    @classmethod
    def empty(cls, period: Rational = 1) -> "RationalZeroSet":
        return cls(Fraction(period), ())

    @classmethod
    def merge(cls, parts: Iterable["RationalZeroSet"]) -> "RationalZeroSet":
        """Union, re-expressed over the lcm of the periods."""
        parts = list(parts)
        if not parts:
            return cls.empty()
        period = Fraction(
            lcm(*(p.period.numerator for p in parts)),
            gcd(*(p.period.denominator for p in parts)),
        )
        phases = []
        for part in parts:
            reps = int(period / part.period)
            assert reps * part.period == period
            for p in part.phases:
                phases.extend(p + j * part.period for j in range(reps))
        return cls(period, tuple(phases))

    def to_json(self) -> dict:
        return {
            "period": frac_str(self.period),
            "phases": [frac_str(p) for p in self.phases],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalZeroSet":
        return cls(parse_frac(data["period"]), tuple(parse_frac(p) for p in data["phases"]))


@dataclass(frozen=True)
class IrrationalZeroFlag:
    """Marker that a digit set has mask zeros off the rational grid.

    `angles` are numeric approximations of those zeros in (0, 1); they are
    diagnostics, not certificates.
    """

    angles: tuple[float, ...]

    def to_json(self) -> dict:
        return {"irrational_zero_angles": list(self.angles)}


@dataclass(frozen=True)
class MaskZeros:
    rational: RationalZeroSet
    irrational: Optional[IrrationalZeroFlag]

    @property
    def purely_rational(self) -> bool:
        return self.irrational is None

    def to_json(self) -> dict:
        out = {"rational": self.rational.to_json()}
        if self.irrational is not None:
            out.update(self.irrational.to_json())
        return out


@lru_cache(maxsize=None)
def mask_zero_set(digits: tuple[int, ...]) -> MaskZeros:
    """Complete zero description of the digit-set mask on one period.

    Translating the digits multiplies the mask by a unit phase, so they
    are first shifted to start at 0; repeated digits would rescale, not
    add zeros, and are rejected.
    """
    digits = tuple(sorted(digits))
    if len(set(digits)) != len(digits):
        raise ValueError("digit set must have distinct elements")
    b0 = digits[0]
    coeffs = [0] * (digits[-1] - b0 + 1)
    for b in digits:
        coeffs[b - b0] = 1
    orders, residual = cyclotomic_orders(coeffs)
    phases = []
    for n in orders:
        for j in range(1, n):
            if gcd(j, n) == 1:
                phases.append(Fraction(j, n))
    angles = unit_circle_angles(residual)
    flag = IrrationalZeroFlag(tuple(angles)) if angles else None
    return MaskZeros(RationalZeroSet(Fraction(1), tuple(phases)), flag)


class IrrationalZeroPresent(ValueError):
    """A mask has zeros off the rational grid, so any enumeration that
    promises completeness over the rationals would silently lie."""

    def __init__(self, digits: tuple[int, ...], angles: tuple[float, ...]):
        super().__init__(
            f"digit set {digits} has mask zeros off the rational grid "
            f"(angles ~ {angles}); the rational part alone is not the whole zero set"
        )
        self.digits = digits
        self.angles = angles


def rational_zeros(digits: Sequence[int]) -> RationalZeroSet:
    """Rational zero phases of the mask; raises if irrational zeros exist,
    so callers relying on completeness cannot be fooled."""
    mz = mask_zero_set(tuple(digits))
    if not mz.purely_rational:
        raise IrrationalZeroPresent(tuple(digits), mz.irrational.angles)
    return mz.rational


def window_zeros(
    levels: Iterator[tuple[Fraction, tuple[int, ...]]],
    lo: Rational,
    hi: Rational,
    min_zero_gap: Optional[Fraction] = None,
    max_levels: int = 10_000,
) -> list[Fraction]:
    """Zeros in [lo, hi] of a product of masks taken at x / scale_k.

    `levels` yields (scale_k, digits_k) with cumulative scales strictly
    increasing.  Factor k contributes its mask's zero set blown up by
    scale_k, whose nonzero elements all have absolute value >= scale_k
    times the least nonzero mask zero distance over the whole level
    alphabet.  `min_zero_gap` must be a positive lower bound on that
    distance valid for EVERY level, not just the ones already seen; once
    scale * min_zero_gap clears max(|lo|, |hi|), no later factor can
    reach the window and enumeration stops.  A finite `levels` iterator
    may omit the gap (exhaustion ends the scan); an infinite one without
    a gap exhausts max_levels and raises.  Also raises if a digit set
    has irrational mask zeros, since the rational window would then be
    incomplete.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    reach = max(abs(lo), abs(hi))
    zeros: set[Fraction] = set()
    prev_scale = Fraction(0)
    count = 0
    for scale, digits in levels:
        if count >= max_levels:
            raise RuntimeError(
                f"zero-set window did not stabilize within {max_levels} levels"
            )
        count += 1
        scale = Fraction(scale)
        if scale <= prev_scale:
            raise ValueError("cumulative scales must be strictly increasing")
        prev_scale = scale
        zs = rational_zeros(tuple(digits))
        if zs:
            zeros.update(zs.scaled(scale).members_in(lo, hi))
        if min_zero_gap is not None and scale * min_zero_gap > reach:
            break
    return sorted(zeros)
