"""Spectrality analysis for infinite convolutions.

Builds candidate frequency sets level by level, evaluates the completeness
function Q on grids with certified radii, decides integral periodic zero
sets exactly where possible, and combines everything into a verdict
pipeline.  Exact branches run first; numerics only ever produce evidence,
never a certified verdict.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

import numpy as np

from .convolution import (
    ConvolutionSpec,
    SparseInsertionSpec,
    TWO_PI_UPPER,
    detect_special,
    zero_set_window,
)
from .cyclotomic import cyclotomic_orders, degree, unit_circle_angles
from .hadamard import AdmissiblePair, find_spectra, FIND_SPECTRA_SCALE_LIMIT
from .mask import IrrationalZeroPresent, eval_mask, mask_zero_set
from .measures import AtomicMeasure, ComplexInterval, frac_str
from .words import SymbolicWord, PeriodicTail

Rational = Union[int, Fraction]

_TWO_PI_UP = float(TWO_PI_UPPER)

# The residue-cover search for a certified zero-set member caps the modulus
# it sweeps; beyond this the certificate would be too slow to check anyway.
_COVER_MODULUS_CAP = 4096


def _level_spectrum(pair: AdmissiblePair) -> tuple[int, ...]:
    """Chosen spectrum of a pair, translated so it contains 0."""
    if pair.spectrum is None:
        raise ValueError(
            "pair (%d, %s) has no chosen spectrum; run find_spectra or "
            "validate the spec first" % (pair.scale, list(pair.digits)))
    lo = min(pair.spectrum)
    return tuple(l - lo for l in pair.spectrum)


@dataclass(frozen=True)
class CandidateSpectrum:
    """Mixed-radix frequency set built from per-level spectra.

    Element k of ``levels`` is the level-(k+1) spectrum translated to
    contain 0, and ``elements`` is the set of all sums

        l_1 + w_1 l_2 + w_1 w_2 ... l_n

    where the weight for level k is the cumulative scale through level
    k-1 times scale_k^(exponent_k - 1).  The extra power keeps each level
    block orthogonal when a level repeats its base scale.
    """
    levels: tuple[tuple[int, ...], ...]
    n: int
    elements: tuple[int, ...]

    def __contains__(self, value: int) -> bool:
        i = bisect_left(self.elements, value)
        return i < len(self.elements) and self.elements[i] == value


def _level_weight(spec: ConvolutionSpec, k: int) -> int:
    """Integer multiplier for the level-k spectrum inside the radix sum."""
    pair = spec.pair_at(k)
    e = spec.exponent_at(k)
    return spec.cumulative_scale(k - 1) * pair.scale ** (e - 1)


def candidate_spectrum(spec: ConvolutionSpec, n: int) -> CandidateSpectrum:
    if n < 1:
        raise ValueError("depth must be at least 1")
    levels = []
    sums = [0]
    for k in range(1, n + 1):
        spectrum = _level_spectrum(spec.pair_at(k))
        levels.append(spectrum)
        w = _level_weight(spec, k)
        sums = [s + w * l for s in sums for l in spectrum]
    expected = 1
    for spectrum in levels:
        expected *= len(spectrum)
    elements = tuple(sorted(set(sums)))
    if len(elements) != expected:
        raise ValueError(
            "level spectra collide: %d distinct sums, expected %d"
            % (len(elements), expected))
    return CandidateSpectrum(tuple(levels), n, elements)


def q_exact_discrete(scale: int, digits: Sequence[int],
                     spectrum: Sequence[int], xi) -> float:
    """Sum of |mask((xi + l)/scale)|^2 over the spectrum.

    Equals 1 for every xi whenever (scale, digits, spectrum) is
    admissible; that identity is what makes the level-by-level tree in
    q_partial conserve mass.
    """
    total = 0.0
    for l in spectrum:
        if isinstance(xi, (int, Fraction)):
            arg = Fraction(Fraction(xi) + l, scale)
        else:
            arg = (float(xi) + l) / scale
        total += abs(eval_mask(digits, arg)) ** 2
    return total


@dataclass(frozen=True)
class QReport:
    grid: tuple[float, ...]
    depth: int
    q_values: tuple[float, ...]
    radii: tuple[float, ...]
    tail_radius: float
    min_q: float
    max_q: float

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "grid": list(self.grid),
            "q_values": list(self.q_values),
            "radii": list(self.radii),
            "tail_radius": self.tail_radius,
            "min_q": self.min_q,
            "max_q": self.max_q,
        }


def _mask_abs2(digits: np.ndarray, y: np.ndarray) -> np.ndarray:
    phases = np.exp((-2j * np.pi) * y[..., None] * digits)
    m = phases.mean(axis=-1)
    return (m * m.conj()).real


def _q_partial_block(spec: ConvolutionSpec, n: int, xs: np.ndarray,
                     tol: float, budget_atoms: int,
                     max_tail: int) -> tuple[np.ndarray, np.ndarray]:
    """Certified Q_n enclosures for a block of grid points.

    Carries per-branch positions y = (xi + partial sum)/c_k, which stay
    bounded because each level divides by its scale before adding the
    next spectrum offset.  Mass pruned to honor budget_atoms is folded
    into the enclosure as an interval of full width.
    """
    npts = len(xs)
    y = xs.astype(float).reshape(npts, 1)
    p = np.ones_like(y)
    value = np.zeros(npts)
    radius = np.zeros(npts)
    for k in range(1, n + 1):
        pair = spec.pair_at(k)
        e = spec.exponent_at(k)
        level_scale = float(pair.scale ** e)
        offsets = np.array(_level_spectrum(pair), dtype=float) / pair.scale
        y = (y / level_scale)[:, :, None] + offsets
        y = y.reshape(npts, -1)
        digits = np.array(pair.digits, dtype=float)
        p = np.repeat(p, len(offsets), axis=1) * _mask_abs2(digits, y)
        if p.shape[1] > budget_atoms:
            order = np.argsort(p, axis=1)
            drop = order[:, :p.shape[1] - budget_atoms]
            keep = order[:, p.shape[1] - budget_atoms:]
            dropped = np.take_along_axis(p, drop, axis=1).sum(axis=1)
            value += dropped / 2.0
            radius += dropped / 2.0
            p = np.take_along_axis(p, keep, axis=1)
            y = np.take_along_axis(y, keep, axis=1)
    # extend the factor product until the remaining tail contributes at
    # most tol/4 per unit of surviving mass
    smin = spec.min_level_scale()
    hw = float(spec.support_halfwidth())
    m = n
    while m < n + max_tail:
        worst = _TWO_PI_UP * hw * float(np.max(np.abs(y))) * 1.0000001
        if worst <= tol / 4.0:
            break
        m += 1
        pair = spec.pair_at(m)
        e = spec.exponent_at(m)
        y = y / float(pair.scale ** e)
        p = p * _mask_abs2(np.array(pair.digits, dtype=float), y)
    err = np.minimum(1.0, _TWO_PI_UP * hw * np.abs(y) * 1.0000001)
    lo = p * np.maximum(0.0, 1.0 - err) ** 2
    value += (lo + p).sum(axis=1) / 2.0
    radius += (p - lo).sum(axis=1) / 2.0
    return value, radius


def q_partial(spec: ConvolutionSpec, n: int, grid: Sequence,
              tol: float = 1e-6, budget_atoms: int = 16384,
              max_tail: int = 64, threads: Optional[int] = None) -> QReport:
    if n < 1:
        raise ValueError("depth must be at least 1")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    for k in range(1, n + 1):
        _level_spectrum(spec.pair_at(k))
    xs = np.array([float(x) for x in grid], dtype=float)
    if len(xs) == 0:
        return QReport((), n, (), (), 0.0, 0.0, 0.0)
    if threads and threads > 1 and len(xs) > 1:
        chunks = np.array_split(xs, min(threads, len(xs)))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda c: _q_partial_block(spec, n, c, tol, budget_atoms,
                                           max_tail),
                chunks))
        value = np.concatenate([v for v, _ in parts])
        radius = np.concatenate([r for _, r in parts])
    else:
        value, radius = _q_partial_block(spec, n, xs, tol, budget_atoms,
                                         max_tail)
    return QReport(
        grid=tuple(float(x) for x in xs),
        depth=n,
        q_values=tuple(float(v) for v in value),
        radii=tuple(float(r) for r in radius),
        tail_radius=float(radius.max()) if len(radius) else 0.0,
        min_q=float(value.min()) if len(value) else 0.0,
        max_q=float(value.max()) if len(value) else 0.0,
    )


EMPTY_CERTIFIED = "empty-certified"
EMPTY_UP_TO_HORIZON = "empty-up-to-horizon"
NONEMPTY_WITNESS = "nonempty-witness"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class IZVerdict:
    """Outcome of an integral periodic zero set computation.

    kind is one of the module constants above.  A nonempty witness always
    carries the smallest member of the zero set in (0, 1) together with a
    reason string describing the certificate that covers every integer
    translate.
    """
    kind: str
    witness: Optional[Fraction] = None
    horizon: Optional[int] = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = frac_str(self.witness)
        if self.horizon is not None:
            out["horizon"] = self.horizon
        return out


def iz_finite(m: AtomicMeasure) -> IZVerdict:
    """Exact integral periodic zero set of a finite rational measure.

    The transform has period D, the common denominator of the atom
    positions, so membership reduces to one residue class being made
    entirely of zeros.  Zeros come from the cyclotomic factors of the
    weighted support polynomial; leftover factors with roots on the unit
    circle would sit at irrational points and leave the answer open.
    """
    D = 1
    for x, _ in m.atoms:
        D = D * Fraction(x).denominator // gcd(D, Fraction(x).denominator)
    positions = [int(Fraction(x) * D) for x, _ in m.atoms]
    pmin = min(positions)
    wden = 1
    for _, w in m.atoms:
        wden = wden * w.denominator // gcd(wden, w.denominator)
    coeffs = [0] * (max(positions) - pmin + 1)
    for (x, w), pos in zip(m.atoms, positions):
        coeffs[pos - pmin] += int(w * wden)
    orders, residual = cyclotomic_orders(coeffs)
    zeros: set[Fraction] = set()
    for order in orders:
        for j in range(1, order + 1):
            if gcd(j, order) == 1:
                zeros.add(Fraction(D * j, order) % D)
    by_class: dict[Fraction, int] = {}
    for z in zeros:
        by_class[z % 1] = by_class.get(z % 1, 0) + 1
    complete = sorted(f for f, count in by_class.items() if count == D)
    if complete:
        witness = complete[0]
        return IZVerdict(
            NONEMPTY_WITNESS, witness=witness,
            reason="transform has period %d and vanishes on %s plus every "
                   "integer offset 0..%d" % (D, frac_str(witness), D - 1))
    if _has_unit_circle_residual(residual):
        return IZVerdict(
            UNDECIDED,
            reason="support polynomial keeps non-cyclotomic unit-circle "
                   "roots; zeros at irrational points were not ruled out")
    return IZVerdict(
        EMPTY_CERTIFIED,
        reason="no residue class modulo the period %d consists entirely "
               "of transform zeros" % D)


def _has_unit_circle_residual(residual) -> bool:
    if degree(residual) <= 0:
        return False
    return len(unit_circle_angles(residual)) > 0


def _zero_candidates(spec: ConvolutionSpec) -> list[Fraction]:
    window = zero_set_window(spec, 0, Fraction(1))
    return [z for z in window if 0 < z < 1]


def _residue_cover(spec: ConvolutionSpec, f: Fraction,
                   horizon: int) -> Optional[tuple[int, str]]:
    """Look for a periodic certificate that every translate of f is a zero.

    Covers residues modulo M = |c_J| one level at a time: residue r is
    covered by level k when (f + r)/c_k lands in the level mask's zero
    set and that zero set's period divides M/c_k, which pushes the whole
    arithmetic progression r + M Z into the zero set.
    """
    for J in range(1, horizon + 1):
        M = abs(spec.cumulative_scale(J))
        if M > _COVER_MODULUS_CAP:
            return None
        assignments = []
        for r in range(M):
            found = None
            for k in range(1, J + 1):
                c = spec.cumulative_scale(k)
                mz = mask_zero_set(spec.pair_at(k).digits).rational
                if not mz.phases:
                    continue
                if Fraction(M, abs(c)) % mz.period != 0:
                    continue
                if mz.contains(Fraction(f + r, c)):
                    found = k
                    break
            if found is None:
                break
            assignments.append(found)
        else:
            return M, "levels %s cover residues 0..%d modulo %d" % (
                ",".join(str(k) for k in sorted(set(assignments))), M - 1, M)
    return None


def iz_weak_limit(spec_or_measure, horizon: int = 64) -> IZVerdict:
    """Integral periodic zero set of an infinite convolution (or atom list).

    Candidates are the transform's rational zeros inside (0, 1), a finite
    exact set.  A candidate dies as soon as one integer translate is
    certified nonzero; every candidate dying is a complete emptiness
    proof because zeros of the infinite product only occur on the scaled
    level zero sets.  A survivor is promoted to a witness only when a
    periodic residue cover certifies all of its translates at once.
    """
    if isinstance(spec_or_measure, AtomicMeasure):
        return iz_finite(spec_or_measure)
    spec = spec_or_measure
    if not isinstance(spec, ConvolutionSpec):
        raise TypeError("expected a ConvolutionSpec or AtomicMeasure")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    try:
        candidates = _zero_candidates(spec)
    except IrrationalZeroPresent as exc:
        return IZVerdict(
            UNDECIDED,
            reason="a level mask has zeros at irrational points (%s); the "
                   "candidate list would be incomplete" % exc)
    if not candidates:
        return IZVerdict(
            EMPTY_CERTIFIED,
            reason="the transform has no zeros inside (0, 1), so no "
                   "residue class can consist of zeros")
    kills: list[str] = []
    survivors: list[Fraction] = []
    for f in candidates:
        killer = None
        for k in range(1, horizon + 1):
            if not spec.transform_zero_at(f + k):
                killer = k
                break
            if not spec.transform_zero_at(f - k):
                killer = -k
                break
        if killer is None:
            survivors.append(f)
        else:
            kills.append("%s dies at translate %+d" % (frac_str(f), killer))
    if not survivors:
        return IZVerdict(
            EMPTY_CERTIFIED,
            reason="every candidate has a certified nonzero translate: "
                   + "; ".join(kills))
    for f in survivors:
        cover = _residue_cover(spec, f, horizon)
        if cover is not None:
            modulus, description = cover
            return IZVerdict(
                NONEMPTY_WITNESS, witness=f,
                reason="all translates of %s are zeros: %s"
                       % (frac_str(f), description))
    return IZVerdict(
        EMPTY_UP_TO_HORIZON, horizon=horizon,
        reason="candidates %s survive every translate check up to %d but "
               "admit no periodic cover certificate; membership undecided"
               % (", ".join(frac_str(f) for f in survivors), horizon))


def _letter_difference_gcd(spec: ConvolutionSpec,
                           letters: Sequence[int]) -> int:
    g = 0
    for letter in letters:
        digits = spec.alphabet[letter - 1].digits
        base = digits[0]
        for b in digits[1:]:
            g = gcd(g, b - base)
    return g


def tail_difference_gcd(spec: ConvolutionSpec, k: int) -> int:
    """gcd of all digit differences over letters used at positions >= k."""
    if k < 1:
        raise ValueError("positions are 1-based")
    shifted = spec.word.shift(k - 1)
    letters = sorted(shifted.occurring_letters())
    return _letter_difference_gcd(spec, letters)


def gcd_condition(spec: ConvolutionSpec, k: int) -> bool:
    return tail_difference_gcd(spec, k) == 1


@dataclass(frozen=True)
class WindowCertificate:
    ok: bool
    mass_lower: Fraction
    translates_checked: tuple[int, ...]
    blocking: tuple[tuple[int, Fraction], ...]
    reason: str

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "mass_lower": frac_str(self.mass_lower),
            "translates_checked": list(self.translates_checked),
            "blocking": [[k, frac_str(x)] for k, x in self.blocking],
            "reason": self.reason,
        }


def translate_disjoint_window(approx: AtomicMeasure,
                              tail_interval: tuple[Fraction, Fraction],
                              window: tuple[Rational, Rational]
                              ) -> WindowCertificate:
    """Certify positive mass in an open window whose translates are null.

    The atoms plus the exact tail interval give a closed cover of the
    limit support.  The certificate holds when some atoms sit with their
    whole cover inside the window while no atom's cover meets any integer
    translate of the window.  Boundary contact with an open translate
    does not block, which is what makes exactly-touching supports pass.
    """
    a = Fraction(window[0])
    b = Fraction(window[1])
    if not a < b:
        raise ValueError("window must be a nonempty open interval")
    lo_t, hi_t = Fraction(tail_interval[0]), Fraction(tail_interval[1])
    if lo_t > hi_t:
        raise ValueError("tail interval is inverted")
    positions = approx.positions()
    hull_lo = positions[0] + lo_t
    hull_hi = positions[-1] + hi_t
    k_lo = math.floor(hull_lo - b) + 1
    k_hi = math.ceil(hull_hi - a) - 1
    checked = []
    blocking: list[tuple[int, Fraction]] = []
    for k in range(k_lo, k_hi + 1):
        if k == 0:
            continue
        checked.append(k)
        # atoms whose closed cover [x+lo_t, x+hi_t] meets (a+k, b+k)
        left = bisect_right(positions, a + k - hi_t)
        right = bisect_left(positions, b + k - lo_t)
        for i in range(left, right):
            x = positions[i]
            if x + hi_t > a + k and x + lo_t < b + k:
                if len(blocking) < 8:
                    blocking.append((k, x))
    mass = Fraction(0)
    for x, w in approx.atoms:
        if x + lo_t > a and x + hi_t < b:
            mass += w
    if blocking:
        reason = ("support cover reaches translate(s) %s of the window"
                  % ", ".join(sorted({"%+d" % k for k, _ in blocking})))
        return WindowCertificate(False, mass, tuple(checked),
                                 tuple(blocking), reason)
    if mass == 0:
        return WindowCertificate(
            False, mass, tuple(checked), (),
            "no atom's cover fits strictly inside the window; the mass "
            "lower bound is 0")
    return WindowCertificate(
        True, mass, tuple(checked), (),
        "mass at least %s inside the window; all %d intersecting integer "
        "translates miss the support cover"
        % (frac_str(mass), len(checked)))


@dataclass(frozen=True)
class EquiPositivityCertificate:
    epsilon: float
    delta: float
    assignments: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "assignments": [
                [frac_str(x), list(ks)] for x, ks in self.assignments],
        }


@dataclass(frozen=True)
class EquiPositivityFailure:
    worst_x: Fraction
    worst_tail: int
    best_lower: float
    reason: str


def _tail_ft_lower(tail, xi: Fraction) -> float:
    """Certified lower bound on |transform| at xi for one family member."""
    if isinstance(tail, AtomicMeasure):
        value = tail.ft_interval(xi)
    else:
        value = tail.ft_infinite(xi, tol=1e-9)
    if isinstance(value, ComplexInterval):
        return value.abs_lower()
    return abs(value)


def equi_positive_check(tails: Sequence, x_grid: Sequence[Rational],
                        y_grid: Sequence[Rational],
                        k_window: Sequence[int]):
    """Grid search for a uniform transform lower bound across a family.

    For each grid point x and family member, picks the integer shift k in
    the window maximizing the minimum certified |transform(x + y + k)|
    over the y grid, with k forced to 0 at x = 0.  Ties prefer smaller
    |k|, then the smaller k.  Success needs one positive bound uniform in
    (x, member); failure pinpoints the worst pair and is only a grid
    statement, not a disproof.
    """
    if not tails:
        raise ValueError("need at least one family member")
    xs = sorted({Fraction(x) % 1 for x in x_grid})
    ys = sorted(Fraction(y) for y in y_grid)
    ks = sorted(set(int(k) for k in k_window), key=lambda k: (abs(k), k))
    if not xs or not ys or not ks:
        raise ValueError("grids must be nonempty")
    delta = float(max(abs(ys[0]), abs(ys[-1])))
    epsilon = math.inf
    worst: Optional[tuple[Fraction, int, float]] = None
    assignments = []
    for x in xs:
        row = []
        for idx, tail in enumerate(tails):
            candidates = [0] if x == 0 else ks
            best_k = candidates[0]
            best_val = -1.0
            for k in candidates:
                low = min(_tail_ft_lower(tail, x + y + k) for y in ys)
                if low > best_val:
                    best_val = low
                    best_k = k
            row.append(best_k)
            if best_val < epsilon:
                epsilon = best_val
                worst = (x, idx, best_val)
        assignments.append((x, tuple(row)))
    if epsilon > 0:
        return EquiPositivityCertificate(float(epsilon), delta,
                                         tuple(assignments))
    x, idx, val = worst
    return EquiPositivityFailure(
        x, idx, val,
        "no shift in the window keeps member %d bounded away from zero "
        "near x = %s" % (idx, frac_str(x)))


SPECTRAL = "Spectral"
NOT_SPECTRAL = "NotSpectral"


def classify_special(t: int, base: int, step: int, word: SymbolicWord,
                     consecutive_letter: int = 1,
                     scaled_letter: int = 2) -> str:
    """Exact spectrality classification for the two-letter family.

    The consecutive letter stands for the digit set {0..base-1}, the
    scaled letter for its step-scaled copy; both live at scale t*base
    with gcd(base, step) = 1.  For stretch t >= 2 every word gives a
    spectral measure.  For t = 1 the measure is spectral exactly when
    the word is constant on the scaled letter or uses the consecutive
    letter infinitely often; otherwise the limit is a piecewise density
    that fails to be uniform on its support.
    """
    if t < 1 or base < 2 or step < 2:
        raise ValueError("need stretch >= 1 and base, step >= 2")
    if gcd(base, step) != 1:
        raise ValueError("base and step must be coprime")
    if t >= 2:
        return SPECTRAL
    if word.is_constant(scaled_letter):
        return SPECTRAL
    if word.occurs_infinitely(consecutive_letter):
        return SPECTRAL
    return NOT_SPECTRAL


@dataclass(frozen=True)
class VerdictBudget:
    run_q: bool = True
    depth: int = 12
    grid: int = 64
    horizon: int = 64
    tol: float = 1e-6
    budget_atoms: int = 16384
    threads: Optional[int] = None
    window: Optional[tuple[Rational, Rational]] = None
    q_min: float = 1.0 - 1e-3
    radius_max: float = 1e-6


@dataclass(frozen=True)
class SpectralReport:
    verdict: str
    reason: str
    trace: tuple[str, ...]
    details: dict = field(default_factory=dict)
    q_report: Optional[QReport] = None
    iz: Optional[IZVerdict] = None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "reason": self.reason,
            "trace": list(self.trace),
            "details": self.details,
        }
        if self.q_report is not None:
            out["q_report"] = self.q_report.to_json()
        if self.iz is not None:
            out["iz"] = self.iz.to_json()
        return out


def _divided_pair_admissible(scale: int, digits: tuple[int, ...]) -> bool:
    if abs(scale) > FIND_SPECTRA_SCALE_LIMIT:
        return False
    return len(find_spectra(scale, digits)) > 0


def _admissibility_gap(spec: ConvolutionSpec) -> Optional[str]:
    """Reason string when some occurring pair is not known admissible.

    Every certified branch below leans on the levels being admissible,
    so a pair without a chosen spectrum and without any found by search
    blocks certification outright.
    """
    for letter in sorted(spec.word.occurring_letters()):
        pair = spec.alphabet[letter - 1]
        if pair.spectrum is not None:
            continue
        if not _divided_pair_admissible(pair.scale, pair.digits):
            return ("pair (%d, %s) has no known spectrum; admissibility "
                    "is open" % (pair.scale, list(pair.digits)))
    return None


def _gcd_branch(spec: ConvolutionSpec) -> Optional[tuple[int, str]]:
    """Certified branch from the digit difference gcds.

    Fires when the gcd over letters that recur equals the gcd over all
    letters that occur.  Anchoring each letter at 0 shifts the measure by
    a convergent constant, and dividing all digits by the common gcd d
    keeps every level admissible with the same unitary matrix (spectrum
    d L), so the measure is affinely equivalent to one whose tails all
    have difference gcd 1.  The cyclic limit of that measure's shifted
    tails then has empty integral periodic zero set, which certifies
    spectrality, and affine maps carry it back.
    """
    d_tail = _letter_difference_gcd(
        spec, sorted(spec.word.recurring_letters()))
    if d_tail == 0:
        return None
    d_all = _letter_difference_gcd(
        spec, sorted(spec.word.occurring_letters()))
    if d_all != d_tail:
        return None
    if d_tail == 1:
        return 1, "digit differences of every tail already have gcd 1"
    return d_tail, (
        "digit differences have gcd %d at every position; anchoring and "
        "dividing by %d reduces to the gcd 1 case" % (d_tail, d_tail))


def _limit_exponents(rule):
    from .convolution import (ConstantExponents, ExplicitExponents,
                              PeriodicExponents)
    if isinstance(rule, ExplicitExponents):
        return ConstantExponents(rule.then)
    if isinstance(rule, (ConstantExponents, PeriodicExponents)):
        return rule
    raise ValueError("exponent rule has no bounded limit")


def _limit_tail_spec(spec: ConvolutionSpec) -> tuple[ConvolutionSpec, str]:
    """A weak limit of the shifted tail convolutions, as a concrete spec.

    For a periodic tail the limit is literally the tail itself.  For
    sampled or enumerated tails, every finite pattern over the recurring
    letters keeps reappearing, so shifts accumulate on the periodic cycle
    of those letters; that cycle is the representative limit used here.
    """
    tail_rule = spec.word.tail
    if isinstance(tail_rule, PeriodicTail):
        limit = spec.tail(len(spec.word.prefix))
        word = SymbolicWord((), limit.word.tail)
        note = "limit tail = periodic tail beyond the prefix"
    else:
        pattern = tuple(sorted(spec.word.recurring_letters()))
        word = SymbolicWord((), PeriodicTail(pattern))
        note = ("limit tail = cycle over recurring letters %s"
                % (pattern,))
    limit_spec = ConvolutionSpec(spec.alphabet, word,
                                 _limit_exponents(spec.exponents))
    return limit_spec, note


def _sparse_window_verdict(spec: SparseInsertionSpec,
                           budget: VerdictBudget) -> SpectralReport:
    trace = ["insertion positions follow the triangular numbers; the "
             "shifted tails converge to a two-part limit measure"]
    depth = max(2, min(budget.depth, 6))
    approx, tail_iv = spec.limit_approximation(depth)
    if budget.window is not None:
        window = (Fraction(budget.window[0]), Fraction(budget.window[1]))
    else:
        window = (spec.target - Fraction(1, 5),
                  Fraction(math.ceil(spec.target)))
    cert = translate_disjoint_window(approx, tail_iv, window)
    trace.append("window (%s, %s) at depth %d: %s"
                 % (frac_str(window[0]), frac_str(window[1]), depth,
                    cert.reason))
    details = {
        "window": [frac_str(window[0]), frac_str(window[1])],
        "depth": depth,
        "certificate": cert.to_json(),
    }
    if cert.ok:
        return SpectralReport(
            "SpectralCertified", "window-disjoint-translates",
            tuple(trace), details)
    return SpectralReport(
        "Inconclusive",
        "window-certificate-failed", tuple(trace), details)


def spectral_verdict(spec, budget: Optional[VerdictBudget] = None
                     ) -> SpectralReport:
    """Run the verdict pipeline: exact branches first, numerics last.

    Certified verdicts only come from exact arguments (the two-letter
    family classifier, unbounded exponents collapsing the tails, the
    difference-gcd reduction, an empty periodic zero set, or a window
    certificate).  Grid evidence can at most report SpectralEvidence.
    """
    if budget is None:
        budget = VerdictBudget()
    if isinstance(spec, SparseInsertionSpec):
        return _sparse_window_verdict(spec, budget)
    if not isinstance(spec, ConvolutionSpec):
        raise TypeError("expected a ConvolutionSpec or SparseInsertionSpec")
    trace = []

    family = detect_special(spec)
    if family is not None:
        outcome = classify_special(family.stretch, family.base, family.step,
                                   spec.word, family.consecutive_letter,
                                   family.scaled_letter)
        trace.append("two-letter family detected: stretch %d, base %d, "
                     "step %d; classifier says %s"
                     % (family.stretch, family.base, family.step, outcome))
        verdict = ("SpectralCertified" if outcome == SPECTRAL
                   else "NotSpectralCertified")
        return SpectralReport(verdict, "special-family-classifier",
                              tuple(trace),
                              {"family": {
                                  "stretch": family.stretch,
                                  "base": family.base,
                                  "step": family.step}})
    trace.append("no two-letter special family structure")

    gap = _admissibility_gap(spec)
    if gap is not None:
        trace.append(gap)
        return SpectralReport("Inconclusive", "pair-admissibility-unknown",
                              tuple(trace))

    if not spec.exponents.bounded():
        trace.append("exponent sequence unbounded; shifted tails collapse "
                     "to the point mass at 0, whose zero set is empty")
        return SpectralReport("SpectralCertified",
                              "unbounded-exponent-tail-collapse",
                              tuple(trace))

    branch = _gcd_branch(spec)
    if branch is not None:
        d, note = branch
        trace.append(note)
        return SpectralReport("SpectralCertified", "tail-difference-gcd",
                              tuple(trace), {"difference_gcd": d})
    trace.append("difference-gcd reduction does not apply")

    limit_spec, note = _limit_tail_spec(spec)
    trace.append(note)
    iz = iz_weak_limit(limit_spec, budget.horizon)
    trace.append("zero set of the limit tail: %s (%s)" % (iz.kind, iz.reason))
    if iz.kind == EMPTY_CERTIFIED:
        return SpectralReport("SpectralCertified", "empty-periodic-zero-set",
                              tuple(trace), {}, None, iz)

    q_report = None
    if budget.run_q:
        try:
            grid = [Fraction(j, budget.grid) for j in range(budget.grid)]
            q_report = q_partial(spec, budget.depth, grid, tol=budget.tol,
                                 budget_atoms=budget.budget_atoms,
                                 threads=budget.threads)
            trace.append("grid Q at depth %d: min %.6f, max radius %.2e"
                         % (q_report.depth, q_report.min_q,
                            q_report.tail_radius))
            if (q_report.min_q >= budget.q_min
                    and q_report.tail_radius <= budget.radius_max):
                return SpectralReport("SpectralEvidence", "q-grid-evidence",
                                      tuple(trace), {}, q_report, iz)
        except ValueError as exc:
            trace.append("grid Q unavailable: %s" % exc)
    else:
        trace.append("grid Q skipped by budget")
    return SpectralReport("Inconclusive", "budget-exhausted", tuple(trace),
                          {}, q_report, iz)
