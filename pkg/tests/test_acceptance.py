"""End-to-end acceptance checks.

Each test covers one numbered criterion; the conftest reporter prints a
one-line pass/fail summary per criterion at the end of the run.
Criterion 9 appears twice: once as the attainable decay predicate and
once as the literal strict-decrease reading, which cannot hold because
the overlap mass at shifts of size two is identically zero.  The second
test is marked xfail(strict=True) so a change in that behavior shows up
as an unexpected pass.
"""

import itertools
import math
import time
from fractions import Fraction

import pytest

from conftest import constant_word, frac_grid, single_pair_spec
from spectralconv.catalog import (
    EXIT_MATCH,
    run_example,
    scale4_spec,
)
from spectralconv.convolution import (
    ConstantExponents,
    ConvolutionSpec,
    density_consecutive,
    overlap_mass,
    zero_set_window,
)
from spectralconv.hadamard import (
    AdmissiblePair,
    digit_sum_vanishes,
    find_spectra,
    is_admissible,
)
from spectralconv.mask import mask_zero_set
from spectralconv.measures import AtomicMeasure
from spectralconv.spectrality import (
    iz_finite,
    iz_weak_limit,
    q_exact_discrete,
    q_partial,
)
from spectralconv.words import monte_carlo_spectrality, splitmix64


def test_criterion_01_spectrum_search_with_exact_certificates():
    started = time.perf_counter()
    assert find_spectra(3, (0, 2)) == ()
    # no difference of two residues can make the digit sum vanish, so no
    # two-element integer spectrum exists at scale 3
    assert not any(digit_sum_vanishes(3, (0, 2), d) for d in (1, 2))

    found = find_spectra(4, (0, 2))
    assert found == ((0, 1), (0, 3))
    for spectrum in found:
        assert is_admissible(4, (0, 2), spectrum)
        for a, b in itertools.combinations(spectrum, 2):
            assert digit_sum_vanishes(4, (0, 2), b - a)
        assert AdmissiblePair(4, (0, 2), spectrum).unitarity_residual() < 1e-10
    assert time.perf_counter() - started < 1.0


def _admissible_pool():
    pool = []
    for modulus in range(2, 13):
        for scale in (modulus, -modulus):
            nonzero = [d for d in range(1, 2 * modulus)]
            for size in (2, 3, 4):
                for rest in itertools.combinations(nonzero, size - 1):
                    digits = (0,) + rest
                    spectra = find_spectra(scale, digits)
                    if spectra:
                        pool.append((scale, digits, spectra[0]))
    return pool


def test_criterion_02_exact_q_is_one_for_admissible_triples():
    pool = _admissible_pool()
    assert len(pool) >= 50
    chosen = set()
    draw = 0
    while len(chosen) < 50:
        chosen.add(splitmix64(2026, draw) % len(pool))
        draw += 1
    for index in sorted(chosen):
        scale, digits, spectrum = pool[index]
        for j in range(100):
            xi = Fraction(splitmix64(index, j) % (1 << 24), 1 << 24) * 16 - 8
            assert abs(q_exact_discrete(scale, digits, spectrum, xi) - 1) \
                < 1e-10


def test_criterion_03_partial_q_is_monotone_and_bounded():
    started = time.perf_counter()
    grid = frac_grid(128)
    jp = scale4_spec()
    base3 = ConvolutionSpec(
        (AdmissiblePair(6, (0, 1, 2), (0, 2, 4)),),
        constant_word(1), ConstantExponents(1))
    runs = ((jp, tuple(range(1, 13))), (base3, (2, 4, 6, 8, 10, 12)))
    for spec, depths in runs:
        previous = None
        for n in depths:
            report = q_partial(spec, n, grid)
            for q, r in zip(report.q_values, report.radii):
                assert q <= 1 + 2 * r + 1e-9
            if previous is not None:
                for q, r, q0, r0 in zip(report.q_values, report.radii,
                                        previous.q_values, previous.radii):
                    assert q >= q0 - r - r0 - 1e-9
            previous = report
            if spec is jp and n == 12:
                assert report.min_q >= 0.99
    assert time.perf_counter() - started < 30.0


def test_criterion_04_consecutive_digit_zero_sets_are_punctured_lattices():
    for base, stretch in [(n, 1) for n in range(2, 13)] + \
            [(2, 3), (3, 2), (4, 3)]:
        digits = tuple(stretch * d for d in range(base))
        zeros = mask_zero_set(digits).rational
        assert not zeros.contains(Fraction(0))
        denominator = stretch * base
        expected = [Fraction(k, denominator)
                    for k in range(-2 * denominator, 2 * denominator + 1)
                    if k % base != 0]
        assert zeros.members_in(-2, 2) == expected
        for x in expected:
            assert zeros.contains(x)
        assert not zeros.contains(Fraction(1, denominator + 1))


def test_criterion_05_two_atom_integer_zero_classification():
    v = iz_finite(AtomicMeasure.uniform((0, 1)))
    assert v.kind == "nonempty-witness" and v.witness == Fraction(1, 2)
    assert iz_finite(AtomicMeasure.uniform(
        (Fraction(0), Fraction(1, 3), Fraction(2, 3)))).kind == "empty-certified"
    hits = []
    for p in range(1, 7):
        for a in range(p):
            for b in range(a + 1, p + 1):
                verdict = iz_finite(AtomicMeasure.uniform(
                    (Fraction(a, p), Fraction(b, p))))
                if verdict.kind == "nonempty-witness":
                    hits.append((Fraction(a, p), Fraction(b, p),
                                 verdict.witness))
    assert set(hits) == {(Fraction(0), Fraction(1), Fraction(1, 2))}


def test_criterion_06_mixed_word_limit_zero_sets(mixed17):
    verdict = iz_weak_limit(mixed17, horizon=64)
    assert verdict.kind == "empty-certified"
    window = zero_set_window(mixed17, 0, 4)
    assert window
    for x in window:
        assert x != 0
        in_integers = x.denominator == 1
        scaled = 3 * x
        in_even_thirds = scaled.denominator == 1 and scaled.numerator % 2 == 0
        assert in_integers or in_even_thirds


def test_criterion_07_two_letter_family_verdict_grid():
    payload, code = run_example("theorem-1.6-grid")
    assert code == EXIT_MATCH
    cells = payload["cells"]
    assert len(cells) == 8
    for cell in cells:
        assert cell["match"]
        expect_not = cell["stretch"] == 1 and cell["word"] == "one-then-2"
        wanted = "NotSpectralCertified" if expect_not else "SpectralCertified"
        assert cell["verdict"] == wanted


def test_criterion_08_mixed_word_density_profile(mixed17):
    d = density_consecutive(mixed17)
    assert d.breakpoints == (Fraction(0), Fraction(1), Fraction(3), Fraction(4))
    assert d.values == (Fraction(1, 6), Fraction(1, 3), Fraction(1, 6))
    assert not d.uniform_on_support


OVERLAP_SPEC_ARGS = (4, (0, 3), (0, 2))
OVERLAP_DEPTHS = (4, 8, 12)
OVERLAP_SHIFTS = (1, -1, 2, -2)
OVERLAP_CONSTANT = 0  # masses obey mass <= 2 ** (-depth + constant)


def test_criterion_09_overlap_mass_decays():
    spec = single_pair_spec(*OVERLAP_SPEC_ARGS)
    for shift in OVERLAP_SHIFTS:
        masses = [overlap_mass(spec, shift, q) for q in OVERLAP_DEPTHS]
        for q, mass in zip(OVERLAP_DEPTHS, masses):
            assert mass <= Fraction(1, 2 ** (q - OVERLAP_CONSTANT))
        for earlier, later in zip(masses, masses[1:]):
            assert later <= earlier
            if earlier > 0:
                assert later < earlier


@pytest.mark.xfail(strict=True, reason="overlap mass at shifts of size two "
                   "is identically zero, so no strict decrease is possible")
def test_criterion_09_overlap_mass_strictly_decreases():
    spec = single_pair_spec(*OVERLAP_SPEC_ARGS)
    for shift in OVERLAP_SHIFTS:
        masses = [overlap_mass(spec, shift, q) for q in OVERLAP_DEPTHS]
        for earlier, later in zip(masses, masses[1:]):
            assert later < earlier


def test_criterion_10_random_word_spectrality_at_desk_scale():
    started = time.perf_counter()
    alphabet = (AdmissiblePair(2, (0, 1), (0, 1)),
                AdmissiblePair(2, (0, 3), (0, 1)))
    summary = monte_carlo_spectrality(
        alphabet, (Fraction(1, 2), Fraction(1, 2)),
        trials=1000, length=64, seed=2026, pattern=(1, 2))
    assert summary.verdict_counts == {"SpectralCertified": 1000}
    positions = 1000 * 63
    sigma = math.sqrt((1 / 4) * (3 / 4) / positions)
    assert abs(float(summary.pattern_freq) - 1 / 4) < 4 * sigma
    assert time.perf_counter() - started < 60.0


def test_criterion_11_insertion_examples_take_the_window_branch():
    for example_id in ("example-7.1", "example-7.2"):
        payload, code = run_example(example_id)
        assert code == EXIT_MATCH
        report = payload["report"]
        assert report["verdict"] == "SpectralCertified"
        assert report["reason"] == "window-disjoint-translates"
    payload, _ = run_example("example-7.1")
    cert = payload["report"]["details"]["certificate"]
    assert Fraction(cert["mass_lower"]) >= Fraction(3, 10)
