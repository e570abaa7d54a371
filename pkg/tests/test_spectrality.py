"""Spectrality machinery: candidate spectra, the discrete quadratic
functional, integer-zero verdicts, windows, and the top-level verdict."""

from fractions import Fraction

import pytest

from conftest import constant_word, frac_grid, single_pair_spec
from spectralconv.catalog import (
    mixed_word_spec,
    scale4_spec,
    two_letter_family_spec,
)
from spectralconv.convolution import (
    ConstantExponents,
    ConvolutionSpec,
    UnboundedExponents,
)
from spectralconv.hadamard import AdmissiblePair, find_spectra
from spectralconv.measures import AtomicMeasure
from spectralconv.spectrality import (
    EquiPositivityCertificate,
    EquiPositivityFailure,
    VerdictBudget,
    candidate_spectrum,
    classify_special,
    equi_positive_check,
    gcd_condition,
    iz_finite,
    iz_weak_limit,
    q_exact_discrete,
    q_partial,
    spectral_verdict,
    tail_difference_gcd,
    translate_disjoint_window,
)
from spectralconv.words import PeriodicTail, SymbolicWord, splitmix64


def one_then_twos():
    return SymbolicWord((1,), PeriodicTail((2,)))


# ---------------------------------------------------------------------------
# candidate spectra

def test_candidate_spectrum_of_the_quarter_spec(jp):
    lam = candidate_spectrum(jp, 2)
    assert lam.elements == (0, 1, 4, 5)
    assert 5 in lam and 2 not in lam


def test_candidate_spectra_nest(jp, mixed17):
    for spec in (jp, mixed17):
        prev: frozenset = frozenset()
        for n in range(1, 7):
            cur = frozenset(candidate_spectrum(spec, n).elements)
            assert prev <= cur
            prev = cur


def test_candidate_spectrum_counts_match_level_sizes(mixed17):
    lam = candidate_spectrum(mixed17, 5)
    assert len(lam.elements) == 2 ** 5


def test_candidate_spectrum_needs_admissible_pairs():
    spec = ConvolutionSpec((AdmissiblePair(3, (0, 2), None),),
                           constant_word(1), ConstantExponents(1))
    with pytest.raises(ValueError):
        candidate_spectrum(spec, 2)


# ---------------------------------------------------------------------------
# the discrete quadratic functional

def test_exact_functional_is_one_for_admissible_pairs():
    assert abs(q_exact_discrete(4, (0, 2), (0, 1), Fraction(1, 3)) - 1) < 1e-10
    assert abs(q_exact_discrete(4, (0, 2), (0, 1), 0.37) - 1) < 1e-10
    assert abs(q_exact_discrete(2, (0, 3), (0, 1), Fraction(5, 7)) - 1) < 1e-10


def test_exact_functional_sees_through_digit_scaling():
    """Doubling the digits and halving the spectrum rescales xi."""
    for seed in range(12):
        num = splitmix64(60, seed) % 97
        xi = Fraction(num, 97)
        a = q_exact_discrete(4, (0, 2), (0, 1), xi)
        b = q_exact_discrete(4, (0, 1), (0, 2), 2 * xi)
        assert abs(a - b) < 1e-10


def test_partial_functional_on_the_quarter_spec(jp):
    r8 = q_partial(jp, 8, frac_grid(16))
    assert abs(r8.min_q - 0.9998999773522198) < 1e-9
    assert r8.tail_radius < 1e-9
    assert r8.max_q <= 1 + 1e-9
    r12 = q_partial(jp, 12, frac_grid(16))
    assert abs(r12.min_q - 0.9999993428158269) < 1e-9
    assert r12.min_q >= r8.min_q - 1e-9


def test_partial_functional_empty_grid(jp):
    r = q_partial(jp, 4, [])
    assert r.q_values == () and r.min_q == 0.0


def test_partial_functional_prunes_soundly_under_a_tight_budget(jp):
    """Pruned mass widens the enclosure instead of biasing the value."""
    full = q_partial(jp, 10, frac_grid(8))
    tight = q_partial(jp, 10, frac_grid(8), budget_atoms=64)
    for qf, rf, qt, rt in zip(full.q_values, full.radii,
                              tight.q_values, tight.radii):
        assert abs(qf - qt) <= rf + rt + 1e-12
        assert rt >= rf - 1e-12


def test_q_report_serializes(jp):
    r = q_partial(jp, 6, frac_grid(8))
    data = r.to_json()
    assert data["depth"] == 6
    assert len(data["q_values"]) == len(data["grid"]) == 8
    assert data["min_q"] == r.min_q


# ---------------------------------------------------------------------------
# integer zeros of finite measures

def test_two_atom_uniform_has_the_half_integer_zero():
    v = iz_finite(AtomicMeasure.uniform((0, 1)))
    assert v.kind == "nonempty-witness"
    assert v.witness == Fraction(1, 2)


def test_three_atom_uniform_has_no_integer_zero():
    v = iz_finite(AtomicMeasure.uniform((Fraction(0), Fraction(1, 3), Fraction(2, 3))))
    assert v.kind == "empty-certified"


def test_point_mass_never_vanishes():
    assert iz_finite(AtomicMeasure.point(Fraction(3, 7))).kind == "empty-certified"


def test_unbalanced_two_atom_measure_never_vanishes():
    m = AtomicMeasure(((Fraction(0), Fraction(1, 3)),
                       (Fraction(1), Fraction(2, 3))))
    assert iz_finite(m).kind == "empty-certified"


def test_non_cyclotomic_roots_leave_the_question_open():
    """Weights (8,8,17,8,8)/49 at j/5: the support polynomial keeps
    unit-circle roots at irrational angles, so the zero set cannot be
    settled by rational phase checks alone."""
    w = [Fraction(8, 49), Fraction(8, 49), Fraction(17, 49),
         Fraction(8, 49), Fraction(8, 49)]
    m = AtomicMeasure(tuple((Fraction(j, 5), w[j]) for j in range(5)))
    v = iz_finite(m)
    assert v.kind == "undecided"
    assert v.reason.startswith(
        "support polynomial keeps non-cyclotomic unit-circle roots")


def test_exhaustive_two_atom_sweep_finds_one_zero_pattern():
    hits = []
    for p in range(1, 7):
        for a in range(p):
            for b in range(a + 1, p + 1):
                v = iz_finite(AtomicMeasure.uniform((Fraction(a, p), Fraction(b, p))))
                if v.kind == "nonempty-witness":
                    hits.append((Fraction(a, p), Fraction(b, p), v.witness))
    # only unit spacing survives: consecutive translates of any other
    # candidate land on phases of opposite parity
    assert set(hits) == {(Fraction(0), Fraction(1), Fraction(1, 2))}


# ---------------------------------------------------------------------------
# integer zeros of weak limits

def test_mixed_word_limit_has_no_integer_zeros(mixed17):
    v = iz_weak_limit(mixed17, horizon=64)
    assert v.kind == "empty-certified"
    assert "2/3 dies at translate +1" in v.reason


def test_pure_scaled_word_is_only_horizon_clear():
    spec = ConvolutionSpec(
        (AdmissiblePair(2, (0, 1), (0, 1)), AdmissiblePair(2, (0, 3), (0, 1))),
        constant_word(2), ConstantExponents(1))
    v = iz_weak_limit(spec, horizon=64)
    assert v.kind == "empty-up-to-horizon"
    assert v.reason.startswith("candidates 1/3, 2/3 survive every translate check")


def test_witness_spec_has_a_certified_integer_zero():
    spec = ConvolutionSpec(
        (AdmissiblePair(4, (0, 4), None),
         AdmissiblePair(4, (0, 1, 2, 3), (0, 1, 2, 3))),
        one_then_twos(), ConstantExponents(1))
    v = iz_weak_limit(spec, horizon=64)
    assert v.kind == "nonempty-witness"
    assert v.witness == Fraction(1, 2)
    assert v.reason == ("all translates of 1/2 are zeros: "
                        "levels 1 cover residues 0..3 modulo 4")


def test_finite_measure_dispatch(mixed17):
    v = iz_weak_limit(AtomicMeasure.uniform((0, 1)))
    assert v.kind == "nonempty-witness" and v.witness == Fraction(1, 2)


# ---------------------------------------------------------------------------
# digit difference gcds

def test_tail_gcd_of_the_quarter_spec(jp):
    assert tail_difference_gcd(jp, 1) == 2
    assert tail_difference_gcd(jp, 5) == 2
    assert not gcd_condition(jp, 1)


def test_tail_gcd_of_the_mixed_word(mixed17):
    assert tail_difference_gcd(mixed17, 1) == 1
    assert tail_difference_gcd(mixed17, 2) == 3
    assert gcd_condition(mixed17, 1)
    assert not gcd_condition(mixed17, 2)


# ---------------------------------------------------------------------------
# window certificates

def _two_atom_approx():
    return AtomicMeasure(((Fraction(0), Fraction(1, 3)),
                          (Fraction(7, 10), Fraction(2, 3))))


def test_window_certificate_accepts_a_clear_window():
    cert = translate_disjoint_window(
        _two_atom_approx(), (Fraction(0), Fraction(1, 20)),
        (Fraction(-1, 10), Fraction(1, 10)))
    assert cert.ok
    assert cert.mass_lower == Fraction(1, 3)
    assert cert.blocking == ()
    assert cert.reason.startswith("mass at least 1/3 inside the window")


def test_window_certificate_rejects_an_overlapping_window():
    cert = translate_disjoint_window(
        _two_atom_approx(), (Fraction(0), Fraction(1, 20)),
        (Fraction(-1, 2), Fraction(1, 2)))
    assert not cert.ok
    assert cert.blocking == ((1, Fraction(7, 10)),)
    assert "translate(s) +1" in cert.reason


def test_window_certificate_serializes():
    cert = translate_disjoint_window(
        _two_atom_approx(), (Fraction(0), Fraction(1, 20)),
        (Fraction(-1, 10), Fraction(1, 10)))
    data = cert.to_json()
    assert data["ok"] is True
    assert data["mass_lower"] == "1/3"


# ---------------------------------------------------------------------------
# equi-positivity of shifted transforms

def test_equi_positivity_fails_without_usable_shifts():
    members = [AtomicMeasure.uniform((0, 1))]
    res = equi_positive_check(members, frac_grid(16),
                              [Fraction(k, 64) for k in range(-4, 5)],
                              range(-3, 4))
    assert isinstance(res, EquiPositivityFailure)
    assert res.worst_x == Fraction(7, 16)
    assert res.best_lower == 0.0


def test_equi_positivity_holds_for_quarter_spec_tails(jp):
    tails = [jp.tail(k) for k in range(3)]
    res = equi_positive_check(tails, frac_grid(16),
                              [Fraction(k, 64) for k in range(-4, 5)],
                              range(-3, 4))
    assert isinstance(res, EquiPositivityCertificate)
    assert res.epsilon == pytest.approx(0.6179724705571884)
    assert res.delta == Fraction(1, 16)
    assert len(res.assignments) == 16
    assert res.assignments[0] == (Fraction(0), (0, 0, 0))


def test_equi_positivity_rejects_empty_grids(jp):
    with pytest.raises(ValueError):
        equi_positive_check([jp.tail(0)], [], [0], range(-1, 2))
    with pytest.raises(ValueError):
        equi_positive_check([], frac_grid(4), [0], range(-1, 2))


# ---------------------------------------------------------------------------
# the two-letter family classifier

def test_classifier_on_the_known_grid():
    for t in (1, 2):
        for word, expected in (
                (constant_word(1), "Spectral"),
                (constant_word(2), "Spectral"),
                (one_then_twos(), "NotSpectral" if t == 1 else "Spectral"),
                (SymbolicWord((), PeriodicTail((1, 2))), "Spectral")):
            assert classify_special(t, 2, 3, word) == expected


def test_classifier_with_swapped_letter_roles():
    word = SymbolicWord((2,), PeriodicTail((1,)))
    assert classify_special(1, 2, 3, word,
                            consecutive_letter=2, scaled_letter=1) == "NotSpectral"


# ---------------------------------------------------------------------------
# the top-level verdict

def test_verdict_mixed_word_is_not_spectral(mixed17):
    rep = spectral_verdict(mixed17)
    assert rep.verdict == "NotSpectralCertified"
    assert rep.reason == "special-family-classifier"
    assert rep.details["family"] == {"stretch": 1, "base": 2, "step": 3}


def test_verdict_quarter_spec_reduces_by_gcd(jp):
    rep = spectral_verdict(jp)
    assert rep.verdict == "SpectralCertified"
    assert rep.reason == "tail-difference-gcd"
    assert rep.details["difference_gcd"] == 2
    assert rep.trace == (
        "no two-letter special family structure",
        "digit differences have gcd 2 at every position; anchoring and "
        "dividing by 2 reduces to the gcd 1 case")


def test_verdict_stretched_family_is_spectral():
    rep = spectral_verdict(two_letter_family_spec(2, 2, 3, constant_word(2)))
    assert rep.verdict == "SpectralCertified"
    assert rep.reason == "special-family-classifier"


def test_verdict_unbounded_exponents_collapse_the_tail(jp):
    spec = ConvolutionSpec(jp.alphabet, jp.word, UnboundedExponents())
    rep = spectral_verdict(spec)
    assert rep.verdict == "SpectralCertified"
    assert rep.reason == "unbounded-exponent-tail-collapse"


def test_verdict_without_spectra_is_inconclusive():
    assert find_spectra(5, (0, 3)) == ()
    rep = spectral_verdict(single_pair_spec(5, (0, 3)))
    assert rep.verdict == "Inconclusive"
    assert rep.reason == "pair-admissibility-unknown"


def test_verdict_from_empty_periodic_zero_set():
    spec = ConvolutionSpec(
        (AdmissiblePair(4, (0, 1), (0, 2)), AdmissiblePair(4, (0, 2), (0, 1))),
        one_then_twos(), ConstantExponents(1))
    rep = spectral_verdict(spec)
    assert rep.verdict == "SpectralCertified"
    assert rep.reason == "empty-periodic-zero-set"


def test_verdict_anchors_digits_before_the_gcd():
    rep = spectral_verdict(single_pair_spec(4, (1, 3)))
    assert rep.verdict == "SpectralCertified"
    assert rep.reason == "tail-difference-gcd"
    assert rep.details["difference_gcd"] == 2


def test_verdict_budget_exhaustion_keeps_the_evidence():
    spec = ConvolutionSpec(
        (AdmissiblePair(-2, (0, 1), (0, 1)), AdmissiblePair(2, (0, 3), (0, 1))),
        one_then_twos(), ConstantExponents(1))
    rep = spectral_verdict(spec)
    assert rep.verdict == "Inconclusive"
    assert rep.reason == "budget-exhausted"
    assert rep.iz is not None and rep.iz.kind == "empty-up-to-horizon"
    assert rep.q_report is not None
    assert rep.q_report.min_q == pytest.approx(0.10558795811082669)


def test_verdict_budget_can_skip_the_grid():
    spec = ConvolutionSpec(
        (AdmissiblePair(-2, (0, 1), (0, 1)), AdmissiblePair(2, (0, 3), (0, 1))),
        one_then_twos(), ConstantExponents(1))
    rep = spectral_verdict(spec, VerdictBudget(run_q=False))
    assert rep.verdict == "Inconclusive"
    assert rep.q_report is None
    assert rep.trace[-1] == "grid Q skipped by budget"


def test_verdict_serializes_with_stable_keys(jp):
    data = spectral_verdict(jp).to_json()
    assert sorted(data) == ["details", "reason", "trace", "verdict"]
    assert data["verdict"] == "SpectralCertified"


def test_budget_defaults():
    b = VerdictBudget()
    assert b.run_q and b.depth == 12 and b.grid == 64
    assert b.horizon == 64 and b.q_min == 0.999
