"""Seeded suites, the affine trichotomy checker, and witness construction."""

from fractions import Fraction

import pytest

from logcouple import gamma, harness
from logcouple.gamma import INF, ZERO, GammaElement, unit
from logcouple.harness import (
    AffineMap,
    ConstInf,
    ConstPsi,
    NotApplicable,
    Projection,
    SamplerConfig,
    classify_affine_image,
    make_witness,
    run_axiom_suite,
    run_suite,
    suite_names,
)


def ones(n):
    return GammaElement((i, 1) for i in range(n))


def psi(level):
    return gamma.psi_element(level)


SMALL = SamplerConfig(seed=0, trials=300)


# --- suites pass and are reproducible ----------------------------------------------


@pytest.mark.parametrize("name", suite_names())
def test_suites_pass_at_small_trials(name):
    report = run_suite(name, SMALL)
    assert report.passed, report.to_text()
    assert report.trials == 300
    assert report.counters  # nontrivial strata recorded


def test_suite_names_are_the_cli_tokens():
    assert suite_names() == ("axioms", "successor", "lemma41", "lemma44", "subspace-growth")
    with pytest.raises(ValueError):
        run_suite("nosuch", SMALL)


def test_zero_trials_vacuous_pass():
    report = run_suite("axioms", SamplerConfig(seed=3, trials=0))
    assert report.passed and report.trials == 0 and not report.counters


def test_reports_are_byte_reproducible():
    first = run_suite("successor", SamplerConfig(seed=11, trials=150))
    second = run_suite("successor", SamplerConfig(seed=11, trials=150))
    assert first == second
    assert first.to_text() == second.to_text()
    assert first.to_json_dict() == second.to_json_dict()


def test_seed_changes_the_stream():
    a = run_suite("axioms", SamplerConfig(seed=1, trials=50))
    b = run_suite("axioms", SamplerConfig(seed=2, trials=50))
    assert a.counters != b.counters or a.seed != b.seed


def test_corrupted_psi_fails_with_counterexamples():
    # negating psi breaks the gap law; the report must carry replayable text
    report = run_axiom_suite(
        SamplerConfig(seed=5, trials=120), psi_fn=lambda x: gamma.negate(gamma.psi(x))
    )
    assert not report.passed
    assert {f.check for f in report.failures} & {"psi_gap", "psi_antitone"}
    assert any(f.check == "psi_gap" for f in report.failures)
    bundle = report.failures[0]
    for _, text in bundle.inputs:
        gamma.parse_element(text)  # replayable through the element grammar
    assert report.failure_count >= len(report.failures)


def test_failure_recording_caps_but_counts():
    report = run_axiom_suite(
        SamplerConfig(seed=5, trials=500), psi_fn=lambda x: INF
    )
    assert not report.passed
    assert len(report.failures) <= 10
    assert report.failure_count > len(report.failures)


def test_growth_suite_counters_cover_strata_and_regimes():
    report = run_suite("subspace-growth", SamplerConfig(seed=4, trials=400))
    counters = dict(report.counters)
    assert counters["base_unit"] + counters["base_sparse"] + counters["base_psi"] == 400
    assert counters["growth_psi"] == 400
    assert counters["growth_s_slack"] == 400
    assert counters["growth_p_slack"] == 400
    assert counters["s_image_size"] == 400
    assert counters["unit_base_full_chain"] == counters["base_unit"]
    assert counters["psi_base_saturated"] == counters["base_psi"]
    # tight-regime checks ran on a healthy share of trials
    assert counters["growth_s"] >= 200
    assert counters["growth_p"] >= 100


# --- affine trichotomy -------------------------------------------------------------


def _family(*rows):
    return [tuple(row) for row in rows]


def test_classify_projection():
    table = _family(
        (psi(0), psi(9)),
        (psi(1), psi(12)),
        (psi(2), psi(15)),
        (psi(3), psi(17)),
    )
    mapping = AffineMap((Fraction(1), Fraction(0)), ZERO)
    assert classify_affine_image(mapping, table) == Projection(0)


def test_classify_const_psi():
    # second coordinate constant; map ignores the varying one
    table = _family(
        (psi(0), psi(5)),
        (psi(1), psi(5)),
        (psi(2), psi(5)),
    )
    mapping = AffineMap((Fraction(0), Fraction(1)), ZERO)
    assert classify_affine_image(mapping, table, min_hits=3) == ConstPsi(5)


def test_classify_const_inf():
    table = _family((psi(0),), (psi(1),), (psi(2),))
    mapping = AffineMap((Fraction(1),), INF)
    assert classify_affine_image(mapping, table, min_hits=3) == ConstInf()


def test_classify_affine_disguised_projection():
    # q = (1, 3): only the first coordinate survives extensionally when
    # the map misses the psi-set too often, so hits decide everything
    table = _family(
        (psi(1), psi(4)),
        (psi(2), psi(6)),
        (psi(3), psi(8)),
        (psi(5), psi(9)),
    )
    mapping = AffineMap((Fraction(1), Fraction(0)), ZERO)
    result = classify_affine_image(mapping, table)
    assert result == Projection(0)


def test_not_applicable_reasons():
    # too few rows for the arity
    table = _family((psi(0), psi(3)), (psi(1), psi(4)))
    mapping = AffineMap((Fraction(1), Fraction(0)), ZERO)
    result = classify_affine_image(mapping, table)
    assert isinstance(result, NotApplicable) and "hits" in result.reason

    # inf inside a nonconstant coordinate breaks genericity
    table = _family((psi(0),), (INF,), (psi(2),), (psi(3),))
    result = classify_affine_image(AffineMap((Fraction(1),), ZERO), table)
    assert isinstance(result, NotApplicable) and "inf" in result.reason

    # duplicated values in a nonconstant coordinate break genericity
    table = _family((psi(0),), (psi(1),), (psi(0),), (psi(3),))
    result = classify_affine_image(AffineMap((Fraction(1),), ZERO), table)
    assert isinstance(result, NotApplicable)

    # a map that misses the psi-set often enough is not applicable
    table = _family((psi(0),), (psi(1),), (psi(2),), (psi(4),))
    result = classify_affine_image(AffineMap((Fraction(2),), unit(3)), table)
    assert isinstance(result, NotApplicable)


def test_classify_validates_shapes():
    with pytest.raises(ValueError):
        classify_affine_image(AffineMap((Fraction(1),), ZERO), [])
    with pytest.raises(ValueError):
        classify_affine_image(
            AffineMap((Fraction(1),), ZERO), [(psi(0), psi(1))]
        )


def test_affine_map_evaluation_absorbs_inf():
    mapping = AffineMap((Fraction(1), Fraction(0)), ZERO)
    assert mapping.apply((INF, psi(0))) == INF
    assert mapping.apply((psi(0), INF)) == psi(0)  # zero coefficient ignores inf
    assert AffineMap((Fraction(1),), INF).apply((psi(0),)) == INF


def test_constant_coordinates_may_hold_inf_or_collide():
    # constant coordinate carries inf and collides with retained values;
    # genericity only constrains the nonconstant coordinates
    table = _family(
        (psi(0), INF),
        (psi(1), INF),
        (psi(2), INF),
        (psi(3), INF),
    )
    mapping = AffineMap((Fraction(1), Fraction(0)), ZERO)
    assert classify_affine_image(mapping, table) == Projection(0)


# --- witness construction ----------------------------------------------------------


def test_witness_small_epsilon():
    report = make_witness(unit(0), 3)
    assert report.alpha_level == 1
    assert report.alpha == ones(2)
    assert report.bound == gamma.scale(unit(2), 2)
    assert report.prefix == (unit(2), unit(2) + unit(3), unit(2) + unit(3) + unit(4))


def test_witness_deeper_epsilon():
    report = make_witness(gamma.scale(unit(5), 2), 2)
    assert report.alpha_level == 6
    assert report.bound == gamma.scale(unit(7), 2)
    for x in report.prefix:
        assert ZERO < x < report.bound < gamma.scale(unit(5), 2)


def test_witness_chain_properties():
    rng_levels = [0, 1, 2, 5, 9]
    for level in rng_levels:
        epsilon = gamma.scale(unit(level), Fraction(3, 7))
        report = make_witness(epsilon, 8)
        assert len(report.prefix) == 8
        previous = ZERO
        for x in report.prefix:
            assert previous < x < report.bound
            assert x < epsilon
            previous = x
        gaps = [
            report.prefix[i + 1] - report.prefix[i] for i in range(len(report.prefix) - 1)
        ]
        assert all(g > ZERO for g in gaps)


def test_witness_domain_errors():
    with pytest.raises(gamma.DomainError):
        make_witness(ZERO, 3)
    with pytest.raises(gamma.DomainError):
        make_witness(-unit(0), 3)
    with pytest.raises(gamma.DomainError):
        make_witness(INF, 3)
    with pytest.raises(ValueError):
        make_witness(unit(0), 0)


def test_witness_json_shape():
    payload = make_witness(unit(0), 1).to_json_dict()
    assert payload == {
        "epsilon": "e0",
        "alpha_level": 1,
        "alpha": "e0 + e1",
        "bound": "2*e2",
        "prefix": ["e2"],
    }
