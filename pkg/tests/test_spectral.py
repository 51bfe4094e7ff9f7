import json
import math

import numpy as np
import pytest

from chaosmoments import (
    ChaosKind,
    CoefficientSequence,
    CumulantSequence,
    canonicalize,
    cumulants_from_coefficients,
    target_coefficients,
)
from chaosmoments.errors import InvalidInputError
from chaosmoments.fixtures import COUNTEREXAMPLE_ROUNDED
from chaosmoments.spectral import split_signed_parts

from conftest import random_sequence

H = 1.0 / math.sqrt(2.0)


def cumulant_oracle(kind, lam, r):
    # closed form written out independently of the library prefactor helper
    s = sum(x**r for x in lam)
    if kind == "free":
        return s
    return 2 ** (r / 2 - 1) * math.factorial(r - 1) * s


def test_kind_parsing():
    assert ChaosKind.parse("FREE") is ChaosKind.FREE
    assert ChaosKind.parse(ChaosKind.CLASSICAL) is ChaosKind.CLASSICAL
    with pytest.raises(InvalidInputError):
        ChaosKind.parse("boolean")


def test_zeros_dropped_and_finite_required():
    seq = CoefficientSequence("classical", [0.3, 0.0, -0.5])
    assert seq.lambdas == (0.3, -0.5)
    with pytest.raises(InvalidInputError):
        CoefficientSequence("classical", [1.0, float("nan")])


def test_canonicalize_examples():
    seq = CoefficientSequence("classical", [0.3, -0.5, 0, 0.9])
    assert canonicalize(seq).lambdas == (0.9, 0.3, -0.5)
    assert canonicalize(CoefficientSequence("free", [-H, H])).lambdas == (H, -H)


def test_canonical_order_of_negatives():
    seq = canonicalize(CoefficientSequence("classical", [-0.1, 0.2, -0.7, -0.3]))
    assert seq.lambdas == (0.2, -0.7, -0.3, -0.1)


def test_canonicalize_idempotent_and_multiset_preserving(rng):
    for _ in range(200):
        seq = random_sequence(rng, normalized=False)
        once = canonicalize(seq)
        assert canonicalize(once) == once
        assert sorted(once.lambdas) == sorted(seq.lambdas)
        pos = [x for x in once.lambdas if x > 0]
        neg = [x for x in once.lambdas if x < 0]
        assert list(once.lambdas) == pos + neg


def test_split_signed_parts():
    pos, neg = split_signed_parts(CoefficientSequence("classical", [0.9, 0.3, -0.5]))
    assert pos.lambdas == (0.9, 0.3) and neg.lambdas == (0.5,)
    pos, neg = split_signed_parts(CoefficientSequence("classical", [0.2, 0.4]))
    assert pos.lambdas == (0.4, 0.2) and len(neg) == 0
    pos, neg = split_signed_parts(target_coefficients("classical"))
    assert pos.lambdas == (H,) and neg.lambdas == (H,)


def test_split_recovers_canonical_multiset(rng):
    for _ in range(100):
        seq = random_sequence(rng, normalized=False)
        pos, neg = split_signed_parts(seq)
        assert pos.lambdas + tuple(-x for x in neg.lambdas) == canonicalize(seq).lambdas


def test_target_cumulants_classical():
    c = cumulants_from_coefficients(target_coefficients("classical"), 6)
    assert c[1] == 0
    assert c[2] == pytest.approx(1, rel=1e-14)
    assert c[3] == pytest.approx(0, abs=1e-14)
    assert c[4] == pytest.approx(6, rel=1e-14)
    assert c[6] == pytest.approx(120, rel=1e-14)


def test_target_cumulants_free():
    c = cumulants_from_coefficients(target_coefficients("free"), 6)
    assert c[2] == pytest.approx(1, rel=1e-14)
    assert c[4] == pytest.approx(0.5, rel=1e-14)
    assert c[6] == pytest.approx(0.25, rel=1e-14)


def test_rounded_counterexample_cumulants():
    c = cumulants_from_coefficients(CoefficientSequence("classical", COUNTEREXAMPLE_ROUNDED), 4)
    assert c[2] == pytest.approx(1.0, abs=1e-4)
    # fourth moment minus three times the squared variance
    assert c[4] == pytest.approx(8.2567 - 3.0, abs=2e-3)


@pytest.mark.parametrize("kind", ["classical", "free"])
def test_cumulants_match_closed_form(kind, rng):
    for _ in range(100):
        seq = random_sequence(rng, kind, normalized=False)
        c = cumulants_from_coefficients(seq, 8)
        for r in range(2, 9):
            assert c[r] == pytest.approx(cumulant_oracle(kind, seq.lambdas, r), rel=1e-12, abs=1e-15)


def test_cumulants_order_validation():
    with pytest.raises(InvalidInputError):
        cumulants_from_coefficients(target_coefficients("classical"), 1)


@pytest.mark.parametrize("kind", ["classical", "free"])
def test_permutation_invariance(kind, rng):
    for _ in range(100):
        seq = random_sequence(rng, kind, normalized=False)
        shuffled = CoefficientSequence(kind, rng.permutation(seq.as_array()))
        a = cumulants_from_coefficients(seq, 8).as_array()
        b = cumulants_from_coefficients(shuffled, 8).as_array()
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("kind", ["classical", "free"])
def test_scaling(kind, rng):
    for _ in range(100):
        seq = random_sequence(rng, kind, normalized=False)
        alpha = rng.uniform(0.2, 3.0)
        base = cumulants_from_coefficients(seq, 8)
        scaled = cumulants_from_coefficients(CoefficientSequence(kind, alpha * seq.as_array()), 8)
        for r in range(2, 9):
            assert scaled[r] == pytest.approx(alpha**r * base[r], rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("kind", ["classical", "free"])
def test_signed_decomposition(kind, rng):
    for _ in range(100):
        seq = random_sequence(rng, kind, normalized=False)
        pos, neg = split_signed_parts(seq)
        c = cumulants_from_coefficients(seq, 8)
        cp = cumulants_from_coefficients(pos, 8)
        cn = cumulants_from_coefficients(neg, 8)
        for r in range(2, 9):
            assert c[r] == pytest.approx(cp[r] + (-1) ** r * cn[r], rel=1e-12, abs=1e-13)


def test_target_coefficients_both_kinds():
    for kind in ("classical", "free"):
        seq = target_coefficients(kind)
        assert seq.lambdas == (H, -H)
        assert seq.variance == pytest.approx(1.0, abs=1e-15)


def test_normalization_tolerance():
    seq = CoefficientSequence("classical", [1.0 + 1e-10])
    assert seq.is_normalized()
    with pytest.raises(InvalidInputError):
        CoefficientSequence("classical", [1.001]).require_normalized()


def test_symmetry_is_exact():
    assert CoefficientSequence("classical", [0.5, -0.5, 0.3, -0.3]).is_symmetric()
    assert not CoefficientSequence("classical", [0.5, -0.5 + 1e-12]).is_symmetric()


def test_json_round_trip():
    seq = CoefficientSequence("free", [0.1234567890123456789, -0.987654321])
    back = CoefficientSequence.from_json(json.loads(json.dumps(seq.to_json())))
    assert back == seq
    with pytest.raises(InvalidInputError):
        CoefficientSequence.from_json({"kind": "free"})


def test_order_indexed_access():
    c = CumulantSequence("classical", (0, 1, 0, 6))
    assert c[4] == 6 and c.R == 4
    with pytest.raises(IndexError):
        c[0]
    assert c.is_exact()
    assert c.to_json("cumulants")["cumulants_exact"][3] == {"num": 6, "den": 1}
