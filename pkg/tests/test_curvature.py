"""Curvature-function values, gradients, cones and axioms.

Expected numbers are either hand algebra, the brute-force subset oracle
below, or central finite differences -- never read back from the code under
test.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

import bowlab as bl
from bowlab.errors import ConeViolation, NotExtendable, ValidationError


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def brute_force_sigma(lam, k):
    """S_k by explicit subset enumeration (only sane for small n)."""
    total = 0.0
    for idx in itertools.combinations(range(len(lam)), k):
        prod = 1.0
        for i in idx:
            prod *= lam[i]
        total += prod
    return total


def central_fd_gradient(f, lam, step=None):
    lam = [float(x) for x in lam]
    if step is None:
        step = 1e-6 * math.sqrt(sum(x * x for x in lam))
    out = []
    for i in range(len(lam)):
        hi = list(lam)
        lo = list(lam)
        hi[i] += step
        lo[i] -= step
        out.append((f(hi) - f(lo)) / (2 * step))
    return out


BUILTINS = [
    bl.mean(3),
    bl.sigma_root(2, 3),
    bl.sigma_root(3, 3),
    bl.harmonic_sum_inverse(1, 3),
    bl.harmonic_sum_inverse(2, 3),
    bl.hessian_quotient(2, 1, 3),
    bl.hessian_quotient(2, 0, 3),
    bl.h_times_sn(2),
    bl.h_times_sn(3),
]


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

def test_mean_value():
    assert bl.mean(3).evaluate([1.0, 2.0, 3.0]) == 6.0


def test_sigma_root_value():
    assert bl.sigma_root(2, 3).evaluate([1.0, 1.0, 1.0]) == pytest.approx(
        math.sqrt(3.0), abs=1e-12)


def test_product_value_at_ones():
    # H * S_n at the all-ones vector is n (sum times product)
    for n in (2, 3, 4):
        assert bl.h_times_sn(n).evaluate([1.0] * n) == pytest.approx(float(n))


def test_harmonic_sum_inverse_value():
    # (1/2 + 1/2)^-1 = 1
    assert bl.harmonic_sum_inverse(1, 2).evaluate([2.0, 2.0]) == pytest.approx(1.0)


def test_sigma_matches_subset_enumeration():
    rng = np.random.default_rng(11)
    for n in (3, 4, 6):
        for _ in range(50):
            lam = rng.uniform(0.2, 3.0, n)
            for k in range(1, n + 1):
                got = bl.sigma_root(k, n).evaluate(list(lam)) ** k
                ref = brute_force_sigma(lam, k)
                assert got == pytest.approx(ref, rel=1e-12)


def test_hessian_quotient_value():
    lam = [1.0, 2.0, 3.0]
    s2 = brute_force_sigma(lam, 2)
    s1 = sum(lam)
    assert bl.hessian_quotient(2, 1, 3).evaluate(lam) == pytest.approx(s2 / s1)
    assert bl.hessian_quotient(2, 0, 3).evaluate(lam) == pytest.approx(math.sqrt(s2))


def test_alpha_is_exact_rational():
    assert bl.mean(4).alpha == Fraction(1)
    assert bl.h_times_sn(2).alpha == Fraction(3)
    assert bl.h_times_sn(3).alpha == Fraction(4)
    g = bl.product([(bl.mean(2), Fraction(1, 2)), (bl.sigma_root(2, 2), Fraction(3, 2))], 2)
    assert g.alpha == Fraction(2)


def test_rescale_keeps_alpha():
    g = bl.rescale(bl.h_times_sn(2), 2)
    assert g.alpha == Fraction(3)
    assert g.evaluate([1.0, 1.0]) == pytest.approx(4.0)


def test_rescaled_product_gradient_vs_fd():
    g = bl.rescale(bl.h_times_sn(2), 2)
    lam = [0.7, 1.4]
    fd = central_fd_gradient(g.evaluate, lam)
    for a, b in zip(g.gradient(lam), fd):
        assert a == pytest.approx(b, rel=1e-6)


def test_sampler_on_intersection_cone():
    g = bl.product([(bl.harmonic_sum_inverse(2, 3), 1), (bl.sigma_root(2, 3), 1)], 3)
    assert isinstance(g.cone, bl.IntersectionCone)
    rep = bl.verify_axioms(g, bl.ConeSampler(count=200, seed=8))
    assert rep.max_euler_violation <= 1e-10
    assert rep.min_gradient_component > 0.0


def test_nan_rejected():
    with pytest.raises(ValidationError):
        bl.mean(2).evaluate([1.0, float("nan")])
    with pytest.raises(ValidationError):
        bl.mean(2).evaluate([1.0, float("inf")])
    with pytest.raises(ValidationError):
        bl.mean(3).evaluate([1.0, 1.0])


def test_cone_violation_raised():
    with pytest.raises(ConeViolation):
        bl.sigma_root(3, 3).evaluate([1.0, 1.0, 0.0])
    with pytest.raises(ConeViolation):
        bl.h_times_sn(2).evaluate([-1.0, 1.0])


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------

def test_mean_gradient():
    assert bl.mean(3).gradient([0.3, 2.0, 5.0]) == [1.0, 1.0, 1.0]


def test_sigma_root_gradient_at_ones():
    # finite-difference oracle at the symmetric point: each component 1/sqrt(3)
    g = bl.sigma_root(2, 3)
    fd = central_fd_gradient(g.evaluate, [1.0, 1.0, 1.0])
    grad = g.gradient([1.0, 1.0, 1.0])
    for a, b in zip(grad, fd):
        assert a == pytest.approx(b, rel=1e-6)
        assert a == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-9)


def test_product_gradient_vs_fd():
    g = bl.h_times_sn(2)
    lam = [1.0, 2.0]
    fd = central_fd_gradient(g.evaluate, lam)
    grad = g.gradient(lam)
    for a, b in zip(grad, fd):
        assert a == pytest.approx(b, rel=1e-6)


@pytest.mark.parametrize("gamma", BUILTINS, ids=lambda g: g.name())
def test_gradient_matches_fd_on_samples(gamma):
    sampler = bl.ConeSampler(count=40, seed=7, margin=5e-2)
    for lam in sampler.draw(gamma.cone, gamma.n):
        lam = list(lam)
        fd = central_fd_gradient(gamma.evaluate, lam)
        grad = gamma.gradient(lam)
        scale = max(abs(x) for x in fd)
        for a, b in zip(grad, fd):
            assert a == pytest.approx(b, rel=1e-6, abs=1e-6 * scale)


# ---------------------------------------------------------------------------
# boundary extension
# ---------------------------------------------------------------------------

def test_extend_mean():
    assert bl.mean(3).extend_to_boundary([0.0, 1.0, 1.0]) == 2.0


def test_extend_product_vanishes():
    for n in (2, 3, 4):
        lam = [0.0] + [1.0] * (n - 1)
        assert bl.h_times_sn(n).extend_to_boundary(lam) == 0.0


def test_extend_sigma_root_full_degree():
    assert bl.sigma_root(3, 3).extend_to_boundary([0.0, 1.0, 1.0]) == 0.0


def test_extend_sigma_root_partial_degree_positive():
    # S_2(0,1,1) = 1, so the extension at (0,1,1) is 1
    assert bl.sigma_root(2, 3).extend_to_boundary([0.0, 1.0, 1.0]) == pytest.approx(1.0)


def test_extend_harmonic():
    # k=1 has a 1/0 term: extension 0; k=2 stays positive at (0,1,1)
    assert bl.harmonic_sum_inverse(1, 3).extend_to_boundary([0.0, 1.0, 1.0]) == 0.0
    got = bl.harmonic_sum_inverse(2, 3).extend_to_boundary([0.0, 1.0, 1.0])
    assert got == pytest.approx(1.0 / (1.0 + 1.0 + 1.0 / 2.0))


def test_hessian_quotient_not_extendable():
    with pytest.raises(NotExtendable):
        bl.hessian_quotient(2, 1, 3).extend_to_boundary([0.0, 1.0, 1.0])
    assert not bl.hessian_quotient(2, 1, 3).extendable


def test_extension_is_limit_of_interior_values():
    # Lipschitz approach: agreement within 1e-6 already at eps = 1e-8
    eps = 1e-8
    lam0 = [0.0, 1.0, 1.0]
    lam_eps = [x + eps for x in lam0]
    for gamma in (bl.mean(3), bl.sigma_root(2, 3), bl.h_times_sn(3),
                  bl.harmonic_sum_inverse(2, 3)):
        interior = gamma.evaluate(lam_eps)
        assert gamma.extend_to_boundary(lam0) == pytest.approx(interior, abs=1e-6)


def test_extension_limit_holder_rate():
    # S_n^(1/n) is only 1/n-Hoelder at the boundary: the interior value at
    # eps distance is ~ (n*eps)^(1/n), far above 1e-6 at eps=1e-8, but it
    # does shrink toward the extension value at the predicted rate.
    gamma = bl.sigma_root(3, 3)
    lam0 = [0.0, 1.0, 1.0]
    assert gamma.extend_to_boundary(lam0) == 0.0
    prev = None
    for eps in (1e-6, 1e-8, 1e-10):
        lam_eps = [x + eps for x in lam0]
        val = gamma.evaluate(lam_eps)
        assert val <= (3.1 * eps) ** (1.0 / 3.0)
        if prev is not None:
            assert val < prev
        prev = val


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

def test_positive_cone_strict():
    assert not bl.PositiveCone().contains([1.0, 0.0, 1.0], strict=True)
    assert bl.PositiveCone().contains([1.0, 0.0, 1.0], strict=False)


def test_garding_cone_allows_one_negative():
    # S_1 = 1.9 > 0 and S_2 = 0.8 > 0
    assert bl.GardingCone(2).contains([-0.1, 1.0, 1.0], strict=True)
    assert not bl.GardingCone(3).contains([-0.1, 1.0, 1.0], strict=True)


def test_half_sum_cone():
    # two smallest sum to 1 > 0
    assert bl.HalfSumCone(2).contains([3.0, -1.0, 2.0], strict=True)
    assert not bl.HalfSumCone(1).contains([3.0, -1.0, 2.0], strict=True)


def test_product_cone_is_intersection():
    # mean lives on Garding-1, S_n^(1/n) on the positive cone; the product
    # collapses to the positive cone
    assert isinstance(bl.h_times_sn(3).cone, bl.PositiveCone)
    g = bl.product([(bl.mean(3), 1), (bl.sigma_root(2, 3), 1)], 3)
    assert g.cone == bl.GardingCone(2)
    g2 = bl.product([(bl.harmonic_sum_inverse(2, 3), 1), (bl.sigma_root(2, 3), 1)], 3)
    assert g2.cone == bl.IntersectionCone((bl.GardingCone(2), bl.HalfSumCone(2)))


def test_cone_membership_does_not_mutate_input():
    lam = [3.0, -1.0, 2.0]
    bl.HalfSumCone(2).contains(lam)
    assert lam == [3.0, -1.0, 2.0]


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

def test_verify_axioms_mean_exact():
    # all four violations at machine precision (summation order wobble only)
    rep = bl.verify_axioms(bl.mean(3), bl.ConeSampler(count=200, seed=1))
    assert rep.max_symmetry_violation <= 5e-16
    assert rep.max_euler_violation <= 1e-14
    assert rep.min_gradient_component == 1.0
    assert rep.max_homogeneity_violation <= 1e-13


def test_verify_axioms_product():
    rep = bl.verify_axioms(bl.h_times_sn(2), bl.ConeSampler(count=1000, seed=2))
    assert rep.max_euler_violation <= 1e-10
    assert rep.min_gradient_component > 0.0


class _BrokenGamma:
    """lam_1 + 2*lam_2: not symmetric, used to prove the harness can fail."""

    n = 2
    alpha = Fraction(1)
    cone = bl.PositiveCone()

    def evaluate(self, lam):
        return lam[0] + 2.0 * lam[1]

    def gradient(self, lam):
        return [1.0, 2.0]


def test_verify_axioms_flags_broken_function():
    rep = bl.verify_axioms(_BrokenGamma(), bl.ConeSampler(count=100, seed=4))
    assert rep.max_symmetry_violation > 1e-3


@pytest.mark.parametrize("gamma", BUILTINS, ids=lambda g: g.name())
def test_axiom_property_suite(gamma):
    rep = bl.verify_axioms(gamma, bl.ConeSampler(count=300, seed=5))
    assert rep.max_symmetry_violation <= 1e-12
    assert rep.max_euler_violation <= 1e-10
    assert rep.min_gradient_component > 0.0
    assert rep.max_homogeneity_violation <= 1e-10


# ---------------------------------------------------------------------------
# batched evaluation agrees with scalar
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("gamma", BUILTINS, ids=lambda g: g.name())
def test_batch_matches_scalar(gamma):
    sampler = bl.ConeSampler(count=50, seed=9)
    lam2d = sampler.draw(gamma.cone, gamma.n)
    vals = gamma.evaluate_many(lam2d)
    grads = gamma.gradient_many(lam2d)
    for row, v, gr in zip(lam2d, vals, grads):
        assert v == pytest.approx(gamma.evaluate(list(row)), rel=1e-13)
        for a, b in zip(gr, gamma.gradient(list(row))):
            assert a == pytest.approx(b, rel=1e-12)
    mask = gamma.cone_mask_many(lam2d, strict=True)
    assert mask.all()


def test_extend_many_matches_scalar():
    gamma = bl.h_times_sn(3)
    rows = np.array([[0.0, 1.0, 1.0], [1.0, 1.0, 1.0], [0.5, 2.0, 0.0]])
    got = gamma.extend_many(rows)
    for row, v in zip(rows, got):
        assert v == pytest.approx(gamma.extend_to_boundary(list(row)))


# ---------------------------------------------------------------------------
# JSON specification round trip
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("gamma", BUILTINS + [
    bl.rescale(bl.h_times_sn(2), 2),
    bl.product([(bl.mean(2), Fraction(1, 2)), (bl.sigma_root(2, 2), Fraction(5, 2))], 2),
], ids=lambda g: g.name())
def test_json_round_trip(gamma):
    text = bl.gamma_to_json(gamma)
    back = bl.gamma_from_json(text)
    assert back == gamma
    assert bl.gamma_to_json(back) == text


def test_bad_spec_rejected():
    with pytest.raises(ValidationError):
        bl.gamma_from_json('{"kind": "frobnicate", "n": 2}')
    with pytest.raises(ValidationError):
        bl.gamma_from_json('not json at all')
    with pytest.raises(ValidationError):
        bl.sigma_root(4, 3)
    with pytest.raises(ValidationError):
        bl.hessian_quotient(2, 2, 3)
