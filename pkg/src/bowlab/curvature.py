"""Symmetric, positively homogeneous curvature functions and their cones.

A curvature function is a smooth symmetric function of the n principal
curvatures, positive and increasing on an open symmetric cone that contains
the positive cone.  The built-in families are

* ``mean``                 -- sum of the curvatures, on {S_1 > 0}
* ``sigma_root(k)``        -- k-th root of the elementary symmetric
                              polynomial S_k, on the Garding cone
                              {S_1 > 0, ..., S_k > 0}
* ``harmonic_sum_inverse(k)`` -- reciprocal of the sum of reciprocals of all
                              k-term curvature sums, on the cone where the k
                              smallest curvatures have positive sum
* ``hessian_quotient(k,l)`` -- (S_k/S_l)^(1/(k-l)), on the Garding cone;
                              this family has no continuous zero extension
                              to the cone boundary
* ``product(...)``         -- product of built-ins raised to positive
                              rational exponents, e.g. ``h_times_sn`` for
                              (sum of curvatures) * S_n

All evaluations are pure functions of immutable values and safe to call from
concurrent workers.  Degree-of-homogeneity bookkeeping is exact (Fractions),
so homogeneity tests do not drift.

Scalar evaluation (plain floats) is kept allocation-light because the profile
ODE calls it inside a root solve; batched ndarray variants serve the field
computations in :mod:`bowlab.geometry`.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConeViolation, NotExtendable, ValidationError

__all__ = [
    "SymmetricCurvature",
    "PositiveCone",
    "GardingCone",
    "HalfSumCone",
    "IntersectionCone",
    "ConeSampler",
    "AxiomReport",
    "mean",
    "sigma_root",
    "harmonic_sum_inverse",
    "hessian_quotient",
    "product",
    "h_times_sn",
    "verify_axioms",
    "elementary_symmetric",
    "gamma_to_dict",
    "gamma_from_dict",
    "gamma_to_json",
    "gamma_from_json",
]


# ---------------------------------------------------------------------------
# elementary symmetric polynomials
# ---------------------------------------------------------------------------

def elementary_symmetric(values: Sequence[float]) -> list[float]:
    """All S_0..S_n of ``values`` by the recursive product expansion.

    Expands prod_i (1 + values[i]*t) one factor at a time, which is the
    numerically stable route (no subset enumeration, no Newton-Girard
    cancellation) and costs O(n^2).
    """
    e = [1.0] + [0.0] * len(values)
    top = 0
    for x in values:
        top += 1
        for j in range(top, 0, -1):
            e[j] += x * e[j - 1]
    return e


def _elementary_symmetric_batch(lam: np.ndarray) -> np.ndarray:
    """Batched S_0..S_n for rows of ``lam`` (shape (m, n)) -> (n+1, m)."""
    m, n = lam.shape
    e = np.zeros((n + 1, m))
    e[0] = 1.0
    for i in range(n):
        x = lam[:, i]
        for j in range(i + 1, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e


def _symmetric_without(values: Sequence[float], i: int) -> list[float]:
    reduced = list(values[:i]) + list(values[i + 1:])
    return elementary_symmetric(reduced)


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositiveCone:
    """All principal curvatures positive."""

    def contains(self, lam, strict: bool = True) -> bool:
        if strict:
            return all(x > 0.0 for x in lam)
        return all(x >= 0.0 for x in lam)

    def contains_with_margin(self, lam, margin: float) -> bool:
        scale = max(abs(x) for x in lam)
        return all(x > margin * scale for x in lam)

    def describe(self) -> str:
        return "positive"


@dataclass(frozen=True)
class GardingCone:
    """S_1 > 0, ..., S_k > 0 (connected component of the all-ones vector)."""

    k: int

    def contains(self, lam, strict: bool = True) -> bool:
        e = elementary_symmetric(lam)
        if strict:
            return all(e[j] > 0.0 for j in range(1, self.k + 1))
        return all(e[j] >= 0.0 for j in range(1, self.k + 1))

    def contains_with_margin(self, lam, margin: float) -> bool:
        n = len(lam)
        scale = max(abs(x) for x in lam)
        e = elementary_symmetric(lam)
        return all(
            e[j] > margin * math.comb(n, j) * scale**j
            for j in range(1, self.k + 1)
        )

    def describe(self) -> str:
        return f"garding-{self.k}"


@dataclass(frozen=True)
class HalfSumCone:
    """Sum of the k smallest curvatures positive."""

    k: int

    def contains(self, lam, strict: bool = True) -> bool:
        s = sum(sorted(lam)[: self.k])
        return s > 0.0 if strict else s >= 0.0

    def contains_with_margin(self, lam, margin: float) -> bool:
        scale = max(abs(x) for x in lam)
        return sum(sorted(lam)[: self.k]) > margin * self.k * scale

    def describe(self) -> str:
        return f"halfsum-{self.k}"


@dataclass(frozen=True)
class IntersectionCone:
    """Intersection of member cones (used by product combinations)."""

    members: tuple

    def contains(self, lam, strict: bool = True) -> bool:
        return all(c.contains(lam, strict) for c in self.members)

    def contains_with_margin(self, lam, margin: float) -> bool:
        return all(c.contains_with_margin(lam, margin) for c in self.members)

    def describe(self) -> str:
        return "intersection(" + ",".join(c.describe() for c in self.members) + ")"


def _intersect_cones(cones, n: int):
    """Normalized intersection.  Garding cones nest (larger k is smaller),
    half-sum cones nest the other way (smaller k is smaller), and the full
    Garding cone equals the positive cone, so products of the built-ins
    collapse to a primitive descriptor whenever possible."""
    garding_k = 0
    halfsum_k = None
    stack = list(cones)
    while stack:
        c = stack.pop()
        if isinstance(c, PositiveCone):
            garding_k = n
        elif isinstance(c, GardingCone):
            garding_k = max(garding_k, c.k)
        elif isinstance(c, HalfSumCone):
            halfsum_k = c.k if halfsum_k is None else min(halfsum_k, c.k)
        elif isinstance(c, IntersectionCone):
            stack.extend(c.members)
    garding = None
    if garding_k >= n:
        garding = PositiveCone()
    elif garding_k > 0:
        garding = GardingCone(garding_k)
    if halfsum_k is None:
        return garding if garding is not None else PositiveCone()
    if garding is None:
        return HalfSumCone(halfsum_k)
    if isinstance(garding, PositiveCone):
        return garding  # positive cone is contained in every half-sum cone
    return IntersectionCone((garding, HalfSumCone(halfsum_k)))


# ---------------------------------------------------------------------------
# kinds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Mean:
    pass


@dataclass(frozen=True)
class _SigmaRoot:
    k: int


@dataclass(frozen=True)
class _HarmonicSumInverse:
    k: int


@dataclass(frozen=True)
class _HessianQuotient:
    k: int
    l: int


@dataclass(frozen=True)
class _Product:
    # ((SymmetricCurvature, Fraction exponent), ...)
    factors: tuple


def _as_fraction(x) -> Fraction:
    f = Fraction(x)
    if f <= 0:
        raise ValidationError(f"exponent/scale must be positive, got {x}")
    return f


# ---------------------------------------------------------------------------
# the curvature function itself
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricCurvature:
    """A symmetric curvature function on n principal curvatures.

    ``scale`` multiplies the whole function by a positive rational constant
    (homogeneity degree is unchanged); it exists so rescaled functions like
    2*gamma can be expressed for the scale-coherence checks.
    """

    kind: object
    n: int
    scale: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"need n >= 2 eigenvalues, got n={self.n}")
        k = self.kind
        if isinstance(k, (_SigmaRoot, _HarmonicSumInverse)):
            if not 1 <= k.k <= self.n:
                raise ValidationError(f"need 1 <= k <= n, got k={k.k}, n={self.n}")
        elif isinstance(k, _HessianQuotient):
            if not (0 <= k.l < k.k <= self.n):
                raise ValidationError(
                    f"need 0 <= l < k <= n, got k={k.k}, l={k.l}, n={self.n}")
        elif isinstance(k, _Product):
            if not k.factors:
                raise ValidationError("product needs at least one factor")
            for g, exp in k.factors:
                if g.n != self.n:
                    raise ValidationError("product factors must share n")
                _as_fraction(exp)
        elif not isinstance(k, _Mean):
            raise ValidationError(f"unknown kind {k!r}")
        _as_fraction(self.scale)

    # -- derived structure ------------------------------------------------

    @cached_property
    def alpha(self) -> Fraction:
        """Exact homogeneity degree."""
        k = self.kind
        if isinstance(k, _Product):
            return sum((Fraction(e) * g.alpha for g, e in k.factors), Fraction(0))
        return Fraction(1)

    @cached_property
    def cone(self):
        k = self.kind
        if isinstance(k, _Mean):
            return GardingCone(1)
        if isinstance(k, _SigmaRoot):
            return PositiveCone() if k.k == self.n else GardingCone(k.k)
        if isinstance(k, _HarmonicSumInverse):
            return HalfSumCone(k.k)
        if isinstance(k, _HessianQuotient):
            return PositiveCone() if k.k == self.n else GardingCone(k.k)
        return _intersect_cones([g.cone for g, _ in k.factors], self.n)

    @cached_property
    def extendable(self) -> bool:
        """Whether the continuous zero extension to the cone boundary exists."""
        k = self.kind
        if isinstance(k, _HessianQuotient):
            return False
        if isinstance(k, _Product):
            return all(g.extendable for g, _ in k.factors)
        return True

    def name(self) -> str:
        k = self.kind
        if isinstance(k, _Mean):
            return "mean"
        if isinstance(k, _SigmaRoot):
            return f"sigma-root(k={k.k})"
        if isinstance(k, _HarmonicSumInverse):
            return f"harmonic-sum-inverse(k={k.k})"
        if isinstance(k, _HessianQuotient):
            return f"hessian-quotient(k={k.k},l={k.l})"
        inner = "*".join(f"{g.name()}^{e}" for g, e in k.factors)
        pre = "" if self.scale == 1 else f"{self.scale}*"
        return pre + inner

    # -- validation --------------------------------------------------------

    def _check_vector(self, lam) -> None:
        if len(lam) != self.n:
            raise ValidationError(f"expected {self.n} curvatures, got {len(lam)}")
        for x in lam:
            if not math.isfinite(x):
                raise ValidationError(f"non-finite curvature entry {x!r}")

    # -- evaluation --------------------------------------------------------

    def evaluate(self, lam) -> float:
        """Value at ``lam``; requires ``lam`` strictly inside the cone."""
        self._check_vector(lam)
        if not self.cone.contains(lam, strict=True):
            raise ConeViolation(
                f"{list(lam)} is outside the open cone {self.cone.describe()}")
        return self._value(lam)

    def _value(self, lam) -> float:
        return float(self.scale) * _kind_value(self.kind, lam)

    def gradient(self, lam) -> list[float]:
        """Analytic gradient; strictly positive inside the cone."""
        self._check_vector(lam)
        if not self.cone.contains(lam, strict=True):
            raise ConeViolation(
                f"{list(lam)} is outside the open cone {self.cone.describe()}")
        s = float(self.scale)
        return [s * g for g in _kind_gradient(self.kind, lam)]

    def extend_to_boundary(self, lam) -> float:
        """Continuous extension value on the closed cone (zero on the boundary)."""
        self._check_vector(lam)
        if not self.extendable:
            raise NotExtendable(
                f"{self.name()} admits no continuous zero boundary extension")
        if not self.cone.contains(lam, strict=False):
            raise ConeViolation(
                f"{list(lam)} is outside the closed cone {self.cone.describe()}")
        return float(self.scale) * _kind_extended(self.kind, lam)

    def cone_contains(self, lam, strict: bool = True) -> bool:
        self._check_vector(lam)
        return self.cone.contains(lam, strict=strict)

    # -- convenience -------------------------------------------------------

    def value_at_ones(self) -> float:
        return self._value([1.0] * self.n)

    def gamma_zero(self) -> float:
        """Extension value at (0, 1, ..., 1): the entire/ball dichotomy key."""
        return self.extend_to_boundary([0.0] + [1.0] * (self.n - 1))

    def umbilic_value(self) -> float:
        """c0 with gamma(c0, ..., c0) = 1, i.e. gamma(1,..,1)^(-1/alpha)."""
        return self.value_at_ones() ** (-1.0 / float(self.alpha))

    # -- batched variants (used by the field computations) ------------------

    def evaluate_many(self, lam2d: np.ndarray) -> np.ndarray:
        lam2d = np.asarray(lam2d, dtype=float)
        return float(self.scale) * _kind_value_batch(self.kind, lam2d)

    def gradient_many(self, lam2d: np.ndarray) -> np.ndarray:
        lam2d = np.asarray(lam2d, dtype=float)
        return float(self.scale) * _kind_gradient_batch(self.kind, lam2d)

    def extend_many(self, lam2d: np.ndarray) -> np.ndarray:
        if not self.extendable:
            raise NotExtendable(
                f"{self.name()} admits no continuous zero boundary extension")
        lam2d = np.asarray(lam2d, dtype=float)
        return float(self.scale) * _kind_extended_batch(self.kind, lam2d)

    def cone_mask_many(self, lam2d: np.ndarray, strict: bool = True) -> np.ndarray:
        lam2d = np.asarray(lam2d, dtype=float)
        return _cone_mask_batch(self.cone, lam2d, strict)


# ---------------------------------------------------------------------------
# scalar kind dispatch
# ---------------------------------------------------------------------------

def _kind_value(kind, lam) -> float:
    if isinstance(kind, _Mean):
        return float(sum(lam))
    if isinstance(kind, _SigmaRoot):
        e = elementary_symmetric(lam)
        return e[kind.k] ** (1.0 / kind.k)
    if isinstance(kind, _HarmonicSumInverse):
        t = 0.0
        for idx in itertools.combinations(range(len(lam)), kind.k):
            t += 1.0 / sum(lam[i] for i in idx)
        return 1.0 / t
    if isinstance(kind, _HessianQuotient):
        e = elementary_symmetric(lam)
        return (e[kind.k] / e[kind.l]) ** (1.0 / (kind.k - kind.l))
    out = 1.0
    for g, exp in kind.factors:
        out *= g._value(lam) ** float(exp)
    return out


def _kind_gradient(kind, lam) -> list[float]:
    n = len(lam)
    if isinstance(kind, _Mean):
        return [1.0] * n
    if isinstance(kind, _SigmaRoot):
        k = kind.k
        e = elementary_symmetric(lam)
        val = e[k] ** (1.0 / k)
        pref = val / (k * e[k])  # (1/k) S_k^{1/k - 1}
        return [pref * _symmetric_without(lam, i)[k - 1] for i in range(n)]
    if isinstance(kind, _HarmonicSumInverse):
        k = kind.k
        t = 0.0
        acc = [0.0] * n
        for idx in itertools.combinations(range(n), k):
            s = sum(lam[i] for i in idx)
            t += 1.0 / s
            w = 1.0 / (s * s)
            for i in idx:
                acc[i] += w
        inv_t2 = 1.0 / (t * t)
        return [inv_t2 * a for a in acc]
    if isinstance(kind, _HessianQuotient):
        k, l = kind.k, kind.l
        e = elementary_symmetric(lam)
        val = (e[k] / e[l]) ** (1.0 / (k - l))
        out = []
        for i in range(n):
            ew = _symmetric_without(lam, i)
            dlog = ew[k - 1] / e[k]
            if l >= 1:
                dlog -= ew[l - 1] / e[l]
            out.append(val * dlog / (k - l))
        return out
    # product: gamma * sum_j e_j * grad_j / val_j
    vals = [g._value(lam) for g, _ in kind.factors]
    total = 1.0
    for (g, exp), v in zip(kind.factors, vals):
        total *= v ** float(exp)
    out = [0.0] * n
    for (g, exp), v in zip(kind.factors, vals):
        grad = _kind_gradient(g.kind, lam)
        coef = float(exp) * total / v * float(g.scale)
        for i in range(n):
            out[i] += coef * grad[i]
    return out


def _kind_extended(kind, lam) -> float:
    if isinstance(kind, _Mean):
        return float(sum(lam))
    if isinstance(kind, _SigmaRoot):
        e = elementary_symmetric(lam)
        return max(e[kind.k], 0.0) ** (1.0 / kind.k)
    if isinstance(kind, _HarmonicSumInverse):
        t = 0.0
        for idx in itertools.combinations(range(len(lam)), kind.k):
            s = sum(lam[i] for i in idx)
            if s <= 0.0:
                return 0.0
            t += 1.0 / s
        return 1.0 / t
    if isinstance(kind, _Product):
        out = 1.0
        for g, exp in kind.factors:
            out *= g.extend_to_boundary(lam) ** float(exp)
        return out
    raise NotExtendable("hessian quotients have no zero boundary extension")


# ---------------------------------------------------------------------------
# batched kind dispatch
# ---------------------------------------------------------------------------

def _kind_value_batch(kind, lam: np.ndarray) -> np.ndarray:
    if isinstance(kind, _Mean):
        return lam.sum(axis=1)
    if isinstance(kind, _SigmaRoot):
        e = _elementary_symmetric_batch(lam)
        return e[kind.k] ** (1.0 / kind.k)
    if isinstance(kind, _HarmonicSumInverse):
        m, n = lam.shape
        t = np.zeros(m)
        for idx in itertools.combinations(range(n), kind.k):
            t += 1.0 / lam[:, idx].sum(axis=1)
        return 1.0 / t
    if isinstance(kind, _HessianQuotient):
        e = _elementary_symmetric_batch(lam)
        return (e[kind.k] / e[kind.l]) ** (1.0 / (kind.k - kind.l))
    out = np.ones(lam.shape[0])
    for g, exp in kind.factors:
        out *= g.evaluate_many(lam) ** float(exp)
    return out


def _kind_gradient_batch(kind, lam: np.ndarray) -> np.ndarray:
    m, n = lam.shape
    if isinstance(kind, _Mean):
        return np.ones((m, n))
    if isinstance(kind, _SigmaRoot):
        k = kind.k
        e = _elementary_symmetric_batch(lam)
        pref = e[k] ** (1.0 / k) / (k * e[k])
        out = np.empty((m, n))
        for i in range(n):
            ew = _elementary_symmetric_batch(np.delete(lam, i, axis=1))
            out[:, i] = pref * ew[k - 1]
        return out
    if isinstance(kind, _HarmonicSumInverse):
        k = kind.k
        t = np.zeros(m)
        acc = np.zeros((m, n))
        for idx in itertools.combinations(range(n), k):
            s = lam[:, idx].sum(axis=1)
            t += 1.0 / s
            w = 1.0 / (s * s)
            for i in idx:
                acc[:, i] += w
        return acc / (t * t)[:, None]
    if isinstance(kind, _HessianQuotient):
        k, l = kind.k, kind.l
        e = _elementary_symmetric_batch(lam)
        val = (e[k] / e[l]) ** (1.0 / (k - l))
        out = np.empty((m, n))
        for i in range(n):
            ew = _elementary_symmetric_batch(np.delete(lam, i, axis=1))
            dlog = ew[k - 1] / e[k]
            if l >= 1:
                dlog = dlog - ew[l - 1] / e[l]
            out[:, i] = val * dlog / (k - l)
        return out
    vals = [g.evaluate_many(lam) for g, _ in kind.factors]
    total = np.ones(m)
    for (g, exp), v in zip(kind.factors, vals):
        total *= v ** float(exp)
    out = np.zeros((m, n))
    for (g, exp), v in zip(kind.factors, vals):
        out += (float(exp) * total / v)[:, None] * g.gradient_many(lam)
    return out


def _kind_extended_batch(kind, lam: np.ndarray) -> np.ndarray:
    if isinstance(kind, _Mean):
        return lam.sum(axis=1)
    if isinstance(kind, _SigmaRoot):
        e = _elementary_symmetric_batch(lam)
        return np.maximum(e[kind.k], 0.0) ** (1.0 / kind.k)
    if isinstance(kind, _HarmonicSumInverse):
        m, n = lam.shape
        t = np.zeros(m)
        dead = np.zeros(m, dtype=bool)
        for idx in itertools.combinations(range(n), kind.k):
            s = lam[:, idx].sum(axis=1)
            dead |= s <= 0.0
            with np.errstate(divide="ignore"):
                t += np.where(s > 0.0, 1.0 / np.where(s > 0.0, s, 1.0), 0.0)
        out = np.zeros(m)
        ok = ~dead
        out[ok] = 1.0 / t[ok]
        return out
    if isinstance(kind, _Product):
        out = np.ones(lam.shape[0])
        for g, exp in kind.factors:
            out *= g.extend_many(lam) ** float(exp)
        return out
    raise NotExtendable("hessian quotients have no zero boundary extension")


def _cone_mask_batch(cone, lam: np.ndarray, strict: bool) -> np.ndarray:
    cmp = np.greater if strict else np.greater_equal
    if isinstance(cone, PositiveCone):
        return cmp(lam, 0.0).all(axis=1)
    if isinstance(cone, GardingCone):
        e = _elementary_symmetric_batch(lam)
        return np.logical_and.reduce([cmp(e[j], 0.0) for j in range(1, cone.k + 1)])
    if isinstance(cone, HalfSumCone):
        s = np.sort(lam, axis=1)[:, : cone.k].sum(axis=1)
        return cmp(s, 0.0)
    return np.logical_and.reduce(
        [_cone_mask_batch(c, lam, strict) for c in cone.members])


# ---------------------------------------------------------------------------
# factories
# ---------------------------------------------------------------------------

def mean(n: int) -> SymmetricCurvature:
    return SymmetricCurvature(_Mean(), n)


def sigma_root(k: int, n: int) -> SymmetricCurvature:
    return SymmetricCurvature(_SigmaRoot(k), n)


def harmonic_sum_inverse(k: int, n: int) -> SymmetricCurvature:
    return SymmetricCurvature(_HarmonicSumInverse(k), n)


def hessian_quotient(k: int, l: int, n: int) -> SymmetricCurvature:
    return SymmetricCurvature(_HessianQuotient(k, l), n)


def product(factors, n: int, scale=1) -> SymmetricCurvature:
    """Product of curvature functions raised to positive rational exponents.

    ``factors`` is an iterable of (SymmetricCurvature, exponent) pairs.
    """
    facs = tuple((g, _as_fraction(e)) for g, e in factors)
    return SymmetricCurvature(_Product(facs), n, scale=_as_fraction(scale))


def h_times_sn(n: int) -> SymmetricCurvature:
    """(lam_1 + ... + lam_n) * lam_1*...*lam_n, homogeneity degree n+1."""
    return product([(mean(n), 1), (sigma_root(n, n), n)], n)


def rescale(gamma: SymmetricCurvature, factor) -> SymmetricCurvature:
    f = _as_fraction(factor) * gamma.scale
    return SymmetricCurvature(gamma.kind, gamma.n, scale=f)


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeSampler:
    """Random draws strictly inside a cone, with a relative margin so sampled
    points stay away from the boundary (keeps identity checks conditioned)."""

    count: int = 1000
    seed: int = 0
    margin: float = 1e-3
    loc: float = 1.0
    spread: float = 0.6

    def draw(self, cone, n: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        out = np.empty((self.count, n))
        got = 0
        attempts = 0
        while got < self.count:
            attempts += 1
            if attempts > 1000 * self.count:
                raise ValidationError(
                    f"cone sampler stalled after {attempts} attempts")
            lam = rng.normal(self.loc, self.spread, n)
            if cone.contains_with_margin(lam, self.margin):
                out[got] = lam
                got += 1
        return out


@dataclass
class AxiomReport:
    """Worst observed violations over the sample set (violations are data)."""

    samples: int
    max_symmetry_violation: float
    max_euler_violation: float
    min_gradient_component: float
    max_homogeneity_violation: float

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "max_symmetry_violation": self.max_symmetry_violation,
            "max_euler_violation": self.max_euler_violation,
            "min_gradient_component": self.min_gradient_component,
            "max_homogeneity_violation": self.max_homogeneity_violation,
        }


def verify_axioms(gamma, sampler: ConeSampler = ConeSampler()) -> AxiomReport:
    """Numerically check symmetry, the degree identity
    <grad(lam), lam> = alpha * value, gradient positivity, and positive
    homogeneity on random cone samples.

    ``gamma`` may be any object with ``evaluate``, ``gradient``, ``alpha``,
    ``cone`` and ``n`` (deliberately broken functions can be pushed through
    the same harness).
    """
    rng = np.random.default_rng(sampler.seed + 1)
    lam_set = sampler.draw(gamma.cone, gamma.n)
    alpha = float(gamma.alpha)

    worst_sym = 0.0
    worst_euler = 0.0
    min_grad = math.inf
    worst_hom = 0.0
    for lam in lam_set:
        lam = list(lam)
        val = gamma.evaluate(lam)
        grad = gamma.gradient(lam)

        perm = list(rng.permutation(gamma.n))
        val_p = gamma.evaluate([lam[i] for i in perm])
        worst_sym = max(worst_sym, abs(val_p - val) / abs(val))

        euler = sum(g * x for g, x in zip(grad, lam))
        worst_euler = max(worst_euler, abs(euler - alpha * val) / abs(alpha * val))

        min_grad = min(min_grad, min(grad))

        c = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        val_c = gamma.evaluate([c * x for x in lam])
        ref = c**alpha * val
        worst_hom = max(worst_hom, abs(val_c - ref) / abs(ref))

    return AxiomReport(
        samples=len(lam_set),
        max_symmetry_violation=float(worst_sym),
        max_euler_violation=float(worst_euler),
        min_gradient_component=float(min_grad),
        max_homogeneity_violation=float(worst_hom),
    )


# ---------------------------------------------------------------------------
# JSON specification (lossless round trip)
# ---------------------------------------------------------------------------

def _fraction_to_pair(f: Fraction):
    return [f.numerator, f.denominator]


def _fraction_from_pair(p) -> Fraction:
    if isinstance(p, (list, tuple)) and len(p) == 2:
        return Fraction(int(p[0]), int(p[1]))
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, str):
        return Fraction(p)
    raise ValidationError(f"cannot parse rational {p!r}")


def gamma_to_dict(gamma: SymmetricCurvature) -> dict:
    k = gamma.kind
    out: dict = {"n": gamma.n}
    if isinstance(k, _Mean):
        out["kind"] = "mean"
    elif isinstance(k, _SigmaRoot):
        out["kind"] = "sigma-root"
        out["params"] = {"k": k.k}
    elif isinstance(k, _HarmonicSumInverse):
        out["kind"] = "harmonic-sum-inverse"
        out["params"] = {"k": k.k}
    elif isinstance(k, _HessianQuotient):
        out["kind"] = "hessian-quotient"
        out["params"] = {"k": k.k, "l": k.l}
    else:
        out["kind"] = "product"
        out["params"] = {
            "factors": [
                {"gamma": gamma_to_dict(g), "exponent": _fraction_to_pair(Fraction(e))}
                for g, e in k.factors
            ]
        }
    if gamma.scale != 1:
        out["scale"] = _fraction_to_pair(gamma.scale)
    return out


def gamma_from_dict(spec: dict) -> SymmetricCurvature:
    try:
        kind = spec["kind"]
        n = int(spec["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad curvature-function spec: {exc}") from exc
    params = spec.get("params", {})
    scale = _fraction_from_pair(spec["scale"]) if "scale" in spec else Fraction(1)
    if kind == "mean":
        g = mean(n)
    elif kind == "sigma-root":
        g = sigma_root(int(params["k"]), n)
    elif kind == "harmonic-sum-inverse":
        g = harmonic_sum_inverse(int(params["k"]), n)
    elif kind == "hessian-quotient":
        g = hessian_quotient(int(params["k"]), int(params["l"]), n)
    elif kind == "product":
        facs = [
            (gamma_from_dict(f["gamma"]), _fraction_from_pair(f["exponent"]))
            for f in params["factors"]
        ]
        g = product(facs, n)
    else:
        raise ValidationError(f"unknown curvature-function kind {kind!r}")
    if scale != 1:
        g = rescale(g, scale)
    return g


def gamma_to_json(gamma: SymmetricCurvature) -> str:
    return json.dumps(gamma_to_dict(gamma), sort_keys=True)


def gamma_from_json(text: str) -> SymmetricCurvature:
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return gamma_from_dict(spec)
