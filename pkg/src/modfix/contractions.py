"""Contraction constants and sampled falsifiers for the defining inequalities.

Two families of edge-restricted contraction conditions are covered:

* displacement form (Banach type):
      rho(b(fx - fy)) <= k rho(a(x - y))        with 0 < k < 1, 0 < a < b
* self-displacement form (Kannan type):
      rho(b(fx - fy)) <= k rho(a1(fx - x)) + l rho(a2(fy - y))
                                      with k + l < 1, a1 <= b/2, a2 <= b

Checks walk explicit pair samples (sample generation is the harness's job),
report witnesses for every failed instance, and track the worst lhs/rhs ratio
observed.  The convex-rescaling operations turn constants that only satisfy a
relaxed admissibility (b large enough) into fully admissible tuples, following
the substitution a |--> a0 with the contraction factor scaled by a/a0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .backend import Backend, Number, infer_backend
from .errors import AdmissibilityError
from .graphs import SpaceGraph, has_edge, has_undirected_edge
from .modular import ModularSpec, Point, as_point, rho_gap

#: Rationale for the rescaling pivot choices, echoed in harness output.
BANACH_RESCALE_RULE = "a0 = (c+b)/2: midpoint balances the k' < 1 margin against a0 < b"
KANNAN_RESCALE_RULE = ("a0 = b/2: endpoint minimizes k' = a1*k/a0, "
                       "widening the k' < 1/2 uniqueness margin")


def _num(v: Number) -> Number:
    # ints are exact; promote so divisions stay rational
    return Fraction(v) if isinstance(v, int) else v


@dataclass(frozen=True)
class BanachConstants:
    k: Number
    a: Number
    b: Number

    def __post_init__(self):
        for name in ("k", "a", "b"):
            object.__setattr__(self, name, _num(getattr(self, name)))
        if not (0 < self.k < 1):
            raise AdmissibilityError(f"need 0 < k < 1, got k={self.k}")
        if not (0 < self.a < self.b):
            raise AdmissibilityError(f"need 0 < a < b, got a={self.a}, b={self.b}")

    @property
    def alpha(self) -> Number:
        """Exponential conjugate of b/a: the alpha > 1 with a/b + 1/alpha = 1."""
        return self.b / (self.b - self.a)


@dataclass(frozen=True)
class KannanConstants:
    k: Number
    l: Number
    a1: Number
    a2: Number
    b: Number

    def __post_init__(self):
        for name in ("k", "l", "a1", "a2", "b"):
            object.__setattr__(self, name, _num(getattr(self, name)))
        if any(not getattr(self, n) > 0 for n in ("k", "l", "a1", "a2", "b")):
            raise AdmissibilityError("all Kannan constants must be positive")
        if not self.k + self.l < 1:
            raise AdmissibilityError(f"need k + l < 1, got {self.k} + {self.l}")
        if not self.a1 <= self.b / 2:
            raise AdmissibilityError(f"need a1 <= b/2, got a1={self.a1}, b={self.b}")
        if not self.a2 <= self.b:
            raise AdmissibilityError(f"need a2 <= b, got a2={self.a2}, b={self.b}")

    @property
    def delta(self) -> Number:
        """Per-step decay rate l/(1-k) of the orbit gaps, in (0, 1)."""
        return self.l / (1 - self.k)

    @property
    def uniqueness_rate(self) -> Number:
        """lambda = k/(1-k); below 1 exactly when k < 1/2."""
        return self.k / (1 - self.k)

    @property
    def k_below_half(self) -> bool:
        return 2 * self.k < 1

    @property
    def a2_within_half_b(self) -> bool:
        """Stricter a2 <= b/2 needed to transfer the condition to the
        undirected graph by role interchange; reported, never enforced."""
        return self.a2 <= self.b / 2


@dataclass(frozen=True)
class SelfMap:
    fn: Callable[[Point], Point]
    description: str = ""

    def __call__(self, x: Point) -> Point:
        return self.fn(x)


def scalar_map(fn: Callable[[Number], Number], description: str = "") -> SelfMap:
    """Wrap a scalar function as a one-dimensional self map."""
    return SelfMap(lambda pt: (fn(pt[0]),), description)


def affine_map(p: Number, q: Number, description: str = "") -> SelfMap:
    p, q = _num(p), _num(q)
    return SelfMap(lambda pt: tuple(p * c + q for c in pt),
                   description or f"x -> {p}*x + {q}")


def constant_map(value) -> SelfMap:
    v = as_point(value)
    return SelfMap(lambda pt: v, f"constant {v}")


@dataclass(frozen=True)
class PairViolation:
    x: Point
    y: Point
    lhs: Optional[Number]
    rhs: Optional[Number]


@dataclass
class ContractionReport:
    condition: str
    pairs_checked: int
    violations: list = field(default_factory=list)
    max_ratio: Optional[Number] = None
    a2_within_half_b: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return not self.violations


def check_edge_preservation(f: SelfMap, g: SpaceGraph, sample) -> ContractionReport:
    """For every sampled directed edge (x, y), require (fx, fy) to be an edge."""
    violations = []
    checked = 0
    for x, y in sample:
        if not has_edge(g, x, y):
            continue
        checked += 1
        if not has_edge(g, f(x), f(y)):
            violations.append(PairViolation(x, y, None, None))
    return ContractionReport("edge-preservation", checked, violations)


def _edge_test(use_undirected: bool):
    return has_undirected_edge if use_undirected else has_edge


def check_banach_condition(f: SelfMap, spec: ModularSpec, g: SpaceGraph,
                           c: BanachConstants, sample,
                           use_undirected: bool = False,
                           backend: Optional[Backend] = None) -> ContractionReport:
    """Sample the displacement inequality on edge pairs.

    lhs = rho(b(fx - fy)), rhs = k rho(a(x - y)).  max_ratio is the largest
    lhs/rhs over pairs with rhs > 0 (an empirical contraction factor against
    k; <= 1 everywhere exactly when no violation is possible on the sample).
    """
    be = backend or infer_backend([c.k, c.a, c.b] + [p for pair in sample for p in pair])
    edge = _edge_test(use_undirected)
    violations = []
    checked = 0
    max_ratio = None
    for x, y in sample:
        if not edge(g, x, y):
            continue
        checked += 1
        lhs = rho_gap(spec, c.b, f(x), f(y))
        rhs = c.k * rho_gap(spec, c.a, x, y)
        if rhs > 0:
            ratio = lhs / rhs
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
        if be.violates(lhs, rhs):
            violations.append(PairViolation(x, y, lhs, rhs))
    return ContractionReport("banach", checked, violations, max_ratio)


def check_kannan_condition(f: SelfMap, spec: ModularSpec, g: SpaceGraph,
                           c: KannanConstants, sample,
                           use_undirected: bool = False,
                           backend: Optional[Backend] = None) -> ContractionReport:
    """Sample the self-displacement inequality on edge pairs.

    lhs = rho(b(fx - fy)), rhs = k rho(a1(fx - x)) + l rho(a2(fy - y)).
    """
    be = backend or infer_backend([c.k, c.l, c.a1, c.a2, c.b]
                                  + [p for pair in sample for p in pair])
    edge = _edge_test(use_undirected)
    violations = []
    checked = 0
    max_ratio = None
    for x, y in sample:
        if not edge(g, x, y):
            continue
        checked += 1
        fx, fy = f(x), f(y)
        lhs = rho_gap(spec, c.b, fx, fy)
        rhs = c.k * rho_gap(spec, c.a1, fx, x) + c.l * rho_gap(spec, c.a2, fy, y)
        if rhs > 0:
            ratio = lhs / rhs
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
        if be.violates(lhs, rhs):
            violations.append(PairViolation(x, y, lhs, rhs))
    return ContractionReport("kannan", checked, violations, max_ratio,
                             a2_within_half_b=c.a2_within_half_b)


def estimate_banach_k(f: SelfMap, spec: ModularSpec, g: SpaceGraph,
                      a: Number, b: Number, sample) -> Optional[Number]:
    """Empirical sup of rho(b(fx-fy)) / rho(a(x-y)) over sampled edge pairs.

    None when no sampled edge pair has a positive denominator.  A value below
    1 means the displacement condition holds on this sample with that factor.
    """
    a, b = _num(a), _num(b)
    if not (0 < a < b):
        raise AdmissibilityError(f"need 0 < a < b, got a={a}, b={b}")
    best = None
    for x, y in sample:
        if not has_edge(g, x, y):
            continue
        denom = rho_gap(spec, a, x, y)
        if not denom > 0:
            continue
        ratio = rho_gap(spec, b, f(x), f(y)) / denom
        if best is None or ratio > best:
            best = ratio
    return best


def convex_rescale_banach(k: Number, a: Number, b: Number) -> BanachConstants:
    """Admissible displacement constants from a relaxed triple on a convex modular.

    Requires k, a, b > 0 and b > max(a, a*k).  With c = max(a, a*k) and the
    midpoint pivot a0 = (c+b)/2, returns (k', a0, b) where k' = a*k/a0 < 1.
    Only sound when the modular in use passed the convexity sampler; that
    gate is the caller's duty.
    """
    k, a, b = _num(k), _num(a), _num(b)
    if not (k > 0 and a > 0 and b > 0):
        raise AdmissibilityError("rescaling inputs must be positive")
    c = max(a, a * k)
    if not b > c:
        raise AdmissibilityError(f"need b > max(a, a*k) = {c}, got b={b}")
    a0 = (c + b) / 2
    return BanachConstants(k=a * k / a0, a=a0, b=b)


def convex_rescale_kannan(k: Number, l: Number, a1: Number, a2: Number,
                          b: Number) -> KannanConstants:
    """Admissible self-displacement constants from a relaxed tuple on a convex modular.

    Requires positive inputs with b > 4*max(a1, a2, a1*k, a2*l).  With
    c = 2*max(...) and the endpoint pivot a0 = b/2, returns
    (a1*k/a0, a2*l/a0, a0, a0, b); the new factor sum is below 1 and the new
    k' is below 1/2 (see ``k_below_half`` on the result), which is what the
    uniqueness argument needs.
    """
    k, l, a1, a2, b = (_num(v) for v in (k, l, a1, a2, b))
    if any(not v > 0 for v in (k, l, a1, a2, b)):
        raise AdmissibilityError("rescaling inputs must be positive")
    c = 2 * max(a1, a2, a1 * k, a2 * l)
    if not b > 2 * c:
        raise AdmissibilityError(
            f"need b > 4*max(a1, a2, a1*k, a2*l) = {2 * c}, got b={b}")
    a0 = b / 2
    return KannanConstants(k=a1 * k / a0, l=a2 * l / a0, a1=a0, a2=a0, b=b)
