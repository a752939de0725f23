"""Points and modular functionals: evaluation plus sampled falsification of the axioms.

A modular assigns every point of a real coordinate space a nonnegative size
that vanishes exactly at the origin, is symmetric under negation, and is
subadditive along convex combinations; unlike a norm it need not be
homogeneous.  The checkers below are falsifiers over finite samples: an empty
violation list means "no counterexample found on this sample", never a proof.

Builtin families (all evaluate coordinatewise and sum):

* ``abs-norm``       rho(x) = sum_i |x_i|
* ``power``          rho(x) = sum_i |x_i|^p          (p >= 1)
* ``weighted-power`` rho(x) = sum_i w_i |x_i|^p      (w_i > 0, p >= 1)
* ``custom``         any user function, gated by the same axiom sampler

All three builtin families satisfy the convex form of the subadditivity axiom
for p >= 1, so their ``convex`` flag defaults to True.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .backend import Backend, Number, infer_backend
from .errors import DimensionMismatchError, NonFiniteError

Point = tuple  # tuple[Number, ...]

FAMILIES = ("abs-norm", "power", "weighted-power", "custom")

COEFF_SUM_TOL = 1e-12


def as_point(coords) -> Point:
    """Coerce a scalar or a sequence of numbers into a validated point tuple."""
    if isinstance(coords, (int, float, Fraction)):
        coords = (coords,)
    pt = tuple(coords)
    if not pt:
        raise ValueError("a point needs at least one coordinate")
    for c in pt:
        _require_finite(c)
    return pt


def _require_finite(c) -> None:
    if isinstance(c, float) and not math.isfinite(c):
        raise NonFiniteError(f"non-finite coordinate {c!r}")


def require_point(x) -> Point:
    if not isinstance(x, tuple) or not x:
        raise TypeError(f"expected a nonempty point tuple, got {x!r}")
    for c in x:
        _require_finite(c)
    return x


def point_sub(x: Point, y: Point) -> Point:
    if len(x) != len(y):
        raise DimensionMismatchError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(a - b for a, b in zip(x, y))


def point_scale(c: Number, x: Point) -> Point:
    return tuple(c * a for a in x)


def zero_like(x: Point) -> Point:
    return tuple(c * 0 for c in x)


@dataclass(frozen=True)
class ModularSpec:
    """Descriptor of a modular functional (builtin family or custom function)."""

    family: str
    p: Number = 1
    weights: Optional[tuple] = None
    convex: bool = True
    fn: Optional[Callable[[Point], Number]] = None
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown modular family {self.family!r}")
        if self.family in ("power", "weighted-power") and not self.p >= 1:
            raise ValueError(f"exponent must be >= 1, got {self.p!r}")
        if self.family == "weighted-power":
            if not self.weights:
                raise ValueError("weighted-power needs per-coordinate weights")
            object.__setattr__(self, "weights", tuple(self.weights))
            if any(not w > 0 for w in self.weights):
                raise ValueError("weights must be strictly positive")
        if self.family == "custom" and self.fn is None:
            raise ValueError("custom family needs an evaluation function")


def abs_norm() -> ModularSpec:
    return ModularSpec("abs-norm", p=1, convex=True, label="sum|x_i|")


def power(p: Number) -> ModularSpec:
    return ModularSpec("power", p=p, convex=True, label=f"sum|x_i|^{p}")


def weighted_power(p: Number, weights: Sequence[Number]) -> ModularSpec:
    return ModularSpec("weighted-power", p=p, weights=tuple(weights), convex=True,
                       label=f"sum w_i|x_i|^{p}")


def custom_modular(fn: Callable[[Point], Number], label: str = "custom",
                   convex: bool = False) -> ModularSpec:
    return ModularSpec("custom", fn=fn, convex=convex, label=label)


def _abs_pow(c: Number, p: Number) -> Number:
    # Integer exponents stay exact for Fraction inputs; anything else goes float.
    a = abs(c)
    if p == 1:
        return a
    ip = int(p)
    if ip == p:
        return a ** ip
    return float(a) ** float(p)


def eval_modular(spec: ModularSpec, x: Point) -> Number:
    """Evaluate rho(x).  Nonnegative for every builtin; rho(0) = 0; rho(-x) = rho(x)."""
    pt = require_point(x)
    if spec.family == "custom":
        return spec.fn(pt)
    if spec.family == "abs-norm":
        return sum(abs(c) for c in pt)
    if spec.family == "power":
        return sum(_abs_pow(c, spec.p) for c in pt)
    if len(spec.weights) != len(pt):
        raise DimensionMismatchError(
            f"point has dimension {len(pt)} but spec has {len(spec.weights)} weights")
    return sum(w * _abs_pow(c, spec.p) for w, c in zip(spec.weights, pt))


def rho_gap(spec: ModularSpec, scale: Number, x: Point, y: Point) -> Number:
    """rho(scale * (x - y)); symmetric in x and y by the negation axiom."""
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    return eval_modular(spec, point_scale(scale, point_sub(require_point(x), require_point(y))))


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: dict


@dataclass
class AxiomReport:
    checks: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _validated_coeffs(coeff_sample) -> list:
    coeffs = []
    for pair in coeff_sample:
        a, b = pair
        # ints are exact: promote so that later halving stays rational
        a = Fraction(a) if isinstance(a, int) else a
        b = Fraction(b) if isinstance(b, int) else b
        if a < 0 or b < 0:
            raise ValueError(f"coefficients must be nonnegative, got ({a!r}, {b!r})")
        if abs((a + b) - 1) > COEFF_SUM_TOL:
            raise ValueError(f"coefficient pair must sum to 1, got ({a!r}, {b!r})")
        coeffs.append((a, b))
    return coeffs


def _sample_pairs(pts):
    # Deterministic O(n) pairing; diversity comes from the caller's sampling.
    if len(pts) == 1:
        return [(pts[0], pts[0])]
    return list(zip(pts, pts[1:] + pts[:1]))


def check_modular_axioms(spec: ModularSpec, sample, coeff_sample,
                         backend: Optional[Backend] = None) -> AxiomReport:
    """Hunt for violations of the four modular axioms and their two consequences.

    ``sample`` is a list of points, ``coeff_sample`` a list of pairs (a, b)
    with a, b >= 0 and a + b = 1.  Checked on the sample:

    * M1  rho(x) >= 0
    * M2  rho(x) = 0 exactly when x = 0 (the zero vector is always probed)
    * M3  rho(-x) = rho(x)
    * M4  rho(a x + b y) <= rho(x) + rho(y)
    * scaling monotonicity: |a| <= |b| implies rho(a x) <= rho(b x)
    * multi-term subadditivity over convex coefficient tuples derived from
      the pairs: (a/2, a/2, b) and (a/2, a/2, b/2, b/2) on sliding windows

    Returns a report with one witness per violated instance.
    """
    pts = [require_point(p) for p in sample]
    if not pts:
        raise ValueError("empty sample")
    coeffs = _validated_coeffs(coeff_sample)
    be = backend or infer_backend(pts)
    rho = lambda q: eval_modular(spec, q)

    violations = []
    checks = 0

    zero = zero_like(pts[0])
    v0 = rho(zero)
    checks += 1
    if not be.close(v0, 0 * v0):
        violations.append(Violation("M2", {"x": zero, "rho": v0}))
    if be.violates(0, v0):
        violations.append(Violation("M1", {"x": zero, "rho": v0}))

    for x in pts:
        vx = rho(x)
        vneg = rho(point_scale(-1, x))
        checks += 3
        if be.violates(0, vx):
            violations.append(Violation("M1", {"x": x, "rho": vx}))
        if x != zero_like(x) and not vx > 0:
            violations.append(Violation("M2", {"x": x, "rho": vx}))
        if not be.close(vx, vneg):
            violations.append(Violation("M3", {"x": x, "rho_x": vx, "rho_neg_x": vneg}))

    for x, y in _sample_pairs(pts):
        rx, ry = rho(x), rho(y)
        for a, b in coeffs:
            combo = tuple(a * cx + b * cy for cx, cy in zip(x, y))
            lhs = rho(combo)
            checks += 1
            if be.violates(lhs, rx + ry):
                violations.append(Violation(
                    "M4", {"x": x, "y": y, "a": a, "b": b, "lhs": lhs, "rhs": rx + ry}))

    for a, b in coeffs:
        lo, hi = (a, b) if a <= b else (b, a)
        for x in pts:
            lhs = rho(point_scale(lo, x))
            rhs = rho(point_scale(hi, x))
            checks += 1
            if be.violates(lhs, rhs):
                violations.append(Violation(
                    "scaling", {"x": x, "lo": lo, "hi": hi, "lhs": lhs, "rhs": rhs}))

    for a, b in coeffs:
        tuples = [(a / 2, a / 2, b), (a / 2, a / 2, b / 2, b / 2)]
        for cs in tuples:
            width = len(cs)
            for i in range(len(pts) - width + 1):
                window = pts[i:i + width]
                combo = tuple(sum(c * w[j] for c, w in zip(cs, window))
                              for j in range(len(window[0])))
                lhs = rho(combo)
                rhs = sum(rho(w) for w in window)
                checks += 1
                if be.violates(lhs, rhs):
                    violations.append(Violation(
                        "multi-term", {"points": tuple(window), "coeffs": cs,
                                       "lhs": lhs, "rhs": rhs}))

    return AxiomReport(checks=checks, violations=violations)


def check_convexity(spec: ModularSpec, sample, coeff_sample,
                    backend: Optional[Backend] = None) -> AxiomReport:
    """Sampled falsifier for the convex form rho(a x + b y) <= a rho(x) + b rho(y)."""
    pts = [require_point(p) for p in sample]
    if not pts:
        raise ValueError("empty sample")
    coeffs = _validated_coeffs(coeff_sample)
    be = backend or infer_backend(pts)
    rho = lambda q: eval_modular(spec, q)

    violations = []
    checks = 0
    for x, y in _sample_pairs(pts):
        rx, ry = rho(x), rho(y)
        for a, b in coeffs:
            combo = tuple(a * cx + b * cy for cx, cy in zip(x, y))
            lhs = rho(combo)
            rhs = a * rx + b * ry
            checks += 1
            if be.violates(lhs, rhs):
                violations.append(Violation(
                    "M4'", {"x": x, "y": y, "a": a, "b": b, "lhs": lhs, "rhs": rhs}))
    return AxiomReport(checks=checks, violations=violations)
