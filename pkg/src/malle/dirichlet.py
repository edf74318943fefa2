"""Frobenian Euler-product analysis.

A family assigns one Euler factor polynomial to each Frobenius class (with a
rational class weight) plus finitely many per-prime irregular overrides.  The
pole data (a, b), exact coefficient expansion, zeta-regularized residual
estimates, and the Tauberian constant all live here.

Expansion arithmetic is exact (integers or Fractions); only the residual
estimates and the predicted constant use floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ResourceCapError, ValidationError
from .localfactors import EulerFactor, euler_factor, LocalClass
from .perm import PermGroup
from .twist import TwistGroup

EXPAND_MEMORY_CAP = 200_000_000  # coefficient count guard


@dataclass(frozen=True)
class FamilyClass:
    factor: EulerFactor
    weight: Fraction
    label: str = ""


class FrobenianFamily:
    """Weighted Frobenius classes of Euler factors with irregular overrides."""

    def __init__(self, classes, irregular_overrides=(), exponent: int | None = None):
        self.classes = tuple(FamilyClass(c.factor, Fraction(c.weight), c.label)
                             if isinstance(c, FamilyClass)
                             else FamilyClass(c[0], Fraction(c[1]),
                                              c[2] if len(c) > 2 else "")
                             for c in classes)
        if not self.classes:
            raise ValidationError("family needs at least one class")
        total = sum((c.weight for c in self.classes), Fraction(0))
        if total != 1:
            raise ValidationError(f"class weights must sum to 1, got {total}")
        if any(c.weight <= 0 for c in self.classes):
            raise ValidationError("class weights must be positive")
        for c in self.classes:
            if c.factor.constant_term() != 1:
                raise ValidationError(
                    "regular class factors must have constant term 1")
        self.irregular_overrides = tuple(
            (int(p), f) for p, f in irregular_overrides)
        seen = [p for p, _ in self.irregular_overrides]
        if len(seen) != len(set(seen)):
            raise ValidationError("duplicate irregular override prime")
        self.exponent = exponent

    def override_map(self) -> dict[int, EulerFactor]:
        return dict(self.irregular_overrides)

    # -- class assignment ----------------------------------------------------

    def class_for_prime(self, p: int, assignment) -> EulerFactor:
        """Resolve the factor at a regular prime.

        ``assignment`` is "all" (single-class families), "mod-e" (class
        labels are unit residues; requires labeled classes and an exponent),
        or a callable p -> class index.
        """
        if assignment == "all":
            if len(self.classes) != 1:
                raise ValidationError('"all" assignment needs a single class')
            return self.classes[0].factor
        if assignment == "mod-e":
            e = self.exponent
            if e is None:
                raise ValidationError('"mod-e" assignment needs an exponent')
            if e > 1 and math.gcd(p, e) != 1:
                # irregular place with no override: forced unramified
                return EulerFactor({0: 1})
            label = str(p % e) if e > 1 else "1"
            for c in self.classes:
                if c.label == label:
                    return c.factor
            raise ValidationError(
                f"no class labeled {label!r} for prime {p} mod {e}")
        if callable(assignment):
            return self.classes[assignment(p)].factor
        raise ValidationError(f"unknown assignment {assignment!r}")

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "classes": [{"label": c.label,
                         "weight": _rat(c.weight),
                         "coefficients": c.factor.to_json()}
                        for c in self.classes],
            "irregular_overrides": [{"prime": p, "coefficients": f.to_json()}
                                    for p, f in self.irregular_overrides],
        }

    @classmethod
    def from_json(cls, record) -> "FrobenianFamily":
        classes = [FamilyClass(EulerFactor.from_json(c["coefficients"]),
                               Fraction(str(c["weight"])), c.get("label", ""))
                   for c in record["classes"]]
        overrides = [(int(o["prime"]), EulerFactor.from_json(o["coefficients"]))
                     for o in record.get("irregular_overrides", [])]
        return cls(classes, overrides, exponent=record.get("exponent"))


def _rat(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else \
        f"{v.numerator}/{v.denominator}"


def family_from_action(T: PermGroup, gamma: TwistGroup,
                       ordering: str = "disc_pi") -> FrobenianFamily:
    """Uniformly weighted family of local factors, one class per action pair.

    Uniform weights model equidistribution of Frobenius over the acting
    group.  Class labels carry the unit residue, so trivially-acting families
    over the rationals can use the mod-e prime assignment.
    """
    classes = []
    w = Fraction(1, gamma.order)
    conj_trivial = all(p.conjugator.is_identity() for p in gamma.pairs)
    for pair in gamma.sorted_pairs():
        f = euler_factor(T, LocalClass(pair.conjugator, pair.unit), ordering)
        label = str(pair.unit % gamma.exponent) if conj_trivial else repr(pair)
        classes.append(FamilyClass(f, w, label))
    return FrobenianFamily(classes, exponent=gamma.exponent)


# -- pole data ----------------------------------------------------------------


@dataclass(frozen=True)
class PoleData:
    a: int | None  # None encodes an empty ramified spectrum (no pole)
    b: Fraction

    def to_json(self) -> dict:
        return {"a": self.a, "b": _rat(self.b)}


def aq_bq(family: FrobenianFamily) -> PoleData:
    """Least ramified exponent across classes and the mean of its coefficient.

    Returns a = None (infinity) when every regular factor is constant 1; the
    finitely many overrides never influence the pole.
    """
    a = None
    for c in family.classes:
        m = c.factor.min_positive_exponent()
        if m is not None and (a is None or m < a):
            a = m
    if a is None:
        return PoleData(None, Fraction(1))
    b = sum((c.weight * c.factor.coefficient(a) for c in family.classes),
            Fraction(0))
    return PoleData(a, b)


# -- exact expansion -----------------------------------------------------------


@dataclass
class DirichletCoefficients:
    bound: int
    values: list  # index 0 unused; values[n] for 1 <= n <= bound

    def value(self, n: int):
        if not 1 <= n <= self.bound:
            raise ValidationError(f"index {n} outside 1..{self.bound}")
        return self.values[n]

    def partial_sum(self, X: int):
        """Sum of values at n <= X."""
        if X > self.bound:
            raise ValidationError(f"X={X} beyond expansion bound {self.bound}")
        return sum(self.values[1:X + 1])

    def partial_sums_at(self, grid):
        out = []
        run = 0
        prev = 0
        for X in sorted(int(x) for x in grid):
            if X > self.bound:
                raise ValidationError(f"grid point {X} beyond bound")
            for n in range(prev + 1, X + 1):
                run += self.values[n]
            prev = X
            out.append((X, run))
        return out


def _local_coefficients(family: FrobenianFamily, P: int, assignment):
    """(prime, {exponent: value}) for every prime that can contribute below N."""
    overrides = family.override_map()
    out = []
    for p in kernels.primes_up_to(P).tolist():
        f = overrides.get(p)
        if f is None:
            f = family.class_for_prime(p, assignment)
        out.append((p, f))
    for p, f in sorted(overrides.items()):
        if p > P:
            out.append((p, f))
    return out


def expand(family: FrobenianFamily, prime_bound: int, coeff_bound: int,
           assignment="all") -> DirichletCoefficients:
    """Exact coefficients of the truncated Euler product up to coeff_bound.

    Regular primes beyond prime_bound contribute the factor 1.  The result is
    multiplicative whenever all constant terms are 1; an override with
    constant term != 1 scales every coefficient it does not divide.
    """
    N = int(coeff_bound)
    if N < 1:
        raise ValidationError("coefficient bound must be >= 1")
    if N > EXPAND_MEMORY_CAP:
        raise ResourceCapError(f"coefficient bound {N} exceeds memory cap")
    locals_ = _local_coefficients(family, int(prime_bound), assignment)

    if _all_unit_constant_integer(locals_):
        return _expand_int(locals_, N)
    return _expand_exact(locals_, N)


def _all_unit_constant_integer(locals_) -> bool:
    maxc = 1
    for _, f in locals_:
        if f.constant_term() != 1:
            return False
        for k, v in f.coefficients.items():
            if k > 0:
                if v.denominator != 1:
                    return False
                maxc = max(maxc, abs(int(v)))
    # worst-case product over <= log2(N) prime-power factors must fit int64
    return maxc ** 40 < 2 ** 62 or maxc <= 1


def _expand_int(locals_, N: int) -> DirichletCoefficients:
    primes, kmaxes, flat = [], [], []
    for p, f in locals_:
        if p > N:
            continue
        ks = [k for k in f.coefficients if k > 0]
        kmax = max(ks) if ks else 0
        primes.append(p)
        kmaxes.append(kmax)
        flat.extend(int(f.coefficient(k)) for k in range(1, kmax + 1))
    vals = kernels.expand_multiplicative_int(
        N,
        np.asarray(primes, dtype=np.int64),
        np.asarray(kmaxes, dtype=np.int64),
        np.asarray(flat, dtype=np.int64))
    return DirichletCoefficients(N, vals.tolist())


def _expand_exact(locals_, N: int) -> DirichletCoefficients:
    """Fraction-exact path; handles non-1 constant terms (overrides).

    Factors with constant c0 != 0 are normalized to constant 1 and the
    product of the constants is restored afterwards; a factor with constant 0
    forces every coefficient off its prime's multiples to vanish.
    """
    base = Fraction(1)
    zero_const_primes = []
    normalized = []
    for p, f in locals_:
        c0 = f.constant_term()
        if c0 == 0:
            zero_const_primes.append(p)
            normalized.append((p, dict(f.coefficients)))
        else:
            base *= c0
            normalized.append(
                (p, {k: v / c0 for k, v in f.coefficients.items() if k > 0}))

    vals = [Fraction(0)] * (N + 1)
    vals[1] = Fraction(1)
    for p, coeffs in normalized:
        if p > N:
            continue
        sources = [m for m in range(1, N + 1) if m % p]
        pk = p
        k = 1
        maxk = max([k for k in coeffs if k > 0], default=0)
        while pk <= N and k <= maxk:
            ck = coeffs.get(k, Fraction(0))
            if ck:
                for m in sources:
                    if m * pk > N:
                        break
                    vals[m * pk] = vals[m] * ck
            pk *= p
            k += 1

    if base != 1:
        vals = [v * base for v in vals]
    for q in zero_const_primes:
        for n in range(1, N + 1):
            if n % q:
                vals[n] = Fraction(0)

    out = [int(v) if v.denominator == 1 else v for v in vals]
    out[0] = 0
    return DirichletCoefficients(N, out)


# -- float-side estimates -------------------------------------------------------


def euler_partial_product(family: FrobenianFamily, s: float, prime_bound: int,
                          assignment="all") -> float:
    """prod_{p <= P} Q_p(p^-s), no zeta regularization."""
    out = 1.0
    for p, f in _local_coefficients(family, int(prime_bound), assignment):
        out *= f.evaluate(float(p) ** (-s))
    return out


def _regularized_product(family, s, prime_bound, assignment) -> float:
    pole = aq_bq(family)
    if pole.a is None:
        return euler_partial_product(family, s, prime_bound, assignment)
    a, b = pole.a, float(pole.b)
    out = 1.0
    for p, f in _local_coefficients(family, int(prime_bound), assignment):
        x = float(p) ** (-s)
        out *= f.evaluate(x) * (1.0 - float(p) ** (-a * s)) ** b
    return out


def zeta_factor_estimate(family: FrobenianFamily, s: float, prime_bound: int,
                         assignment="all") -> float:
    """Residual factor estimate right of the pole: Q_p times zeta-local factors."""
    pole = aq_bq(family)
    if pole.a is not None and s <= 1.0 / pole.a:
        raise ValidationError(f"s={s} must lie strictly right of 1/{pole.a}")
    return _regularized_product(family, s, prime_bound, assignment)


def g_at_pole(family: FrobenianFamily, prime_bound: int,
              assignment="all") -> float:
    """Residual factor evaluated at the pole itself.

    The regularized product still converges there (each local factor is
    1 + O(p^-(a+1)/a)); convergence is slow, so use a generous prime bound.
    """
    pole = aq_bq(family)
    s = 1.0 / pole.a if pole.a is not None else 1.0
    return _regularized_product(family, s, prime_bound, assignment)


@dataclass(frozen=True)
class AsymptoticPrediction:
    c: float | None
    X_power: Fraction
    log_power: Fraction
    degenerate: bool = False

    def evaluate(self, X: float) -> float:
        if self.degenerate or self.c is None:
            raise ValidationError("degenerate prediction has no main term")
        return self.c * X ** float(self.X_power) * \
            math.log(X) ** float(self.log_power)

    def to_json(self) -> dict:
        return {"c": self.c,
                "X_power": _rat(self.X_power),
                "log_power": _rat(self.log_power),
                "degenerate": self.degenerate}


def delange_predict(a, b, G_at_pole: float, residue: float = 1.0
                    ) -> AsymptoticPrediction:
    """Main-term record c * X^(1/a) * (log X)^(b-1) from the pole data.

    c = G * residue^b / (a^b * Gamma(b)).  Nonpositive-integer b yields the
    degenerate marker (the partial sums are then o(X^(1/a) (log X)^eps)).
    """
    if a is None:
        return AsymptoticPrediction(None, Fraction(0), Fraction(0), degenerate=True)
    bq = Fraction(b)
    if bq <= 0 and bq.denominator == 1:
        return AsymptoticPrediction(None, Fraction(1, a), bq - 1, degenerate=True)
    bf = float(bq)
    c = G_at_pole * residue ** bf / (float(a) ** bf * math.gamma(bf))
    return AsymptoticPrediction(c, Fraction(1, a), bq - 1)


def partial_sum_compare(coeffs: DirichletCoefficients,
                        prediction: AsymptoticPrediction, grid) -> list[dict]:
    """(X, actual, predicted, ratio) rows over the grid; trend left to the caller."""
    rows = []
    for X, actual in coeffs.partial_sums_at(grid):
        if prediction.degenerate:
            predicted = None
            ratio = None
        else:
            predicted = prediction.evaluate(X)
            ratio = float(actual) / predicted if predicted else math.inf
        rows.append({"X": X, "actual": actual, "predicted": predicted,
                     "ratio": ratio})
    return rows
