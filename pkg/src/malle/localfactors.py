"""Tame local cocycle enumeration and the resulting Euler factor polynomials.

A regular local class is a pair (conjugator g, unit m): the local tame group
is generated by an inertia generator tau and a Frobenius Fr with
Fr tau Fr^-1 = tau^m, acting on T through conjugation by g.  A cocycle is
determined by the images (t, y) of (tau, Fr); for abelian T the defining
relation collapses to c_g(t) = t^m with y free.

Irregular (wild or ramified-in-the-tower) places are never enumerated here;
they enter only as caps on externally supplied valuation lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InternalDefect, ValidationError
from .perm import PermGroup, Permutation, ind

ORDERINGS = ("disc_pi", "ram_pi")


@dataclass(frozen=True)
class LocalClass:
    conjugator: Permutation
    unit: int
    pi_ramified: bool = False

    def key(self) -> tuple:
        return (self.conjugator.images, self.unit, self.pi_ramified)


@dataclass(frozen=True)
class Cocycle:
    tau_image: Permutation
    fr_image: Permutation


class EulerFactor:
    """Polynomial with nonnegative rational coefficients, exponent -> value."""

    def __init__(self, coefficients):
        coeffs = {}
        for k, v in dict(coefficients).items():
            k = int(k)
            v = Fraction(v)
            if k < 0 or v < 0:
                raise ValidationError("coefficients must sit at exponents >= 0 "
                                      "and be nonnegative")
            if v != 0:
                coeffs[k] = v
        self.coefficients = dict(sorted(coeffs.items()))

    def constant_term(self) -> Fraction:
        return self.coefficients.get(0, Fraction(0))

    def min_positive_exponent(self) -> int | None:
        exps = [k for k in self.coefficients if k > 0]
        return min(exps) if exps else None

    def coefficient(self, k: int) -> Fraction:
        return self.coefficients.get(k, Fraction(0))

    def mass(self) -> Fraction:
        return sum(self.coefficients.values(), Fraction(0))

    def evaluate(self, x: float) -> float:
        return sum(float(v) * x ** k for k, v in self.coefficients.items())

    def is_one(self) -> bool:
        return self.coefficients == {0: Fraction(1)}

    def to_json(self) -> dict:
        return {str(k): _rat_str(v) for k, v in self.coefficients.items()}

    @classmethod
    def from_json(cls, record) -> "EulerFactor":
        return cls({int(k): _parse_rat(v) for k, v in record.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, EulerFactor) and \
            self.coefficients == other.coefficients

    def __repr__(self) -> str:
        terms = [f"{v}*x^{k}" if k else f"{v}" for k, v in self.coefficients.items()]
        return "EulerFactor(" + " + ".join(terms or ["0"]) + ")"


def _rat_str(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _parse_rat(text) -> Fraction:
    return Fraction(str(text))


def _check_regular(T: PermGroup, cls: LocalClass) -> int:
    if cls.pi_ramified:
        raise ValidationError(
            "irregular places are handled only through disc_caps")
    if not T.is_abelian():
        raise ValidationError("only abelian T is supported in enumeration")
    if cls.conjugator.degree != T.degree:
        raise ValidationError("conjugator degree mismatch")
    if not T.normalizes(cls.conjugator, T.elements):
        raise ValidationError("conjugator does not normalize T")
    e = T.exponent()
    if e > 1 and gcd(cls.unit, e) != 1:
        raise ValidationError(f"unit {cls.unit} not coprime to exponent {e}")
    return e


def valid_tau_images(T: PermGroup, cls: LocalClass) -> list[Permutation]:
    """Solutions t of the tame relation c_g(t) = t^m inside T."""
    e = _check_regular(T, cls)
    g = cls.conjugator
    gi = g.inverse()
    m = cls.unit % e if e > 1 else 1
    return [t for t in T.sorted_elements() if g * t * gi == t ** m]


def z1_enumerate(T: PermGroup, cls: LocalClass) -> list[Cocycle]:
    """All cocycles for a regular class: valid tau images crossed with free y."""
    taus = valid_tau_images(T, cls)
    return [Cocycle(t, y) for t in taus for y in T.sorted_elements()]


def cohomology_sizes(T: PermGroup, cls: LocalClass) -> dict:
    """Cardinalities {z1, b1, h1, h0, z1_ur, h1_ur} for a regular class."""
    e = _check_regular(T, cls)
    g, gi = cls.conjugator, cls.conjugator.inverse()
    h0 = sum(1 for t in T.elements if g * t * gi == t)
    z1 = len(valid_tau_images(T, cls)) * T.order
    b1 = T.order // h0
    if T.order % h0 or z1 % b1:
        raise InternalDefect("coboundary count fails to divide")
    sizes = {"z1": z1, "b1": b1, "h1": z1 // b1, "h0": h0,
             "z1_ur": T.order, "h1_ur": h0}
    return sizes


def cocycle_weight(t: Permutation, ordering: str) -> int:
    if ordering == "disc_pi":
        return ind(t)
    if ordering == "ram_pi":
        return 0 if t.is_identity() else 1
    raise ValidationError(f"unknown ordering {ordering!r}; use one of {ORDERINGS}")


def euler_factor(T: PermGroup, cls: LocalClass, ordering: str = "disc_pi") -> EulerFactor:
    """(1/|T|) sum of x^weight over all cocycles of the class.

    The free Frobenius coordinate cancels the 1/|T| normalization, so the
    coefficients are the plain counts of valid tau images by weight and the
    constant term is exactly 1.
    """
    taus = valid_tau_images(T, cls)
    counts: dict[int, int] = {}
    for t in taus:
        w = cocycle_weight(t, ordering)
        counts[w] = counts.get(w, 0) + 1
    factor = EulerFactor({k: Fraction(v) for k, v in counts.items()})
    if factor.constant_term() != 1:
        raise InternalDefect("regular Euler factor must have constant term 1")
    return factor


def disc_caps(T: PermGroup, cls: LocalClass, valuations) -> dict:
    """Min/max caps for an irregular place from its attainable valuations.

    Wild and tower-ramified places have no first-principles enumeration here,
    so the caller supplies the attainable valuations and we cap both ways.
    """
    if not cls.pi_ramified:
        raise ValidationError("disc_caps applies to irregular classes only")
    vals = [int(v) for v in valuations]
    if not vals:
        raise ValidationError("need at least one attainable valuation")
    return {"lower_exponent": min(vals), "upper_exponent": max(vals)}


def factor_record(T: PermGroup, cls: LocalClass, ordering: str = "disc_pi") -> dict:
    """JSON record for one local factor."""
    return {
        "class": {
            "conjugator": cls.conjugator.one_indexed(),
            "unit": cls.unit,
            "pi_ramified": cls.pi_ramified,
        },
        "ordering": ordering,
        "coefficients": euler_factor(T, cls, ordering).to_json(),
    }
