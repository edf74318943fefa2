"""Finite-abelian-group side of the Selmer machinery: cyclic-subgroup posets
and their Mobius function, annihilators under perfect pairings, the
product formula for Selmer/dual-Selmer ratios, the inclusion-exclusion
coefficients, and (a, b) data for restricted local-condition families.

Local cohomology groups are abstract finite abelian groups with a declared
unramified subgroup and inertia-restriction quotient; nothing here touches
p-adic fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .abgroup import FiniteAbelianGroup
from .errors import ResourceCapError, ValidationError

CYCLIC_CLOSED_FORM_CAP = 10_000
RECURSIVE_ORACLE_CAP = 60


@dataclass(frozen=True)
class CyclicNode:
    """A cyclic subgroup, carried as a generator plus its span."""

    generator: tuple
    order: int
    elements: frozenset

    def __le__(self, other: "CyclicNode") -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: "CyclicNode") -> bool:
        return self.elements < other.elements


def cyclic_subgroups(A: FiniteAbelianGroup) -> list[CyclicNode]:
    """All cyclic subgroups of A, trivial included, duplicate-free."""
    seen = {}
    for x in A.elements():
        span = A.span([x])
        if span not in seen:
            seen[span] = CyclicNode(x, A.element_order(x), span)
    return sorted(seen.values(), key=lambda node: (node.order, sorted(node.elements)))


def mobius_int(n: int) -> int:
    """Mobius function on the positive integers."""
    if n < 1:
        raise ValidationError("mobius argument must be positive")
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def mobius(lower: CyclicNode, upper: CyclicNode) -> int:
    """Poset Mobius value for cyclic subgroups of a common cyclic group.

    Closed form: mu(|upper|/|lower|) when lower <= upper, else 0.
    """
    if upper.order > CYCLIC_CLOSED_FORM_CAP:
        raise ResourceCapError("cyclic subgroup too large for the closed form cap")
    if not lower <= upper:
        return 0
    return mobius_int(upper.order // lower.order)


def mobius_recursive(lower: CyclicNode, upper: CyclicNode, poset) -> int:
    """Defining recursion over an explicit poset of CyclicNodes (test oracle).

    Exponential in the interval size; capped to small groups.
    """
    if upper.order > RECURSIVE_ORACLE_CAP:
        raise ResourceCapError("recursive oracle capped at order 60")
    memo: dict = {}

    def mu(lo: CyclicNode, hi: CyclicNode) -> int:
        if not lo <= hi:
            return 0
        if lo.elements == hi.elements:
            return 1
        key = (lo.elements, hi.elements)
        if key in memo:
            return memo[key]
        total = 0
        for mid in poset:
            if lo < mid and mid <= hi:
                total += mu(mid, hi)
        memo[key] = -total
        return -total

    return mu(lower, upper)


# -- pairings -------------------------------------------------------------------


class Pairing:
    """Bilinear map left x right -> Z/n given by an integer matrix."""

    def __init__(self, left: FiniteAbelianGroup, right: FiniteAbelianGroup,
                 matrix, modulus: int):
        self.left = left
        self.right = right
        self.modulus = int(modulus)
        self.matrix = [[int(v) % self.modulus for v in row] for row in matrix]
        if len(self.matrix) != len(left.invariant_factors):
            raise ValidationError("matrix row count must match the left rank")
        for row in self.matrix:
            if len(row) != len(right.invariant_factors):
                raise ValidationError("matrix column count must match the right rank")
        for i, di in enumerate(left.invariant_factors):
            for j, dj in enumerate(right.invariant_factors):
                v = self.matrix[i][j]
                if (v * di) % self.modulus or (v * dj) % self.modulus:
                    raise ValidationError(
                        "pairing matrix is not well-defined on the given groups")
        self.perfect = self._check_perfect()

    def value(self, x: tuple, y: tuple) -> int:
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = self.matrix[i]
                for j, yj in enumerate(y):
                    total += xi * row[j] * yj
        return total % self.modulus

    def _check_perfect(self) -> bool:
        left_kernel = [x for x in self.left.elements()
                       if all(self.value(x, y) == 0 for y in self.right.elements())]
        right_kernel = [y for y in self.right.elements()
                        if all(self.value(x, y) == 0 for x in self.left.elements())]
        return len(left_kernel) == 1 and len(right_kernel) == 1


def annihilator(P: Pairing, N) -> frozenset:
    """{y in right : <x, y> = 0 for all x in N}; requires a perfect pairing."""
    if not P.perfect:
        raise ValidationError("pairing is not perfect")
    N = list(N)
    for x in N:
        if len(x) != len(P.left.invariant_factors):
            raise ValidationError("annihilator argument must live in the left group")
    return frozenset(y for y in P.right.elements()
                     if all(P.value(x, y) == 0 for x in N))


def standard_pairing(A: FiniteAbelianGroup) -> Pairing:
    """The canonical perfect pairing on A x A into Z/exponent."""
    e = A.exponent
    k = len(A.invariant_factors)
    matrix = [[(e // d if i == j else 0) for j in range(k)]
              for i, d in enumerate(A.invariant_factors)]
    return Pairing(A, A, matrix, e)


# -- Selmer ratio formula ---------------------------------------------------------


def wiles_rhs(locals_, global_H0_T: int, global_H0_Tstar: int) -> Fraction:
    """Predicted Selmer/dual-Selmer size ratio from local densities.

    locals_ is an iterable of {"L_size": .., "H0_size": ..}; unramified places
    contribute the factor 1 and may simply be omitted.
    """
    if global_H0_T <= 0 or global_H0_Tstar <= 0:
        raise ValidationError("global fixed-point counts must be positive")
    out = Fraction(global_H0_T, global_H0_Tstar)
    for loc in locals_:
        l_size = int(loc["L_size"])
        h0 = int(loc["H0_size"])
        if h0 <= 0:
            raise ValidationError("local H0 size must be positive")
        out *= Fraction(l_size, h0)
    return out


# -- inclusion-exclusion coefficients ----------------------------------------------


class ModeledLocalGroup:
    """A local cohomology stand-in: finite abelian H with H_ur and H -> H/H_ur.

    The inertia restriction is modeled as the quotient by the unramified
    subgroup; cosets are keyed by their minimal member.
    """

    def __init__(self, group: FiniteAbelianGroup, unramified,
                 conditions=None):
        self.group = group
        self.unramified = frozenset(unramified)
        if group.zero() not in self.unramified:
            raise ValidationError("unramified subgroup must contain 0")
        if self.unramified != group.span(list(self.unramified)):
            raise ValidationError("unramified subset is not a subgroup")
        self.L = frozenset(conditions) if conditions is not None \
            else frozenset(group.elements())
        if not self.unramified <= self.L:
            raise ValidationError("local conditions must contain the unramified part")
        if self.L != group.span(list(self.L)):
            raise ValidationError("local conditions must form a subgroup")
        self._coset_key = {}
        for x in group.elements():
            self._coset_key[x] = min(group.add(x, u) for u in self.unramified)

    def res_I(self, x: tuple) -> tuple:
        """Inertia restriction: the coset key of x mod the unramified part."""
        return self._coset_key[x]

    def res_I_subgroup(self, S) -> frozenset:
        return frozenset(self.res_I(x) for x in S)

    def inertia_span(self, x: tuple) -> frozenset:
        """Cyclic subgroup of H/H_ur generated by the restriction of x."""
        out = set()
        cur = self.group.zero()
        while True:
            key = self.res_I(cur)
            if key in out:
                break
            out.add(key)
            cur = self.group.add(cur, x)
        return frozenset(out)

    def is_quotient_subgroup(self, keys) -> bool:
        keys = frozenset(keys)
        if self.res_I(self.group.zero()) not in keys:
            return False
        return all(self.res_I(self.group.add(a, b)) in keys
                   for a in keys for b in keys)


def _frattini_order(n: int) -> int:
    rad = 1
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            rad *= d
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        rad *= m
    return n // rad


def coefficient_c(local: ModeledLocalGroup, f: tuple,
                  restricted_annihilator) -> Fraction:
    """Inclusion-exclusion coefficient attached to a dual class and a local element.

    ``restricted_annihilator`` is the inertia image of the annihilator of the
    restricted dual class, supplied explicitly as a subset of H/H_ur (the
    interaction of restriction with annihilators is the caller's model).
    Satisfies c = 1 when the annihilator is everything and |c| <= 1 always.
    """
    if f not in local.L:
        raise ValidationError("element outside the local conditions")
    W = frozenset(restricted_annihilator)
    inertia_keys = local.res_I_subgroup(local.group.elements())
    if not W <= inertia_keys:
        raise ValidationError("restricted annihilator must live in the quotient")

    if not local.is_quotient_subgroup(W):
        raise ValidationError("restricted annihilator must be a subgroup")

    lam = local.inertia_span(f)
    inter = lam & W
    mob = mobius_int(len(lam) // len(inter))
    if mob == 0:
        return Fraction(0)

    # Frattini subgroup of the cyclic group lam: the unique subgroup of
    # order |lam|/rad(|lam|), i.e. the keys whose order divides that
    phi_order = _frattini_order(len(lam))
    phi = frozenset(k for k in lam
                    if phi_order % _coset_order(local, k, lam) == 0)

    numer = 0
    denom = 0
    for g in sorted(local.L):
        span_g = local.inertia_span(g)
        if span_g == lam:
            denom += 1
        if _join(span_g, phi, local) == inter:
            numer += 1
    if denom == 0:
        raise ValidationError("no local element realizes the inertia subgroup")
    return Fraction(mob) * Fraction(numer, denom)


def _coset_order(local: ModeledLocalGroup, key: tuple, lam: frozenset) -> int:
    """Order of a coset key inside the quotient subgroup lam."""
    cur = key
    n = 1
    zero_key = local.res_I(local.group.zero())
    while cur != zero_key:
        cur = local.res_I(local.group.add(cur, key))
        n += 1
        if n > len(lam):
            raise ValidationError("element order exceeded subgroup size")
    return n


def _join(a: frozenset, b: frozenset, local: ModeledLocalGroup) -> frozenset:
    out = set()
    for x in a:
        for y in b:
            out.add(local.res_I(local.group.add(x, y)))
    return frozenset(out)


# -- restricted family invariants ----------------------------------------------------


@dataclass(frozen=True)
class ConditionClass:
    """One Frobenius class of a local-condition family.

    ``members`` are opaque element keys of the modeled H^1; ``unramified``
    must be a subset of members; ``orderings`` maps an ordering name to a
    per-member nonnegative valuation that vanishes exactly on the unramified
    part.
    """

    weight: Fraction
    members: frozenset
    unramified: frozenset
    h0: int
    orderings: dict
    label: str = ""

    def __post_init__(self):
        if not self.unramified <= self.members:
            raise ValidationError("unramified part must sit inside the conditions")
        if self.h0 <= 0:
            raise ValidationError("H0 size must be positive")
        for name, values in self.orderings.items():
            for m in self.members:
                if m not in values:
                    raise ValidationError(f"ordering {name!r} misses a member")
                if (values[m] == 0) != (m in self.unramified):
                    raise ValidationError(
                        f"ordering {name!r} must vanish exactly off ramification")


@dataclass(frozen=True)
class LocalConditionFamily:
    classes: tuple
    irregular_overrides: tuple = field(default=())

    def __post_init__(self):
        total = sum((c.weight for c in self.classes), Fraction(0))
        if total != 1:
            raise ValidationError(f"class weights must sum to 1, got {total}")


@dataclass(frozen=True)
class InvariantPair:
    a_inv: int | None  # None encodes infinity
    b_inv: Fraction

    def to_json(self) -> dict:
        return {"a_inv": self.a_inv,
                "b_inv": f"{self.b_inv.numerator}/{self.b_inv.denominator}"}


def ab_inv(family: LocalConditionFamily, ordering: str) -> InvariantPair:
    """Least ramified valuation across classes and the weighted density at it.

    a_inv is None (infinity) when every class is unramified-only; b_inv is
    then the weighted average of |L ∩ H_ur|/|H^0|, which is 1 for families
    honoring the unramified-containment hypothesis.
    """
    a = None
    for c in family.classes:
        values = c.orderings[ordering]
        for m in c.members - c.unramified:
            v = values[m]
            if a is None or v < a:
                a = v
    if a is None:
        b = sum((c.weight * Fraction(len(c.members & c.unramified), c.h0)
                 for c in family.classes), Fraction(0))
        return InvariantPair(None, b)
    b = Fraction(0)
    for c in family.classes:
        values = c.orderings[ordering]
        hits = sum(1 for m in c.members if values[m] == a)
        b += c.weight * Fraction(hits, c.h0)
    return InvariantPair(a, b)


def trivial_condition_family(T, gamma) -> LocalConditionFamily:
    """The unrestricted family for a twisted action: one class per pair.

    Members model the full local cohomology at each Frobenius class: valid
    inertia images crossed with the coboundary-quotiented Frobenius
    coordinate.  The disc and ram orderings are both attached.
    """
    from .localfactors import LocalClass, cohomology_sizes, valid_tau_images
    from .perm import ind as perm_ind

    classes = []
    w = Fraction(1, gamma.order)
    for pair in gamma.sorted_pairs():
        cls = LocalClass(pair.conjugator, pair.unit)
        sizes = cohomology_sizes(T, cls)
        h0 = sizes["h0"]
        members = set()
        unramified = set()
        disc = {}
        ram = {}
        for t in valid_tau_images(T, cls):
            for j in range(h0):
                key = (t.images, j)
                members.add(key)
                if t.is_identity():
                    unramified.add(key)
                disc[key] = perm_ind(t)
                ram[key] = 0 if t.is_identity() else 1
        classes.append(ConditionClass(
            weight=w, members=frozenset(members), unramified=frozenset(unramified),
            h0=h0, orderings={"disc": disc, "ram": ram}, label=repr(pair)))
    return LocalConditionFamily(tuple(classes))
