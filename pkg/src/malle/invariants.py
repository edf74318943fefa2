"""Counting invariants: a, the minimal-index set, twisted and plain b, the
modified log exponent B, and lower-bound exponents.

All computations are exact orbit counts on materialized groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import grouptools, twist
from .errors import ValidationError
from .perm import PermGroup, Permutation, conjugacy_classes, ind
from .twist import ActionPair, TwistGroup


@dataclass(frozen=True)
class InvariantReport:
    a: int
    minimal_set: tuple[Permutation, ...]
    b: int
    orbit_detail: tuple[frozenset, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "minimal_set": [t.cycle_string() for t in self.minimal_set],
            "orbits": [sorted(t.cycle_string() for t in orb)
                       for orb in self.orbit_detail],
        }


def a_invariant(T: PermGroup) -> int:
    """Minimum of ind over the nonidentity elements."""
    if T.order <= 1:
        raise ValidationError("group must be nontrivial")
    return min(ind(t) for t in T.elements if not t.is_identity())


def minimal_index_set(T: PermGroup) -> list[Permutation]:
    """The elements of minimal positive index, sorted."""
    a = a_invariant(T)
    return [t for t in T.sorted_elements() if not t.is_identity() and ind(t) == a]


def _check_action(T: PermGroup, gamma: TwistGroup) -> None:
    if gamma.degree != T.degree:
        raise ValidationError("action degree disagrees with the group degree")
    e = T.exponent()
    if gamma.exponent % e != 0 and gamma.exponent != e:
        raise ValidationError(
            f"action exponent {gamma.exponent} incompatible with group exponent {e}")
    for g in gamma.conjugator_projection():
        if not T.normalizes(g, T.elements):
            raise ValidationError(
                f"conjugator {g.cycle_string()} does not normalize the subgroup")


def b_twisted(T: PermGroup, gamma: TwistGroup) -> InvariantReport:
    """Orbit count of the composite action on the minimal-index conjugacy classes.

    For abelian T the classes are singletons, so this counts element orbits.
    """
    _check_action(T, gamma)
    a = a_invariant(T)
    aset = minimal_index_set(T)
    by_conjugacy = not T.is_abelian()
    orbs = twist.orbits(gamma, aset, by_conjugacy=by_conjugacy, ambient=T)
    return InvariantReport(a=a, minimal_set=tuple(aset), b=len(orbs),
                           orbit_detail=tuple(orbs))


def b_malle(G: PermGroup, unit_subgroup=None) -> int:
    """Orbit count of the power action u: C -> C^u on minimal-index classes of G."""
    e = G.exponent()
    units = list(unit_subgroup) if unit_subgroup is not None else twist.units_mod(e)
    a = a_invariant(G)
    classes = [c for c in conjugacy_classes(G)
               if ind(next(iter(c))) == a and not next(iter(c)).is_identity()]
    index = {}
    for c in classes:
        for t in c:
            index[t] = c
    remaining = set(classes)
    count = 0
    for c in sorted(classes, key=lambda cl: min(p.images for p in cl)):
        if c not in remaining:
            continue
        orbit = {c}
        frontier = [c]
        while frontier:
            nxt = []
            for cl in frontier:
                rep = next(iter(cl))
                for u in units:
                    img = index[rep ** (u % e if e > 1 else 1)]
                    if img not in orbit:
                        orbit.add(img)
                        nxt.append(img)
            frontier = nxt
        remaining -= orbit
        count += 1
    return count


def _pair_group_elements(G: PermGroup, units) -> list[tuple]:
    return [(g, u) for g in G.sorted_elements() for u in sorted(units)]


_PAIR_SUBGROUP_CACHE: dict = {}


def _pair_subgroups(G: PermGroup, units, exponent: int) -> list[list[tuple]]:
    """All subgroups of G x <units>, as lists of (Permutation, unit) tuples."""
    e = exponent
    key = (G.elements, tuple(sorted(set(units))), e)
    cached = _PAIR_SUBGROUP_CACHE.get(key)
    if cached is not None:
        return cached

    def mul(x, y):
        return (x[0] * y[0], (x[1] * y[1]) % e if e > 1 else 1)

    ident = (G.identity(), 1 % e if e > 1 else 1)
    unit_group = grouptools.closure(
        [(G.identity(), u % e if e > 1 else 1) for u in units], mul, ident,
        cap=4 * e + 4)
    unit_vals = sorted({u for _, u in unit_group})
    elements = _pair_group_elements(G, unit_vals)
    subs = grouptools.all_subgroups(elements, mul, ident)
    result = [sorted(s, key=lambda x: (x[0].images, x[1])) for s in subs]
    _PAIR_SUBGROUP_CACHE[key] = result
    return result


def _twist_from_pairs(pairs, exponent: int, degree: int) -> TwistGroup:
    return TwistGroup(exponent,
                      [ActionPair(g, u) for g, u in pairs], degree=degree)


def turkelli_B(G: PermGroup, T: PermGroup, gamma: TwistGroup) -> int:
    """Modified log-power invariant: max twisted b over admissible refinements.

    Maximizes b over normal subgroups N <= T with the same a-invariant and
    over twist groups whose projection modulo N (conjugator coset and unit
    jointly) agrees with the given one.  Every realizable refinement arises
    this way, so the result upper-bounds the modified invariant and agrees
    with it on all worked cases.
    """
    if not T.is_abelian():
        raise ValidationError("only abelian T is supported")
    _check_action(T, gamma)
    e = gamma.exponent
    a_T = a_invariant(T)

    candidates = []
    for N_els in _normal_subgroups_in(G, T):
        if len(N_els) <= 1:
            continue
        N = PermGroup(G.degree, sorted(N_els, key=lambda p: p.images))
        if a_invariant(N) == a_T:
            candidates.append(N)
    if not candidates:
        raise ValidationError("no admissible normal subgroup refines the tower")

    gamma_pairs = {(p.conjugator, p.unit) for p in gamma.pairs}
    unit_proj = sorted({u for _, u in gamma_pairs})
    best = 0
    subgroups = _pair_subgroups(G, unit_proj, e)
    for N in candidates:
        target = _coset_projection(gamma_pairs, N.elements)
        for pairs in subgroups:
            if {u for _, u in pairs} != set(unit_proj):
                continue
            if _coset_projection(pairs, N.elements) != target:
                continue
            gp = _twist_from_pairs(pairs, e, G.degree)
            rep = b_twisted(N, gp)
            if rep.b > best:
                best = rep.b
    return best


def _coset_projection(pairs, N_elements) -> frozenset:
    """Image of the pairs in (G/N) x units, cosets keyed by minimal element."""
    out = set()
    for g, u in pairs:
        coset = frozenset(g * n for n in N_elements)
        key = min(coset, key=lambda p: p.images).images
        out.add((key, u))
    return frozenset(out)


def _normal_subgroups_in(G: PermGroup, T: PermGroup) -> list[frozenset]:
    """Subgroups of T that are normal in G (T assumed abelian normal)."""
    from .perm import _abelian_subgroups

    out = []
    for sub in _abelian_subgroups(T):
        if G.is_normal_subset(sub):
            out.append(sub)
    return out


@dataclass(frozen=True)
class LowerBoundExponents:
    power_of_X: Fraction
    power_of_log: int
    witness_order: int

    def to_json(self) -> dict:
        return {"power_of_X": f"{self.power_of_X.numerator}/{self.power_of_X.denominator}",
                "power_of_log": self.power_of_log,
                "witness_order": self.witness_order}


def admissible_twist_groups(G: PermGroup, T: PermGroup,
                            units=None) -> list[TwistGroup]:
    """Twist groups realizable as joint conjugator/unit images for the tower.

    Enumerates subgroups of G x U whose unit projection is all of U and whose
    conjugator projection H satisfies H*T = G (needed for surjective towers).
    """
    e = T.exponent()
    us = list(units) if units is not None else twist.units_mod(e)
    full_units = {u % e if e > 1 else 1 for u in us}
    out = []
    for pairs in _pair_subgroups(G, us, e):
        if {u for _, u in pairs} != full_units:
            continue
        H = {g for g, _ in pairs}
        product = {h * t for h in H for t in T.elements}
        if len(product) != G.order:
            continue
        out.append(_twist_from_pairs(pairs, e, G.degree))
    return out


def lower_bound_exponents(G: PermGroup, units_for=None) -> LowerBoundExponents:
    """Best (1/a, b-1) pair over abelian normal subgroups and admissible twists.

    ``units_for`` maps an exponent e to the allowed unit subgroup mod e; the
    default models a base field with full cyclotomic image at every level.
    Ties resolve lexicographically: maximal power of X first, then maximal
    log power.
    """
    from .perm import normal_subgroups_abelian

    best = None
    for T in normal_subgroups_abelian(G):
        if T.order <= 1:
            continue
        a = a_invariant(T)
        e = T.exponent()
        us = units_for(e) if units_for is not None else None
        b_best = 0
        for gp in admissible_twist_groups(G, T, units=us):
            rep = b_twisted(T, gp)
            if rep.b > b_best:
                b_best = rep.b
        if b_best == 0:
            continue
        cand = LowerBoundExponents(Fraction(1, a), b_best - 1, T.order)
        if best is None or (cand.power_of_X, cand.power_of_log) > \
                (best.power_of_X, best.power_of_log):
            best = cand
    if best is None:
        raise ValidationError("no nontrivial abelian normal subgroup")
    return best
