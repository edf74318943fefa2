"""Finite models of the composite conjugation/cyclotomic action on a normal subgroup.

An ActionPair (g, u) acts on t by t |-> g t^(u^-1 mod e) g^-1, where e is the
exponent of the acted-on group.  A TwistGroup is the closure of finitely many
pairs inside G x (Z/eZ)^x; orbit counts under it are the twisted b-invariants.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import grouptools
from .errors import ValidationError
from .perm import Permutation, PermGroup


@dataclass(frozen=True)
class ActionPair:
    """A conjugator together with an invertible residue mod the exponent."""

    conjugator: Permutation
    unit: int

    def key(self) -> tuple:
        return (self.conjugator.images, self.unit)

    def __repr__(self) -> str:
        return f"({self.conjugator.cycle_string()}, {self.unit})"


class TwistGroup:
    """Closure of action pairs under componentwise composition."""

    def __init__(self, exponent: int, pairs, degree: int | None = None,
                 cap: int = 10_000):
        if exponent < 1:
            raise ValidationError("exponent must be >= 1")
        self.exponent = exponent
        pair_list = list(pairs)
        if degree is None:
            if not pair_list:
                raise ValidationError("degree required when no generators are given")
            degree = pair_list[0].conjugator.degree
        self.degree = degree
        for p in pair_list:
            self._validate_pair(p)
        ident = (Permutation.identity(degree), 1 % exponent if exponent > 1 else 0)
        raw = grouptools.closure(
            [(p.conjugator, p.unit % exponent) for p in pair_list],
            self._mul, ident, cap=cap)
        self.pairs = frozenset(ActionPair(g, u) for g, u in raw)

    def _validate_pair(self, p: ActionPair) -> None:
        if p.conjugator.degree != self.degree:
            raise ValidationError("conjugator degree mismatch")
        if self.exponent > 1 and gcd(p.unit, self.exponent) != 1:
            raise ValidationError(
                f"unit {p.unit} not coprime to exponent {self.exponent}")

    def _mul(self, a, b):
        if self.exponent > 1:
            return (a[0] * b[0], (a[1] * b[1]) % self.exponent)
        return (a[0] * b[0], 0)

    @property
    def order(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[ActionPair]:
        return sorted(self.pairs, key=lambda p: p.key())

    def unit_projection(self) -> frozenset[int]:
        return frozenset(p.unit for p in self.pairs)

    def conjugator_projection(self) -> frozenset[Permutation]:
        return frozenset(p.conjugator for p in self.pairs)

    @classmethod
    def from_json(cls, record) -> "TwistGroup":
        """Accept {"exponent": e, "pairs": [{"conjugator": [...], "unit": u}, ...]}."""
        if isinstance(record, str):
            record = json.loads(record)
        try:
            e = int(record["exponent"])
            degree = record.get("degree")
            pairs = [ActionPair(Permutation.from_one_indexed(p["conjugator"]),
                                int(p["unit"]))
                     for p in record["pairs"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad action record: {exc}") from exc
        return cls(e, pairs, degree=degree)

    def to_json(self) -> dict:
        return {"exponent": self.exponent,
                "degree": self.degree,
                "pairs": [{"conjugator": p.conjugator.one_indexed(), "unit": p.unit}
                          for p in self.sorted_pairs()]}

    def __repr__(self) -> str:
        return f"TwistGroup(e={self.exponent}, order={self.order})"


def closure(generators, e: int, degree: int | None = None) -> TwistGroup:
    """TwistGroup generated by the given pairs with exponent e."""
    return TwistGroup(e, generators, degree=degree)


def act(pair: ActionPair, t: Permutation, exponent: int) -> Permutation:
    """Apply (g, u): conjugate t^(u^-1 mod e) by g."""
    if exponent > 1:
        uinv = pow(pair.unit, -1, exponent)
    else:
        uinv = 1
    g = pair.conjugator
    return g * (t ** uinv) * g.inverse()


def _check_closed(gamma: TwistGroup, S) -> list[Permutation]:
    els = sorted(set(S), key=lambda p: p.images)
    sset = set(els)
    for pair in gamma.pairs:
        for t in els:
            if act(pair, t, gamma.exponent) not in sset:
                raise ValidationError("set is not closed under the action")
    return els


def orbits(gamma: TwistGroup, S, by_conjugacy: bool = False,
           ambient: PermGroup | None = None) -> list[frozenset]:
    """Partition an action-closed subset (or its T-conjugacy classes) into orbits.

    With by_conjugacy set, S must be a union of conjugacy classes of
    ``ambient`` and the action is applied to whole classes.
    """
    els = _check_closed(gamma, S)
    if by_conjugacy:
        if ambient is None:
            raise ValidationError("by_conjugacy requires the ambient group")
        items = _classes_within(ambient, els)
    else:
        items = [frozenset([t]) for t in els]

    index = {}
    for cls in items:
        for t in cls:
            index[t] = cls
    out = []
    remaining = {frozenset(c) for c in items}
    items_sorted = sorted(items, key=lambda c: min(p.images for p in c))
    for cls in items_sorted:
        if cls not in remaining:
            continue
        orbit = {cls}
        frontier = [cls]
        while frontier:
            nxt = []
            for c in frontier:
                rep = next(iter(c))
                for pair in gamma.pairs:
                    image = index[act(pair, rep, gamma.exponent)]
                    if image not in orbit:
                        orbit.add(image)
                        nxt.append(image)
            frontier = nxt
        remaining -= orbit
        out.append(frozenset().union(*orbit))
    return sorted(out, key=lambda c: min(p.images for p in c))


def _classes_within(ambient: PermGroup, els) -> list[frozenset]:
    """Conjugacy classes of the ambient group restricted to the subset."""
    sset = set(els)
    seen = set()
    classes = []
    for t in els:
        if t in seen:
            continue
        cls = {t}
        frontier = [t]
        while frontier:
            nxt = []
            for x in frontier:
                for h in ambient.generators:
                    c = h * x * h.inverse()
                    if c not in cls:
                        cls.add(c)
                        nxt.append(c)
            frontier = nxt
        if not cls <= sset:
            raise ValidationError("subset is not a union of conjugacy classes")
        seen |= cls
        classes.append(frozenset(cls))
    return classes


def fixed_point_count(pair: ActionPair, S, exponent: int) -> int:
    """Number of elements of S fixed by the pair."""
    return sum(1 for t in S if act(pair, t, exponent) == t)


def burnside_orbit_count(gamma: TwistGroup, S) -> Fraction:
    """Average fixed-point count over the group; equals the orbit count exactly."""
    total = sum(fixed_point_count(p, S, gamma.exponent) for p in gamma.pairs)
    return Fraction(total, gamma.order)


def units_mod(e: int) -> list[int]:
    if e <= 1:
        return [1]
    return [u for u in range(1, e) if gcd(u, e) == 1]


def trivial_conjugator_action(degree: int, exponent: int,
                              units=None) -> TwistGroup:
    """Trivial conjugators with the given unit subgroup (default: all units).

    Models a tower datum whose conjugation part is trivial over a base field
    with the stated cyclotomic image.
    """
    ident = Permutation.identity(degree)
    us = list(units) if units is not None else units_mod(exponent)
    return TwistGroup(exponent, [ActionPair(ident, u) for u in us], degree=degree)


def full_product_action(G: PermGroup, exponent: int, units=None) -> TwistGroup:
    """All of G as conjugators, crossed with the unit subgroup (default: all)."""
    us = list(units) if units is not None else units_mod(exponent)
    gens = [ActionPair(g, 1 % exponent if exponent > 1 else 1) for g in G.generators]
    gens += [ActionPair(Permutation.identity(G.degree), u) for u in us]
    return TwistGroup(exponent, gens, degree=G.degree)
