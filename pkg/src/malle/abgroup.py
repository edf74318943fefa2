"""Finite abelian groups in invariant-factor form, with elements as residue
tuples, subgroup machinery, characters, and the regular permutation embedding.
"""

from __future__ import annotations

import itertools
from functools import reduce
from math import gcd

from .errors import ResourceCapError, ValidationError
from .perm import PermGroup, Permutation

ELEMENT_CAP = 4096


class FiniteAbelianGroup:
    """Product of cyclic groups Z/d1 x ... x Z/dk with d1 | d2 | ... | dk."""

    def __init__(self, invariant_factors):
        factors = tuple(int(d) for d in invariant_factors)
        if any(d <= 1 for d in factors):
            raise ValidationError("invariant factors must all exceed 1")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise ValidationError(
                    f"invariant factors must divide in order, got {factors}")
        self.invariant_factors = factors

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.invariant_factors, 1)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def zero(self) -> tuple:
        return (0,) * len(self.invariant_factors)

    def elements(self) -> list[tuple]:
        if self.order > ELEMENT_CAP:
            raise ResourceCapError(f"group order {self.order} exceeds element cap")
        return list(itertools.product(*[range(d) for d in self.invariant_factors]))

    def add(self, x: tuple, y: tuple) -> tuple:
        return tuple((a + b) % d for a, b, d in
                     zip(x, y, self.invariant_factors))

    def neg(self, x: tuple) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x: tuple) -> tuple:
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x: tuple) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b),
                      (d // gcd(d, a) for a, d in zip(x, self.invariant_factors)), 1)

    def torsion(self, m: int) -> list[tuple]:
        """Elements killed by m: the subgroup {x : m*x = 0}."""
        ranges = []
        for d in self.invariant_factors:
            g = gcd(d, m)
            step = d // g
            ranges.append(range(0, d, step))
        return list(itertools.product(*ranges))

    def torsion_order(self, m: int) -> int:
        return reduce(lambda a, b: a * b,
                      (gcd(d, m) for d in self.invariant_factors), 1)

    def span(self, gens) -> frozenset:
        """Subgroup generated by the given elements."""
        zero = self.zero()
        out = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def subgroups(self) -> list[frozenset]:
        """All subgroups, smallest first; order-capped like the element list."""
        els = self.elements()
        trivial = frozenset([self.zero()])
        found = {trivial}
        frontier = [trivial]
        while frontier:
            nxt = []
            for sub in frontier:
                for g in els:
                    if g in sub:
                        continue
                    bigger = self.span(list(sub) + [g])
                    if bigger not in found:
                        found.add(bigger)
                        nxt.append(bigger)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    # -- characters -------------------------------------------------------

    def characters(self) -> list[tuple]:
        """Character labels; the value of label a at x is given by char_value."""
        return self.elements()

    def char_value(self, label: tuple, x: tuple) -> int:
        """Character value as an element of Z/exponent (additive)."""
        e = self.exponent
        total = 0
        for a, v, d in zip(label, x, self.invariant_factors):
            total += a * v * (e // d)
        return total % e

    def char_order(self, label: tuple, x: tuple) -> int:
        """Multiplicative order of the root of unity char(label)(x)."""
        e = self.exponent
        v = self.char_value(label, x)
        return e // gcd(e, v)

    # -- permutation model ---------------------------------------------------

    def regular_representation(self) -> PermGroup:
        """Translation action on the sorted element list; degree = order."""
        els = self.elements()
        index = {x: i for i, x in enumerate(els)}
        gens = []
        for j, d in enumerate(self.invariant_factors):
            g = tuple(1 if i == j else 0 for i in range(len(self.invariant_factors)))
            gens.append(Permutation(index[self.add(x, g)] for x in els))
        return PermGroup(self.order, gens, transitive=True)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteAbelianGroup)
                and self.invariant_factors == other.invariant_factors)

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    def __repr__(self) -> str:
        body = " x ".join(f"C{d}" for d in self.invariant_factors)
        return f"FiniteAbelianGroup({body})"


def regular_index(A: FiniteAbelianGroup, x: tuple) -> int:
    """ind of x acting by translation: |A| - |A|/order(x)."""
    return A.order - A.order // A.element_order(x)


def subgroup_lattice_mobius(A: FiniteAbelianGroup) -> dict:
    """Mobius function of the subgroup lattice, as (lower, upper) -> int."""
    subs = A.subgroups()
    mob = {}

    def mu(lo: frozenset, hi: frozenset) -> int:
        if not lo <= hi:
            return 0
        key = (lo, hi)
        if key in mob:
            return mob[key]
        if lo == hi:
            mob[key] = 1
            return 1
        total = 0
        for mid in subs:
            if lo < mid and mid <= hi:
                total += mu(mid, hi)
        mob[key] = -total
        return -total

    for lo in subs:
        for hi in subs:
            mu(lo, hi)
    return mob


def abstract_type_of(T) -> FiniteAbelianGroup:
    """Invariant factors of an abelian permutation group.

    Recovers each p-primary partition from the torsion counts
    #{g : g^(p^k) = e} and merges primes largest-with-largest.
    """
    if not T.is_abelian():
        raise ValidationError("group must be abelian")
    order = T.order
    if order == 1:
        raise ValidationError("group must be nontrivial")
    cyclic_orders = []
    for p in sorted(_factorize(order)):
        # m_k with p^(m_k) = #{g : g^(p^k) = e}; stabilizes at the p-part
        ms = [0]
        k = 1
        while True:
            count = sum(1 for g in T.elements if (g ** (p ** k)).is_identity())
            m = 0
            while count > 1:
                count //= p
                m += 1
            if m == ms[-1]:
                break
            ms.append(m)
            k += 1
        parts_ge = [ms[j] - ms[j - 1] for j in range(1, len(ms))]
        width = parts_ge[0] if parts_ge else 0
        for i in range(width):
            lam = sum(1 for n in parts_ge if n > i)
            cyclic_orders.append(p ** lam)
    return FiniteAbelianGroup(_invariant_factors(cyclic_orders))


def parse_abelian(spec: str) -> FiniteAbelianGroup:
    """Parse shapes like 'C4', 'C3xC3', 'C2x4', '2x2'."""
    text = spec.strip().replace(" ", "").lower()
    parts = [p for p in text.split("x") if p]
    factors = []
    for p in parts:
        if p.startswith("c"):
            p = p[1:]
        if not p.isdigit():
            raise ValidationError(f"cannot parse abelian group spec {spec!r}")
        factors.append(int(p))
    # normalize arbitrary cyclic factors into invariant-factor form
    return FiniteAbelianGroup(_invariant_factors(factors))


def _invariant_factors(cyclic_orders) -> list[int]:
    primary: dict[int, list[int]] = {}
    for n in cyclic_orders:
        if n <= 1:
            continue
        for p, k in _factorize(n).items():
            primary.setdefault(p, []).append(p ** k)
    if not primary:
        raise ValidationError("group must be nontrivial")
    for p in primary:
        primary[p].sort(reverse=True)
    width = max(len(v) for v in primary.values())
    out = []
    for i in range(width):
        d = 1
        for p, powers in primary.items():
            if i < len(powers):
                d *= powers[i]
        out.append(d)
    return sorted(out)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
