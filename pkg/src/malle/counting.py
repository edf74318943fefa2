"""Empirical counting of homomorphisms from the absolute abelian Galois group
of Q into a finite abelian target, ordered by discriminant (regular
representation, via conductor-discriminant) or by product of ramified primes.

Everything is parametrized through unit groups (Z/mZ)^x: a global
homomorphism is a primitive character tuple, its conductor is the modulus it
descends to, and counting is a bounded multiplicative enumeration over
per-prime local data.  A direct modulus-by-modulus enumeration backs the same
counts at desk scale for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .abgroup import FiniteAbelianGroup
from .errors import ResourceCapError, ValidationError

MODULUS_CAP = 1_000_000
LIMIT_CAP = 10 ** 14

ORDERINGS = ("disc", "ram")


# -- unit group structure -----------------------------------------------------


@dataclass(frozen=True)
class UnitComponent:
    """One prime-power block of (Z/mZ)^x with its cyclic generators."""

    prime: int
    power: int  # p^k
    k: int
    generators: tuple  # (residue, order) pairs


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def _primitive_root(p: int, k: int) -> int:
    """Generator of the cyclic group (Z/p^kZ)^x for odd p."""
    order = p - 1
    fac = [q for q, _ in _factorize(order)]
    g = None
    for cand in range(2, p):
        if all(pow(cand, order // q, p) != 1 for q in fac):
            g = cand
            break
    if g is None:
        raise ValidationError(f"no primitive root mod {p}")
    if k == 1:
        return g
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def unit_components(m: int) -> list[UnitComponent]:
    """CRT blocks of (Z/mZ)^x, each with an explicit generating set."""
    if m < 1:
        raise ValidationError("modulus must be positive")
    out = []
    for p, k in _factorize(m):
        pk = p ** k
        if p == 2:
            if k == 1:
                gens = ()
            elif k == 2:
                gens = ((3, 2),)
            else:
                gens = ((pk - 1, 2), (5, 2 ** (k - 2)))
        else:
            g = _primitive_root(p, k) % pk
            gens = ((g, p ** (k - 1) * (p - 1)),)
        out.append(UnitComponent(p, pk, k, gens))
    return out


@dataclass(frozen=True)
class UnitGroupHom:
    """A homomorphism (Z/mZ)^x -> A given by images of the block generators."""

    modulus: int
    target: FiniteAbelianGroup
    images: tuple  # aligned with the concatenated generators of unit_components

    def blocks(self):
        comps = unit_components(self.modulus)
        pos = 0
        for comp in comps:
            n = len(comp.generators)
            yield comp, self.images[pos:pos + n]
            pos += n


def _component_conductor_exp(comp: UnitComponent, orders) -> int:
    """Conductor exponent at comp.prime of a hom with the given image orders."""
    p = comp.prime
    if p == 2:
        if comp.k == 1:
            return 0
        if comp.k == 2:
            return 2 if orders[0] > 1 else 0
        a, b = orders
        if b > 1:
            return _v(b, 2) + 2
        return 2 if a > 1 else 0
    t = orders[0]
    if t == 1:
        return 0
    return _v(t, p) + 1


def _v(n: int, p: int) -> int:
    out = 0
    while n % p == 0:
        n //= p
        out += 1
    return out


def conductor_of(hom: UnitGroupHom) -> int:
    """Smallest modulus the homomorphism factors through."""
    A = hom.target
    out = 1
    for comp, images in hom.blocks():
        orders = [A.element_order(x) for x in images]
        for x, (_, n) in zip(images, comp.generators):
            if A.element_order(x) > 1 and n % A.element_order(x) != 0:
                raise ValidationError("image order does not divide generator order")
        exp = _component_conductor_exp(comp, orders)
        out *= comp.prime ** exp
    return out


def discriminant_of(hom: UnitGroupHom) -> int:
    """Conductor-discriminant product over all characters of the target.

    The target is counted in its regular representation, so this is the
    discriminant of the full group algebra attached to the homomorphism.
    """
    A = hom.target
    out = 1
    for comp, images in hom.blocks():
        d = 0
        for chi in A.characters():
            orders = [A.char_order(chi, x) for x in images]
            d += _component_conductor_exp(comp, orders)
        out *= comp.prime ** d
    return out


def ram_of(hom: UnitGroupHom) -> int:
    """Product of the primes where the homomorphism ramifies."""
    out = 1
    for comp, images in hom.blocks():
        orders = [hom.target.element_order(x) for x in images]
        if _component_conductor_exp(comp, orders) > 0:
            out *= comp.prime
    return out


def homs_with_modulus(A: FiniteAbelianGroup, m: int) -> list[UnitGroupHom]:
    """All homomorphisms (Z/mZ)^x -> A (any conductor dividing m)."""
    if m > MODULUS_CAP:
        raise ResourceCapError(f"modulus {m} exceeds cap {MODULUS_CAP}")
    comps = unit_components(m)
    choices: list[list[tuple]] = []
    for comp in comps:
        for _, n in comp.generators:
            choices.append(A.torsion(n))
    homs = []
    stack = [()]
    for opts in choices:
        stack = [prefix + (x,) for prefix in stack for x in opts]
    for images in stack:
        homs.append(UnitGroupHom(m, A, tuple(images)))
    return homs


def homs_with_conductor(A: FiniteAbelianGroup, m: int) -> list[UnitGroupHom]:
    """All homomorphisms of conductor exactly m.  Includes the trivial hom at m=1."""
    return [h for h in homs_with_modulus(A, m) if conductor_of(h) == m]


def image_of(hom: UnitGroupHom) -> frozenset:
    return hom.target.span(list(hom.images)) if hom.images else \
        frozenset([hom.target.zero()])


def is_surjective(hom: UnitGroupHom) -> bool:
    return len(image_of(hom)) == hom.target.order


# -- local counting data --------------------------------------------------------


def _order_census(A: FiniteAbelianGroup, subgroup=None) -> dict[int, int]:
    """Count of elements by exact order within the subgroup (default: all of A)."""
    els = subgroup if subgroup is not None else A.elements()
    out: dict[int, int] = {}
    for x in els:
        r = A.element_order(x)
        out[r] = out.get(r, 0) + 1
    return out


class HomCounter:
    """Prime-by-prime local data for bounded counting of homs into a subgroup.

    ``subgroup`` is an element subset of the ambient group A closed under
    addition; discriminant exponents are computed in the regular
    representation of the subgroup itself (ambient discs are a fixed power).
    """

    def __init__(self, A: FiniteAbelianGroup, subgroup=None):
        self.A = A
        self.subgroup = frozenset(subgroup) if subgroup is not None \
            else frozenset(A.elements())
        if A.zero() not in self.subgroup:
            raise ValidationError("subgroup must contain 0")
        self.size = len(self.subgroup)
        self.census = _order_census(A, self.subgroup)
        self.exponent = 1
        for r in self.census:
            self.exponent = self.exponent * r // math.gcd(self.exponent, r)
        self.wild_primes = sorted({p for p, _ in _factorize(self.size)})

    # tame side ------------------------------------------------------------

    def _disc_exp(self, r: int) -> int:
        """Regular-representation discriminant exponent of a tame image of order r."""
        return self.size - self.size // r

    @lru_cache(maxsize=None)
    def tame_items(self, g: int) -> tuple:
        """(disc_exp, count) for nonzero images killed by g = gcd(p-1, exponent)."""
        out: dict[int, int] = {}
        for r, n in self.census.items():
            if r > 1 and g % r == 0:
                d = self._disc_exp(r)
                out[d] = out.get(d, 0) + n
        return tuple(sorted(out.items()))

    # wild side ------------------------------------------------------------

    def wild_local_data(self, p: int) -> list[tuple[int, int]]:
        """(conductor_exp, disc_exp) per ramified local hom at a wild prime."""
        e = self.exponent
        k = _v(e, p) + (2 if p == 2 else 1)
        pk = p ** k
        comp = unit_components(pk)[0]
        out = []
        sub = sorted(self.subgroup)
        gens = comp.generators
        choices = [[x for x in sub if self.A.element_order(x) > 1 and n % self.A.element_order(x) == 0] +
                   [self.A.zero()] for _, n in gens]
        import itertools
        for images in itertools.product(*choices):
            orders = [self.A.element_order(x) for x in images]
            cond = _component_conductor_exp(comp, orders)
            if cond == 0:
                continue
            d = 0
            for chi in self._subgroup_characters():
                char_orders = [self._char_order_on(chi, x) for x in images]
                d += _component_conductor_exp(comp, char_orders)
            out.append((cond, d))
        return sorted(out)

    def _subgroup_characters(self):
        """Abstract characters of the subgroup: homs subgroup -> Z/exponent."""
        if not hasattr(self, "_chars"):
            sub = sorted(self.subgroup)
            e = self.exponent
            gens = self._subgroup_generators()
            chars = []
            stack = [dict()]
            for g in gens:
                order = self.A.element_order(g)
                new = []
                for partial in stack:
                    for val in range(0, e, e // order):
                        cand = dict(partial)
                        cand[g] = val
                        new.append(cand)
                stack = new
            for assignment in stack:
                table = {self.A.zero(): 0}
                ok = True
                frontier = [self.A.zero()]
                while frontier:
                    nxt = []
                    for x in frontier:
                        for g in gens:
                            y = self.A.add(x, g)
                            val = (table[x] + assignment[g]) % e
                            if y in table:
                                if table[y] != val:
                                    ok = False
                            else:
                                table[y] = val
                                nxt.append(y)
                    if not ok:
                        break
                    frontier = nxt
                if ok and len(table) == self.size:
                    chars.append(table)
            if len(chars) != self.size:
                raise ValidationError("character table construction failed")
            self._chars = chars
        return self._chars

    def _subgroup_generators(self) -> list[tuple]:
        got = {self.A.zero()}
        gens = []
        for x in sorted(self.subgroup, key=lambda t: (-self.A.element_order(t), t)):
            if x not in got:
                gens.append(x)
                got = self.A.span(gens)
                if len(got) == self.size:
                    break
        return gens

    def _char_order_on(self, chi: dict, x: tuple) -> int:
        val = chi[x]
        if val == 0:
            return 1
        return self.exponent // math.gcd(self.exponent, val)

    # assembled place data ----------------------------------------------------

    def place_items(self, ordering: str, limit: int) -> tuple:
        """Flat (offsets, values, counts) arrays for the product enumeration."""
        if ordering not in ORDERINGS:
            raise ValidationError(f"unknown ordering {ordering!r}")
        if limit > LIMIT_CAP:
            raise ResourceCapError(f"limit {limit} exceeds cap {LIMIT_CAP}")
        if self.size == 1:
            return (np.zeros(1, dtype=np.int64),
                    np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
        min_tame_exp = min((self._disc_exp(r) for r in self.census if r > 1),
                           default=1)
        if ordering == "ram":
            pmax = limit - 1
        else:
            pmax = _iroot(max(limit - 1, 1), min_tame_exp)
        pmax = max(pmax, max(self.wild_primes, default=2))
        primes = kernels.primes_up_to(pmax).tolist()

        e = self.exponent
        offsets = [0]
        values: list[int] = []
        counts: list[int] = []
        wild = set(self.wild_primes)
        tame_cache: dict[int, tuple] = {}
        for p in primes:
            if p in wild:
                items: dict[int, int] = {}
                for cond, d in self.wild_local_data(p):
                    v = p if ordering == "ram" else p ** d
                    if v < limit:
                        items[v] = items.get(v, 0) + 1
                for v in sorted(items):
                    values.append(v)
                    counts.append(items[v])
            else:
                g = math.gcd(p - 1, e)
                cached = tame_cache.get(g)
                if cached is None:
                    cached = self.tame_items(g)
                    tame_cache[g] = cached
                if ordering == "ram":
                    total = sum(c for _, c in cached)
                    if total and p < limit:
                        values.append(p)
                        counts.append(total)
                else:
                    for d, c in cached:
                        v = p ** d
                        if v < limit:
                            values.append(v)
                            counts.append(c)
            offsets.append(len(values))
        return (np.asarray(offsets, dtype=np.int64),
                np.asarray(values, dtype=np.int64),
                np.asarray(counts, dtype=np.int64))

    def count_at(self, ordering: str, grid) -> np.ndarray:
        """Hom counts (all homs into the subgroup) below each grid boundary."""
        grid = sorted(int(x) for x in grid)
        offsets, values, counts = self.place_items(ordering, grid[-1])
        return kernels.bounded_products_grid(
            offsets, values, counts,
            np.asarray(grid, dtype=np.int64))

    def exact_values(self, ordering: str, limit: int) -> dict[int, int]:
        """Exact invariant-value histogram below the limit (desk scale)."""
        offsets, values, counts = self.place_items(ordering, limit)
        vs, cs = kernels.bounded_products_exact(offsets, values, counts, limit)
        out: dict[int, int] = {}
        for v, c in zip(vs.tolist(), cs.tolist()):
            out[v] = out.get(v, 0) + c
        return out


def _iroot(n: int, k: int) -> int:
    """Largest r with r^k <= n."""
    if n < 0 or k < 1:
        raise ValidationError("bad integer root arguments")
    if k == 1:
        return n
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


# -- top-level counting ------------------------------------------------------------


@dataclass
class CountSeries:
    ordering: str
    grid: list[int]
    counts: list[int]
    surjective: bool
    predicted_a: int | None = None
    predicted_b: int | None = None
    a_hat: float | None = None
    b_hat: float | None = None

    def to_json(self) -> dict:
        return {"ordering": self.ordering,
                "surjective": self.surjective,
                "grid": self.grid,
                "counts": self.counts,
                "predicted": {"a": self.predicted_a, "b": self.predicted_b},
                "fit": {"a_hat": self.a_hat, "b_hat": self.b_hat}}


def default_grid(X: int, points_per_decade: int = 4, start: float = 100.0) -> list[int]:
    X = int(X)
    if X < 10:
        return [X]
    out = set()
    x = min(start, X)
    decades = math.log10(X / x)
    n = max(int(decades * points_per_decade) + 1, 2)
    for i in range(n + 1):
        out.add(int(round(x * (X / x) ** (i / n))))
    out.add(X)
    return sorted(v for v in out if v >= 2)


def mobius_subgroup_weights(A: FiniteAbelianGroup) -> list[tuple[frozenset, int]]:
    """(subgroup, mobius weight mu(S, A)) over the subgroup lattice."""
    from .abgroup import subgroup_lattice_mobius
    mob = subgroup_lattice_mobius(A)
    subs = A.subgroups()
    full = max(subs, key=len)
    return [(S, mob[(S, full)]) for S in subs if mob[(S, full)] != 0]


def count(A: FiniteAbelianGroup, ordering: str, X: int,
          surjective_only: bool = False, grid=None,
          fields: bool = False) -> CountSeries:
    """Exact counts of homomorphisms with invariant value < X on a grid.

    Surjective counts are Mobius-sieved over the subgroup lattice, with the
    discriminant rescaled by the subgroup index (each subgroup character
    extends index-many ways).  ``fields`` divides surjective hom counts by
    |Aut(A)| to count fixed fields instead of parametrized maps.
    """
    if ordering not in ORDERINGS:
        raise ValidationError(f"unknown ordering {ordering!r}")
    X = int(X)
    if grid is None:
        grid = default_grid(X)
    grid = sorted({int(g) for g in grid} | {X})
    if fields and not surjective_only:
        raise ValidationError("field counting requires the surjectivity sieve")

    if not surjective_only:
        counter = HomCounter(A)
        counts = counter.count_at(ordering, grid).tolist()
    else:
        totals = np.zeros(len(grid), dtype=np.int64)
        for S, weight in mobius_subgroup_weights(A):
            index = A.order // len(S)
            counter = HomCounter(A, S)
            if ordering == "disc" and index > 1:
                # disc in the ambient regular rep is the subgroup disc to the
                # index power, so rescale the strict bounds by an exact root
                sub_grid = [_iroot(max(g - 1, 0), index) + 1 for g in grid]
            else:
                sub_grid = list(grid)
            got = counter.count_at(ordering, sub_grid)
            totals += weight * got
        counts = totals.tolist()
        if fields:
            aut = automorphism_count(A)
            if any(c % aut for c in counts):
                raise ValidationError("surjection counts not divisible by |Aut|")
            counts = [c // aut for c in counts]

    series = CountSeries(ordering, list(grid), counts, surjective_only)
    if len(grid) >= 8 and grid[0] > 0 and grid[-1] // max(grid[0], 1) >= 1000:
        try:
            fit = fit_exponents(series)
            series.a_hat, series.b_hat = fit["a_hat"], fit["b_hat"]
        except ValidationError:
            pass
    return series


def automorphism_count(A: FiniteAbelianGroup) -> int:
    els = A.elements()
    k = len(A.invariant_factors)
    count = 0
    import itertools
    pools = [A.torsion(d) for d in A.invariant_factors]
    for cols in itertools.product(*pools):
        image = set()
        for x in els:
            y = A.zero()
            for xi, col in zip(x, cols):
                y = A.add(y, A.scale(xi, col))
            image.add(y)
            if len(image) == A.order:
                break
        if len(image) == A.order:
            count += 1
    return count


# -- brute-force oracle (desk scale) --------------------------------------------------


def brute_histogram(A: FiniteAbelianGroup, ordering: str, limit: int,
                    surjective_only: bool = False,
                    modulus_order="ascending") -> dict[int, int]:
    """Value histogram from direct modulus-by-modulus hom enumeration.

    Enumerates every conductor whose minimal invariant can sit below the
    limit (the ram bound allows conductors up to the wild head room);
    O(limit) moduli, desk scale only.
    """
    if ordering not in ORDERINGS:
        raise ValidationError(f"unknown ordering {ordering!r}")
    out: dict[int, int] = {}
    mmax = limit
    if ordering == "ram":
        e = A.exponent
        head = 1
        for p, _ in _factorize(A.order):
            k = _v(e, p) + (2 if p == 2 else 1)
            head *= p ** (k - 1)
        mmax = limit * head
    moduli = range(1, mmax + 1)
    if modulus_order == "descending":
        moduli = range(mmax, 0, -1)
    for m in moduli:
        for hom in homs_with_conductor(A, m):
            if surjective_only and not is_surjective(hom):
                continue
            v = discriminant_of(hom) if ordering == "disc" else ram_of(hom)
            if v < limit:
                out[v] = out.get(v, 0) + 1
    return out


# -- exponent fitting -------------------------------------------------------------


def fit_exponents(series: CountSeries) -> dict:
    """Least-squares fit of log N = (1/a) log X + (b-1) log log X + const."""
    xs = [x for x, c in zip(series.grid, series.counts) if c > 0 and x > 3]
    cs = [c for x, c in zip(series.grid, series.counts) if c > 0 and x > 3]
    if len(xs) < 8:
        raise ValidationError("need at least 8 usable grid points")
    if max(xs) < 1000 * min(xs):
        raise ValidationError("grid must span at least three decades")
    logx = np.log([float(v) for v in xs])
    loglogx = np.log(np.log([float(v) for v in xs]))
    y = np.log([float(v) for v in cs])
    design = np.column_stack([logx, loglogx, np.ones_like(logx)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    slope = coef[0]
    if slope <= 0:
        raise ValidationError("nonpositive growth; no exponent to fit")
    return {"a_hat": 1.0 / slope, "b_hat": coef[1] + 1.0}
