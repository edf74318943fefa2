"""Exact permutation-group machinery on the points {1..n}.

Permutations are stored 0-indexed internally; every public string/JSON
surface speaks 1-indexed cycle notation.  Groups are materialized in full
(closure cap 10,000) so that all downstream counts are exact.
"""

from __future__ import annotations

import itertools
import json
import re
from functools import reduce
from math import gcd

from . import grouptools
from .errors import NoAbelianWitness, ResourceCapError, ValidationError

CLOSURE_CAP = 10_000


class Permutation:
    """A bijection of {1..n}, stored as a tuple of 0-indexed images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ValidationError(f"not a permutation of 0..{n - 1}: {images}")
        object.__setattr__(self, "images", images)

    # -- construction ----------------------------------------------------

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_one_indexed(cls, images) -> "Permutation":
        """Build from a 1-indexed image list, the JSON wire form."""
        return cls(i - 1 for i in images)

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation like ``(1 2 3)(4 5 6)``; ``()`` or ``e`` is the identity."""
        text = text.strip()
        images = list(range(degree))
        if text in ("", "e", "()", "1"):
            return cls(images)
        chunks = re.findall(r"\(([^()]*)\)", text)
        if not chunks or re.sub(r"\([^()]*\)|\s", "", text):
            raise ValidationError(f"cannot parse cycle notation: {text!r}")
        for chunk in chunks:
            pts = [int(tok) for tok in re.split(r"[,\s]+", chunk.strip()) if tok]
            if not pts:
                continue
            if any(not 1 <= p <= degree for p in pts) or len(set(pts)) != len(pts):
                raise ValidationError(f"bad cycle {chunk!r} for degree {degree}")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                if images[a - 1] != a - 1:
                    raise ValidationError(f"point {a} repeated in {text!r}")
                images[a - 1] = b - 1
        return cls(images)

    # -- group operations -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 0-indexed point."""
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (self * other)(x) = self(other(x))."""
        if other.degree != self.degree:
            raise ValidationError("degree mismatch in composition")
        im = self.images
        return Permutation(im[j] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def conjugate_by(self, h: "Permutation") -> "Permutation":
        """h * self * h^-1."""
        return h * self * h.inverse()

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def order(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b),
                      (len(c) for c in self._raw_cycles()), 1)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    # -- cycle structure ---------------------------------------------------

    def _raw_cycles(self):
        """All cycles (0-indexed), fixed points included."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-indexed, each rotated to start at its minimum."""
        return [tuple(p + 1 for p in c) for c in self._raw_cycles() if len(c) > 1]

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    # -- plumbing ----------------------------------------------------------

    def one_indexed(self) -> list[int]:
        return [i + 1 for i in self.images]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"


def orbit_count(g: Permutation) -> int:
    """Number of cycles of g on {1..n}, fixed points counted as orbits."""
    return len(g._raw_cycles())


def ind(g: Permutation) -> int:
    """Index class function: degree minus the number of orbits; 0 iff identity."""
    return g.degree - orbit_count(g)


class PermGroup:
    """A finitely generated subgroup of S_n with all elements materialized."""

    def __init__(self, degree: int, generators, *, transitive: bool | None = None,
                 cap: int = CLOSURE_CAP):
        self.degree = degree
        gens = tuple(generators)
        for g in gens:
            if g.degree != degree:
                raise ValidationError("generator degree mismatch")
        self.generators = gens
        e = Permutation.identity(degree)
        self.elements = grouptools.closure(
            gens, lambda a, b: a * b, e, cap=cap)
        if transitive is not None:
            if transitive != self.is_transitive():
                raise ValidationError(
                    f"transitivity flag {transitive} contradicts the orbit structure")
        self.transitive = transitive

    # -- queries ------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[Permutation]:
        return sorted(self.elements, key=lambda p: p.images)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, g: Permutation) -> bool:
        return g in self.elements

    def is_abelian(self) -> bool:
        return all(a * b == b * a
                   for a, b in itertools.combinations(self.generators, 2))

    def is_transitive(self) -> bool:
        if self.degree == 1:
            return True
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = g(p)
                    if q not in reached:
                        reached.add(q)
                        nxt.append(q)
            frontier = nxt
        return len(reached) == self.degree

    def exponent(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b),
                      (g.order() for g in self.elements), 1)

    def subgroup(self, elements) -> "PermGroup":
        """Subgroup generated by the given elements (must lie in this group)."""
        els = list(elements)
        for g in els:
            if g not in self.elements:
                raise ValidationError("element outside the ambient group")
        return PermGroup(self.degree, els)

    def is_normal_subset(self, subset: frozenset[Permutation]) -> bool:
        """Whether the subset is stable under conjugation by every generator."""
        for g in self.generators:
            gi = g.inverse()
            if any(g * t * gi not in subset for t in subset):
                return False
        return True

    def normalizes(self, g: Permutation, subset) -> bool:
        gi = g.inverse()
        return all(g * t * gi in subset for t in subset)

    # -- JSON surface ---------------------------------------------------------

    @classmethod
    def from_json(cls, record) -> "PermGroup":
        """Accept {"degree": n, "generators": [[1-indexed images...], ...]}."""
        if isinstance(record, str):
            record = json.loads(record)
        try:
            degree = int(record["degree"])
            gens = [Permutation.from_one_indexed(imgs) for imgs in record["generators"]]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad group record: {exc}") from exc
        for g in gens:
            if g.degree != degree:
                raise ValidationError("generator length disagrees with degree")
        return cls(degree, gens)

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "generators": [g.one_indexed() for g in self.generators]}

    def __repr__(self) -> str:
        gens = ", ".join(g.cycle_string() for g in self.generators) or "e"
        return f"PermGroup(degree={self.degree}, order={self.order}, <{gens}>)"


def conjugacy_classes(G: PermGroup) -> list[frozenset[Permutation]]:
    """Partition of the elements of G into conjugacy classes.

    Classes are sorted by (size, minimal element) for determinism; ind is
    constant on each class.
    """
    remaining = set(G.elements)
    classes = []
    for g in G.sorted_elements():
        if g not in remaining:
            continue
        orbit = {g}
        frontier = [g]
        while frontier:
            nxt = []
            for t in frontier:
                for h in G.generators:
                    c = h * t * h.inverse()
                    if c not in orbit:
                        orbit.add(c)
                        nxt.append(c)
            frontier = nxt
        remaining -= orbit
        classes.append(frozenset(orbit))
    return sorted(classes, key=lambda c: (len(c), min(c, key=lambda p: p.images).images))


def _abelian_subgroups(G: PermGroup) -> list[frozenset[Permutation]]:
    """All abelian subgroups, grown by adjoining centralizing elements only."""
    if G.order > grouptools.SUBGROUP_SCAN_CAP:
        raise ResourceCapError(
            f"subgroup scan limited to |G| <= {grouptools.SUBGROUP_SCAN_CAP}")
    e = G.identity()
    els = G.sorted_elements()
    trivial = frozenset([e])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in els:
                if g in sub or any(g * t != t * g for t in sub):
                    continue
                bigger = grouptools.closure(
                    list(sub) + [g], lambda a, b: a * b, e, cap=G.order + 1)
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(p.images for p in s)))


def normal_subgroups_abelian(G: PermGroup) -> list[PermGroup]:
    """Complete list of abelian subgroups of G that are normal in G.

    Includes the trivial subgroup.  Only intended for |G| <= 200.
    """
    out = []
    for sub in _abelian_subgroups(G):
        if G.is_normal_subset(sub):
            out.append(PermGroup(G.degree, sorted(sub, key=lambda p: p.images)))
    return out


def solvable_exponent(G: PermGroup) -> int:
    """Min ind(g) over nonidentity g that commute with all their G-conjugates.

    Such a g generates an abelian normal-closure witness; raises
    NoAbelianWitness when no element qualifies.
    """
    if G.order <= 1:
        raise ValidationError("group must be nontrivial")
    best = None
    for g in G.sorted_elements():
        if g.is_identity():
            continue
        conjugates = {g}
        frontier = [g]
        while frontier:
            nxt = []
            for t in frontier:
                for h in G.generators:
                    c = h * t * h.inverse()
                    if c not in conjugates:
                        conjugates.add(c)
                        nxt.append(c)
            frontier = nxt
        if all(g * c == c * g for c in conjugates):
            val = ind(g)
            best = val if best is None else min(best, val)
    if best is None:
        raise NoAbelianWitness(
            "no nonidentity element commutes with all of its conjugates")
    return best
