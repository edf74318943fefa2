"""Generic finite-group helpers over hashable elements.

Used by both permutation groups and conjugator/unit pair groups.  Elements
only need to be hashable; the group law is passed in explicitly.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, TypeVar

from .errors import ResourceCapError

E = TypeVar("E", bound=Hashable)

SUBGROUP_SCAN_CAP = 200


def closure(generators: Iterable[E], mul: Callable[[E, E], E], identity: E,
            cap: int = 10_000) -> frozenset[E]:
    """Smallest subset containing the generators and closed under mul.

    For finite groups closure under multiplication implies closure under
    inversion, so generators alone suffice.
    """
    els = {identity}
    gens = list(generators)
    frontier = [identity]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = mul(a, g)
                if c not in els:
                    if len(els) >= cap:
                        raise ResourceCapError(
                            f"group closure exceeded cap of {cap} elements")
                    els.add(c)
                    new.append(c)
        frontier = new
    return frozenset(els)


def all_subgroups(elements: Iterable[E], mul: Callable[[E, E], E], identity: E,
                  cap: int = SUBGROUP_SCAN_CAP) -> list[frozenset[E]]:
    """Every subgroup of the group with the given element set.

    Grows subgroups one generator at a time starting from the trivial one;
    every subgroup is reachable this way.  Intended for desk-scale groups,
    guarded by ``cap`` on the group order.
    """
    els = list(elements)
    if len(els) > cap:
        raise ResourceCapError(
            f"subgroup scan limited to groups of order <= {cap}, got {len(els)}")
    trivial = frozenset([identity])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in els:
                if g in sub:
                    continue
                bigger = closure(list(sub) + [g], mul, identity, cap=len(els) + 1)
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(map(repr, s))))
