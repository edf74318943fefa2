"""Built-in catalog of worked groups, their abelian normal subgroups, and
named twist presets.

Catalog names resolve in the CLI and in tests; every entry is validated on
construction (closure, transitivity, preset well-formedness).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import twist
from .errors import ResolutionError, ValidationError
from .perm import PermGroup, Permutation
from .twist import ActionPair, TwistGroup


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    group: PermGroup
    # named abelian normal subgroups; "T" is the distinguished default
    subgroups: dict
    # name -> callable(T: PermGroup) -> TwistGroup
    presets: dict
    default_subgroup: str = "T"

    def subgroup(self, name: str | None = None) -> PermGroup:
        key = name or self.default_subgroup
        try:
            return self.subgroups[key]
        except KeyError:
            raise ResolutionError(
                f"group {self.name!r} has no subgroup named {key!r}; "
                f"choices: {sorted(self.subgroups)}") from None

    def action(self, preset: str, subgroup: str | None = None) -> TwistGroup:
        T = self.subgroup(subgroup)
        try:
            builder = self.presets[preset]
        except KeyError:
            raise ResolutionError(
                f"group {self.name!r} has no action preset {preset!r}; "
                f"choices: {sorted(self.presets)}") from None
        return builder(T)


def _cycles(degree: int, *specs: str) -> list[Permutation]:
    return [Permutation.from_cycles(s, degree) for s in specs]


def _standard_presets(G: PermGroup) -> dict:
    return {
        "trivial": lambda T: TwistGroup(T.exponent(), [], degree=T.degree),
        "trivial-pi-over-Q": lambda T: twist.trivial_conjugator_action(
            T.degree, T.exponent()),
        "product": lambda T: twist.full_product_action(G, T.exponent()),
        "conj-only": lambda T: twist.full_product_action(G, T.exponent(), units=[1]),
    }


def _kluners_presets(G: PermGroup) -> dict:
    s = Permutation.from_cycles("(1 4)(2 5)(3 6)", 6)
    base = _standard_presets(G)
    base["kluners-split"] = lambda T: TwistGroup(
        T.exponent(), [ActionPair(s, 2)], degree=6)
    base["kluners-nonsplit"] = lambda T: TwistGroup(
        T.exponent(), [ActionPair(s, 1), ActionPair(Permutation.identity(6), 2)],
        degree=6)
    return base


@lru_cache(maxsize=1)
def entries() -> dict:
    out = {}

    def add(name, group, subgroups, presets, default="T"):
        for sub in subgroups.values():
            if not sub.is_abelian() or not group.is_normal_subset(sub.elements):
                raise ValidationError(f"catalog subgroup invalid for {name}")
        out[name] = CatalogEntry(name, group, subgroups, presets, default)

    # C2 in S_2
    c2 = PermGroup(2, _cycles(2, "(1 2)"), transitive=True)
    add("C2", c2, {"T": c2}, _standard_presets(c2))

    # C3 in S_3 (regular)
    c3 = PermGroup(3, _cycles(3, "(1 2 3)"), transitive=True)
    add("C3", c3, {"T": c3}, _standard_presets(c3))

    # C4 in S_4 (regular); center is the square
    c4 = PermGroup(4, _cycles(4, "(1 2 3 4)"), transitive=True)
    c4_center = PermGroup(4, _cycles(4, "(1 3)(2 4)"))
    add("C4", c4, {"T": c4, "center": c4_center}, _standard_presets(c4))

    # V4 regular in S_4
    v4 = PermGroup(4, _cycles(4, "(1 2)(3 4)", "(1 3)(2 4)"), transitive=True)
    v4_subs = {"T": v4}
    for i, spec in enumerate(["(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"], start=1):
        v4_subs[f"C2-{i}"] = PermGroup(4, _cycles(4, spec))
    add("V4", v4, v4_subs, _standard_presets(v4))

    # S3 natural
    s3 = PermGroup(3, _cycles(3, "(1 2 3)", "(1 2)"), transitive=True)
    a3 = PermGroup(3, _cycles(3, "(1 2 3)"))
    add("S3", s3, {"T": a3}, _standard_presets(s3))

    # D4 in S_4 natural
    d4 = PermGroup(4, _cycles(4, "(1 2 3 4)", "(1 3)"), transitive=True)
    d4_subs = {
        "T": PermGroup(4, _cycles(4, "(1 2 3 4)")),
        "V4": PermGroup(4, _cycles(4, "(1 2)(3 4)", "(1 3)(2 4)")),
        "V4-reflections": PermGroup(4, _cycles(4, "(1 3)", "(2 4)")),
        "center": PermGroup(4, _cycles(4, "(1 3)(2 4)")),
    }
    add("D4", d4, d4_subs, _standard_presets(d4))

    # A4 and S4 natural, V4 inside
    a4 = PermGroup(4, _cycles(4, "(1 2 3)", "(1 2)(3 4)"), transitive=True)
    v4_in = PermGroup(4, _cycles(4, "(1 2)(3 4)", "(1 3)(2 4)"))
    add("A4", a4, {"T": v4_in}, _standard_presets(a4))

    s4 = PermGroup(4, _cycles(4, "(1 2 3 4)", "(1 2)"), transitive=True)
    add("S4", s4, {"T": v4_in}, _standard_presets(s4))

    # C3 wr C2 in S_6, the wreath counterexample group
    kl = PermGroup(6, _cycles(6, "(1 2 3)", "(4 5 6)", "(1 4)(2 5)(3 6)"),
                   transitive=True)
    kl_subs = {
        "T": PermGroup(6, _cycles(6, "(1 2 3)", "(4 5 6)")),
        "diagonal": PermGroup(6, _cycles(6, "(1 2 3)(4 5 6)")),
    }
    add("kluners", kl, kl_subs, _kluners_presets(kl))

    return out


def names() -> list[str]:
    return sorted(entries())


def get(name: str) -> CatalogEntry:
    try:
        return entries()[name]
    except KeyError:
        raise ResolutionError(
            f"unknown catalog group {name!r}; choices: {names()}") from None


def twist_cases(max_order: int = 24) -> list[tuple]:
    """(entry, subgroup name, T, preset name, TwistGroup) for every abelian
    normal subgroup of every catalog group of order <= max_order, with at
    least the two standard presets each."""
    cases = []
    for name in names():
        entry = get(name)
        if entry.group.order > max_order:
            continue
        for sub_name in sorted(entry.subgroups):
            T = entry.subgroups[sub_name]
            if T.order <= 1:
                continue
            for preset in sorted(entry.presets):
                gamma = entry.action(preset, sub_name)
                cases.append((entry, sub_name, T, preset, gamma))
    return cases
