import random
from fractions import Fraction

import pytest

from malle.catalog import get, twist_cases
from malle.errors import ValidationError
from malle.invariants import (a_invariant, admissible_twist_groups, b_malle,
                              b_twisted, lower_bound_exponents,
                              minimal_index_set, turkelli_B)
from malle.perm import PermGroup, Permutation
from malle.twist import ActionPair, TwistGroup, burnside_orbit_count


def test_a_invariant_examples():
    assert a_invariant(get("kluners").subgroup("T")) == 2
    assert a_invariant(get("C2").group) == 1
    assert a_invariant(get("V4").group) == 2
    assert a_invariant(get("C4").group) == 2
    with pytest.raises(ValidationError):
        a_invariant(PermGroup(3, []))


def test_minimal_index_set_examples():
    T = get("kluners").subgroup("T")
    expected = {Permutation.from_cycles(s, 6)
                for s in ["(1 2 3)", "(1 3 2)", "(4 5 6)", "(4 6 5)"]}
    assert set(minimal_index_set(T)) == expected

    c2 = get("C2").group
    assert minimal_index_set(c2) == [Permutation.from_cycles("(1 2)", 2)]

    c4 = get("C4").group
    sq = Permutation.from_cycles("(1 3)(2 4)", 4)
    assert minimal_index_set(c4) == [sq]


def test_b_twisted_kluners():
    entry = get("kluners")
    T = entry.subgroup("T")
    rep_split = b_twisted(T, entry.action("kluners-split"))
    assert (rep_split.a, rep_split.b) == (2, 2)
    rep_ns = b_twisted(T, entry.action("kluners-nonsplit"))
    assert (rep_ns.a, rep_ns.b) == (2, 1)


def test_b_twisted_trivial_action_counts_A():
    for name in ("C2", "C3", "C4", "V4"):
        entry = get(name)
        T = entry.subgroup("T")
        rep = b_twisted(T, entry.action("trivial"))
        assert rep.b == len(minimal_index_set(T))


def test_b_twisted_rejects_bad_conjugator():
    T = get("kluners").subgroup("T")
    bad = TwistGroup(3, [ActionPair(Permutation.from_cycles("(3 4)", 6), 1)])
    with pytest.raises(ValidationError):
        b_twisted(T, bad)


def test_b_twisted_equals_burnside_average_on_catalog():
    for entry, sub_name, T, preset, gamma in twist_cases():
        rep = b_twisted(T, gamma)
        avg = burnside_orbit_count(gamma, minimal_index_set(T))
        assert avg == rep.b, (entry.name, sub_name, preset)


def test_b_twisted_coboundary_insensitivity():
    """Multiplying each conjugator by a subgroup element leaves b unchanged."""
    rng = random.Random(17)
    for entry, sub_name, T, preset, gamma in twist_cases():
        if not T.is_abelian():
            continue
        els = T.sorted_elements()
        pairs = [ActionPair(rng.choice(els) * p.conjugator, p.unit)
                 for p in gamma.sorted_pairs()]
        try:
            shifted = TwistGroup(gamma.exponent, pairs, degree=gamma.degree)
        except Exception:
            continue
        assert b_twisted(T, shifted).b == b_twisted(T, gamma).b, \
            (entry.name, sub_name, preset)


def test_b_bounds():
    for entry, sub_name, T, preset, gamma in twist_cases():
        rep = b_twisted(T, gamma)
        assert 1 <= rep.b <= len(minimal_index_set(T))


def test_b_malle_examples():
    assert b_malle(get("kluners").group) == 1
    assert b_malle(get("S3").group) == 1
    # abelian G with full units agrees with the twisted invariant
    for name in ("C2", "C3", "C4", "V4"):
        entry = get(name)
        G = entry.group
        rep = b_twisted(G, entry.action("trivial-pi-over-Q"))
        assert b_malle(G) == rep.b


def test_turkelli_examples():
    entry = get("kluners")
    T = entry.subgroup("T")
    G = entry.group
    B = turkelli_B(G, T, entry.action("trivial-pi-over-Q"))
    assert B == 2

    # abelian ambient group: B collapses to the twisted invariant
    v4 = get("V4")
    gamma = v4.action("trivial-pi-over-Q")
    assert turkelli_B(v4.group, v4.group, gamma) == b_twisted(v4.group, gamma).b

    # A(T) central in T (abelian): equality with b
    c4 = get("C4")
    gamma4 = c4.action("trivial-pi-over-Q")
    assert turkelli_B(c4.group, c4.group, gamma4) == b_twisted(c4.group, gamma4).b


def test_turkelli_dominates_b():
    for entry, sub_name, T, preset, gamma in twist_cases():
        if entry.group.order > 20:
            continue
        B = turkelli_B(entry.group, T, gamma)
        assert B >= b_twisted(T, gamma).b, (entry.name, sub_name, preset)


def test_lower_bound_examples():
    # abelian regular: Malle's own exponents
    v4 = get("V4")
    rec = lower_bound_exponents(v4.group)
    assert rec.power_of_X == Fraction(1, 2)
    assert rec.power_of_log == b_malle(v4.group) - 1 == 2

    s4 = get("S4")
    rec = lower_bound_exponents(s4.group)
    assert rec.power_of_X == Fraction(1, 2)

    kl = get("kluners")
    rec = lower_bound_exponents(kl.group)
    assert rec.power_of_X == Fraction(1, 2)
    assert rec.power_of_log == 1


def test_admissible_twists_include_split_case():
    kl = get("kluners")
    T = kl.subgroup("T")
    split = kl.action("kluners-split")
    found = any(gp.pairs == split.pairs
                for gp in admissible_twist_groups(kl.group, T))
    assert found


def test_lower_bound_requires_abelian_normal():
    a5 = PermGroup(5, [Permutation.from_cycles("(1 2 3 4 5)", 5),
                       Permutation.from_cycles("(1 2 3)", 5)])
    with pytest.raises(ValidationError):
        lower_bound_exponents(a5)
