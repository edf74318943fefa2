import random

import pytest

from malle.catalog import get
from malle.errors import ValidationError
from malle.perm import Permutation
from malle.twist import (ActionPair, TwistGroup, act, burnside_orbit_count,
                         closure, fixed_point_count, orbits,
                         trivial_conjugator_action)


def kl_setup():
    entry = get("kluners")
    T = entry.subgroup("T")
    s = Permutation.from_cycles("(1 4)(2 5)(3 6)", 6)
    return entry, T, s


def a_set(T):
    from malle.invariants import minimal_index_set
    return minimal_index_set(T)


def test_closure_examples():
    gp = closure([], 3, degree=6)
    assert gp.order == 1

    _, T, s = kl_setup()
    split = closure([ActionPair(s, 2)], 3)
    assert split.order == 2

    cyc = closure([ActionPair(Permutation.identity(6), 2)], 3)
    assert cyc.order == 2
    assert cyc.unit_projection() == frozenset({1, 2})


def test_closure_unit_coprimality():
    with pytest.raises(ValidationError):
        closure([ActionPair(Permutation.identity(6), 3)], 3)


def test_act_examples():
    _, T, s = kl_setup()
    t = Permutation.from_cycles("(1 2 3)", 6)
    ident = ActionPair(Permutation.identity(6), 1)
    assert act(ident, t, 3) == t

    # unit 2 with the block swap sends (1 2 3) to (4 5 6)^2
    expected = Permutation.from_cycles("(4 5 6)", 6) ** 2
    assert act(ActionPair(s, 2), t, 3) == expected

    # unit 2 alone inverts
    assert act(ActionPair(Permutation.identity(6), 2), t, 3) == t ** 2


def test_act_is_left_action():
    rng = random.Random(3)
    entry, T, s = kl_setup()
    gamma = entry.action("product")
    pairs = gamma.sorted_pairs()
    els = T.sorted_elements()
    e = gamma.exponent

    def mul(p, q):
        return ActionPair(p.conjugator * q.conjugator, (p.unit * q.unit) % e)

    for _ in range(200):
        p, q = rng.choice(pairs), rng.choice(pairs)
        t = rng.choice(els)
        assert act(mul(p, q), t, e) == act(p, act(q, t, e), e)


def test_orbit_examples():
    entry, T, s = kl_setup()
    aset = a_set(T)

    trivial = closure([], 3, degree=6)
    orbs = orbits(trivial, aset)
    assert len(orbs) == len(aset)

    split = entry.action("kluners-split")
    assert len(orbits(split, aset)) == 2

    nonsplit = entry.action("kluners-nonsplit")
    assert nonsplit.order == 4
    assert len(orbits(nonsplit, aset)) == 1


def test_orbits_disjoint_cover():
    entry, T, _ = kl_setup()
    for preset in ("trivial-pi-over-Q", "kluners-split", "kluners-nonsplit", "product"):
        gamma = entry.action(preset)
        els = T.sorted_elements()
        orbs = orbits(gamma, els)
        seen = set()
        for orb in orbs:
            assert not (orb & seen)
            seen |= orb
        assert seen == set(els)


def test_orbits_requires_closed_set():
    entry, T, s = kl_setup()
    gamma = entry.action("kluners-split")
    t = Permutation.from_cycles("(1 2 3)", 6)
    with pytest.raises(ValidationError):
        orbits(gamma, [t])


def test_fixed_point_examples():
    entry, T, s = kl_setup()
    aset = a_set(T)
    ident = ActionPair(Permutation.identity(6), 1)
    assert fixed_point_count(ident, aset, 3) == 4
    assert fixed_point_count(ActionPair(s, 2), aset, 3) == 0
    # over the whole T the swap/invert pair fixes the skew diagonal
    assert fixed_point_count(ActionPair(s, 2), T.sorted_elements(), 3) == 3


def test_burnside_identity_catalog():
    """Average fixed points equals the orbit count on every closed subset."""
    from malle.catalog import twist_cases
    for entry, sub_name, T, preset, gamma in twist_cases():
        els = T.sorted_elements()
        avg = burnside_orbit_count(gamma, els)
        assert avg.denominator == 1
        assert avg == len(orbits(gamma, els))


def test_burnside_identity_on_random_closed_subsets():
    rng = random.Random(5)
    entry, T, _ = kl_setup()
    for preset in ("kluners-split", "kluners-nonsplit", "product"):
        gamma = entry.action(preset)
        els = T.sorted_elements()
        for _ in range(20):
            seed = rng.sample(els, rng.randrange(1, len(els)))
            # close the seed under the action
            S = set(seed)
            frontier = list(seed)
            while frontier:
                t = frontier.pop()
                for p in gamma.pairs:
                    u = act(p, t, gamma.exponent)
                    if u not in S:
                        S.add(u)
                        frontier.append(u)
            avg = burnside_orbit_count(gamma, sorted(S, key=lambda x: x.images))
            assert avg.denominator == 1
            assert avg == len(orbits(gamma, S))


def test_json_roundtrip():
    entry, T, s = kl_setup()
    gamma = entry.action("kluners-split")
    again = TwistGroup.from_json(gamma.to_json())
    assert again.pairs == gamma.pairs


def test_trivial_conjugator_action_units():
    gp = trivial_conjugator_action(6, 3)
    assert gp.order == 2
    gp5 = trivial_conjugator_action(5, 5)
    assert gp5.order == 4
