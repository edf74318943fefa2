import math
import random
from fractions import Fraction

import pytest

from malle.abgroup import FiniteAbelianGroup, parse_abelian, regular_index
from malle.counting import (CountSeries, HomCounter, automorphism_count,
                            brute_histogram, conductor_of, count,
                            discriminant_of, default_grid, fit_exponents,
                            homs_with_conductor, homs_with_modulus, image_of,
                            is_surjective, ram_of, unit_components)
from malle.errors import ValidationError


def cumulative(hist, X):
    return sum(c for v, c in hist.items() if v < X)


def test_unit_components_structure():
    comps = unit_components(360)  # 2^3 * 3^2 * 5
    by_p = {c.prime: c for c in comps}
    assert sorted(by_p) == [2, 3, 5]
    assert [n for _, n in by_p[2].generators] == [2, 2]
    assert [n for _, n in by_p[3].generators] == [6]
    assert [n for _, n in by_p[5].generators] == [4]
    # total unit group order = phi(360)
    total = 1
    for c in comps:
        for _, n in c.generators:
            total *= n
    assert total == 96


def test_homs_with_conductor_examples():
    C2 = FiniteAbelianGroup([2])
    assert len(homs_with_conductor(C2, 1)) == 1
    assert len(homs_with_conductor(C2, 8)) == 2
    assert len(homs_with_conductor(C2, 4)) == 1
    assert len(homs_with_conductor(C2, 2)) == 0

    C3 = FiniteAbelianGroup([3])
    assert len(homs_with_conductor(C3, 7)) == 2
    assert len(homs_with_conductor(C3, 5)) == 0
    assert len(homs_with_conductor(C3, 9)) == 2


def test_discriminant_examples():
    C2 = FiniteAbelianGroup([2])
    trivial = homs_with_conductor(C2, 1)[0]
    assert discriminant_of(trivial) == 1
    assert ram_of(trivial) == 1
    for h in homs_with_conductor(C2, 8):
        assert discriminant_of(h) == 8
    C3 = FiniteAbelianGroup([3])
    for h in homs_with_conductor(C3, 7):
        assert discriminant_of(h) == 49
        assert ram_of(h) == 7


def test_quadratic_discriminants_are_fundamental():
    """C2 hom discs below 60 = |D| over fundamental discriminants D, with
    multiplicity (both signs of D can share one absolute value)."""
    C2 = FiniteAbelianGroup([2])
    got = sorted(discriminant_of(h)
                 for m in range(1, 61) for h in homs_with_conductor(C2, m)
                 if discriminant_of(h) < 60)

    def issquarefree(n):
        return all(n % (q * q) for q in range(2, int(abs(n) ** 0.5) + 1))

    fundamental = [1]  # trivial hom, disc 1
    for D in list(range(-60, 0)) + list(range(2, 60)):
        if abs(D) >= 60:
            continue
        if D % 4 == 1 and issquarefree(D):
            fundamental.append(abs(D))
        elif D % 4 == 0:
            k = D // 4
            if k % 4 in (2, 3) and issquarefree(k):
                fundamental.append(abs(D))
    assert got == sorted(fundamental)


def test_tame_disc_valuation_matches_ind():
    """Conductor-discriminant exponents equal the translation-action index."""
    for spec in ("C2", "C3", "C4", "C2x2"):
        A = parse_abelian(spec)
        for m in range(1, 400):
            for hom in homs_with_conductor(A, m):
                disc = discriminant_of(hom)
                for comp, images in hom.blocks():
                    p = comp.prime
                    if p == 2 or p * p % m == 0 or m % (p * p) == 0:
                        continue
                    # tame inertia image is the image of the unit generator
                    t = images[0]
                    vp = 0
                    d = disc
                    while d % p == 0:
                        d //= p
                        vp += 1
                    assert vp == regular_index(A, t), (spec, m, p)


def test_count_small_examples():
    C2 = FiniteAbelianGroup([2])
    s = count(C2, "disc", 3, grid=[3])
    assert s.counts == [1]
    s = count(C2, "disc", 9, grid=[4, 9])
    # discs < 9: trivial, then |D| = 3, 4, 5, 7 once each and 8 twice
    assert s.counts[-1] == 7
    s = count(C2, "ram", 10, grid=[10])
    # ram values < 10: trivial 1; p = 3, 5, 7 once each; 2 with three homs;
    # and 6 = 2*3 with three more
    assert s.counts == [1 + 3 + 3 + 3]


def test_counts_match_brute_force_all_and_surjective():
    rng = random.Random(3)
    for spec in ("C2", "C3", "C4", "C3x3"):
        A = parse_abelian(spec)
        limit = 1500 if A.order <= 4 else 400
        for ordering in ("disc", "ram"):
            hist = brute_histogram(A, ordering, limit)
            hist_surj = brute_histogram(A, ordering, limit, surjective_only=True)
            grid = sorted(rng.sample(range(2, limit), 6)) + [limit]
            s_all = count(A, ordering, limit, grid=grid)
            s_surj = count(A, ordering, limit, surjective_only=True, grid=grid)
            for X, got in zip(s_all.grid, s_all.counts):
                assert got == cumulative(hist, X), (spec, ordering, X)
            for X, got in zip(s_surj.grid, s_surj.counts):
                assert got == cumulative(hist_surj, X), (spec, ordering, X)


def test_brute_enumeration_order_invariance():
    A = parse_abelian("C4")
    up = brute_histogram(A, "disc", 600)
    down = brute_histogram(A, "disc", 600, modulus_order="descending")
    assert up == down


def test_counts_monotone():
    A = parse_abelian("C3")
    s = count(A, "disc", 10 ** 6)
    assert all(a <= b for a, b in zip(s.counts, s.counts[1:]))


def test_exact_values_agree_with_expand():
    """Hom counting and the Euler-product expansion give the same series."""
    from malle.catalog import get
    from malle.dirichlet import expand, family_from_action
    from malle.localfactors import EulerFactor

    bound = 3000
    for name, spec in (("C2", "C2"), ("C3", "C3")):
        entry = get(name)
        A = parse_abelian(spec)
        counter = HomCounter(A)
        got = counter.exact_values("ram", bound)

        fam = family_from_action(entry.subgroup("T"), entry.action("trivial-pi-over-Q"),
                                 "ram_pi")
        overrides = []
        for p in counter.wild_primes:
            items = {}
            for cond, d in counter.wild_local_data(p):
                items[1] = items.get(1, 0) + 1
            overrides.append((p, EulerFactor({0: 1, 1: items.get(1, 0)})))
        fam2 = type(fam)(fam.classes, overrides, exponent=fam.exponent)
        co = expand(fam2, bound, bound, assignment="mod-e")
        for n in range(1, bound + 1):
            assert co.value(n) == got.get(n, 0), (name, n)


def test_surjectivity_sieve_matches_images():
    A = parse_abelian("C4")
    m_homs = [h for m in range(1, 200) for h in homs_with_conductor(A, m)]
    surj = [h for h in m_homs if is_surjective(h)]
    assert all(len(image_of(h)) in (1, 2, 4) for h in m_homs)
    assert any(is_surjective(h) for h in m_homs)


def test_automorphism_count():
    assert automorphism_count(FiniteAbelianGroup([2])) == 1
    assert automorphism_count(FiniteAbelianGroup([3])) == 2
    assert automorphism_count(FiniteAbelianGroup([3, 3])) == 48
    assert automorphism_count(FiniteAbelianGroup([2, 2])) == 6


def test_field_counts():
    # quadratic fields: surjective homs / |Aut(C2)| = fundamental discs
    C2 = FiniteAbelianGroup([2])
    s = count(C2, "disc", 100, surjective_only=True, fields=True, grid=[100])
    hist = brute_histogram(C2, "disc", 100, surjective_only=True)
    assert s.counts[-1] == cumulative(hist, 100)

    C3 = FiniteAbelianGroup([3])
    s_homs = count(C3, "disc", 10 ** 4, surjective_only=True, grid=[10 ** 4])
    s_fields = count(C3, "disc", 10 ** 4, surjective_only=True, fields=True,
                     grid=[10 ** 4])
    assert s_homs.counts[-1] == 2 * s_fields.counts[-1]


def test_fit_exponents_synthetic():
    grid = [int(10 ** (k / 4)) for k in range(8, 41)]
    exact_power = CountSeries("disc", grid, [int(x) for x in grid], False)
    fit = fit_exponents(exact_power)
    assert abs(fit["a_hat"] - 1) < 0.02
    assert abs(fit["b_hat"] - 1) < 0.1

    shaped = CountSeries(
        "disc", grid,
        [max(1, int(x ** 0.5 * math.log(x) ** 2)) for x in grid], False)
    fit = fit_exponents(shaped)
    assert abs(fit["a_hat"] - 2) < 0.08
    assert abs(fit["b_hat"] - 3) < 0.25


def test_fit_exponents_needs_range():
    with pytest.raises(ValidationError):
        fit_exponents(CountSeries("disc", [10, 20, 30, 40, 50, 60, 70, 80],
                                  [1, 2, 3, 4, 5, 6, 7, 8], False))


def test_count_rejects_unknown_ordering():
    with pytest.raises(ValidationError):
        count(FiniteAbelianGroup([2]), "height", 100)
