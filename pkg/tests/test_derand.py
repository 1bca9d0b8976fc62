import itertools
import math

import pytest

from conftest import two_k4_two_joins, two_triangles_bridge
from smallcuts import rng
from smallcuts.derand import (
    BitLinearFamily,
    PerfectFamily,
    SampledFamily,
    UniversalFamily,
    _is_irreducible,
    build_bitlinear_family,
    build_ft_universal,
    build_perfect_family,
    deterministic_min_cut,
    irreducible_poly,
    perfect_family_budget,
    randomized_family_search,
    verify_universal,
)
from smallcuts.generators import cycle
from smallcuts.graphs import from_edge_list
from smallcuts.mincut import verify_cut
from smallcuts.oracles import min_cut_oracle


# ------------------------------------------------------------- GF(2) layer


def test_known_irreducible_polynomials():
    assert irreducible_poly(1) == 0b11
    assert irreducible_poly(2) == 0b111
    assert _is_irreducible(0b1011)  # x^3 + x + 1
    assert not _is_irreducible(0b101)  # x^2 + 1 = (x+1)^2
    assert not _is_irreducible(0b110)  # divisible by x


@pytest.mark.parametrize("degree", [3, 5, 8, 11, 13])
def test_irreducible_poly_has_right_degree(degree):
    f = irreducible_poly(degree)
    assert f.bit_length() - 1 == degree
    assert _is_irreducible(f)


# ------------------------------------------------------ bit-linear families


def test_bitlinear_family_size_and_totality():
    fam = build_bitlinear_family(3, 3, 0.1)
    # field: ceil(log2(9/0.1)) + 2 = 9 bits; size 2^18
    assert fam.size == 2**18
    for idx in range(0, fam.size, 4097):
        for v in range(8):
            assert 0 <= fam.evaluate(idx, v) < 8


def test_bitlinear_contains_injective_member():
    fam = build_bitlinear_family(3, 3, 0.1)
    found = False
    for idx in range(fam.size):
        table = fam.value_table(idx)
        if len(set(table)) == 8:
            found = True
            break
    assert found


def test_bitlinear_beta_zero_is_single_constant():
    fam = build_bitlinear_family(4, 0, 0.1)
    assert fam.size == 1
    assert fam.value_table(0) == [0] * 16


def test_bitlinear_pair_statistics_exhaustive():
    fam = build_bitlinear_family(4, 2, 0.1)
    worst = fam.pair_statistics()
    assert worst <= 1.5 / 2**4  # (1 + eps') / 2^(2*beta) with eps' <= 0.5


def test_bitlinear_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_bitlinear_family(0, 3, 0.1)
    with pytest.raises(ValueError):
        build_bitlinear_family(3, 3, 1.5)
    with pytest.raises(ValueError):
        build_bitlinear_family(4096, 20, 0.0001)  # field overflow


# -------------------------------------------------------- perfect families


def test_perfect_identity_when_k_reaches_domain():
    fam = build_perfect_family(8, 9)
    assert fam.kind == "identity"
    assert fam.size == 1
    ok, _ = fam.injectivity_audit()
    assert ok


def test_perfect_family_k1_is_vacuous():
    fam = build_perfect_family(10, 1)
    ok, bad = fam.injectivity_audit()
    assert ok and not bad


def test_perfect_family_16_3_exhaustive():
    fam = build_perfect_family(16, 3)
    assert fam.range_size == 18
    ok, bad = fam.injectivity_audit()
    assert ok, f"uncovered: {bad[:3]}"
    assert fam.size <= perfect_family_budget(16, 3)


def test_perfect_family_search_mode():
    fam = build_perfect_family(14, 5, mode="search", seed=3)
    assert fam.kind == "search"
    ok, _ = fam.injectivity_audit()
    assert ok
    # deterministic rebuild
    again = build_perfect_family(14, 5, mode="search", seed=3)
    assert again._tables == fam._tables


def test_perfect_family_values_in_range():
    fam = build_perfect_family(16, 3)
    for h in range(0, fam.size, max(1, fam.size // 50)):
        table = fam.value_table(h)
        assert all(1 <= v <= fam.range_size for v in table)
        assert fam.value(h, 5) == table[4]


# ----------------------------------------------------- FT universal sets


def test_universal_10_3_1_exhaustive_zero_violations():
    fam = build_ft_universal(10, 3, 1)
    report = verify_universal(fam, mode="exhaustive")
    assert report.ok
    assert report.checked > 1000
    assert fam.member_count == fam.perfect.size * fam.range_size


def test_universal_b0_members_are_everything():
    fam = build_ft_universal(10, 3, 0, mode="search")
    member = fam.member(0)
    assert member.materialize() == frozenset(range(1, 11))
    assert verify_universal(fam, mode="exhaustive").ok


def test_universal_member_count_formula():
    fam = build_ft_universal(12, 4, 1, mode="search")
    assert fam.member_count == fam.perfect.size * fam.range_size
    member = fam.member(fam.member_count - 1)
    assert member.h == fam.perfect.size - 1


def test_universal_membership_is_lazy_and_consistent():
    fam = build_ft_universal(10, 3, 2, mode="search")
    member = fam.member(17)
    explicit = member.materialize()
    for x in range(1, 11):
        assert (x in member) == (x in explicit)


def test_verifier_flags_broken_family():
    # all-constant hashes: banning one bucket empties every member
    broken = PerfectFamily(6, 3, "search", tables=[[1] * 6], seed=0)
    fam = UniversalFamily(6, 2, 1, broken)
    report = verify_universal(fam, mode="exhaustive")
    assert not report.ok
    assert report.violations


def test_universal_sampled_mode():
    fam = build_ft_universal(12, 4, 1, mode="search")
    report = verify_universal(fam, mode="sampled", trials=500, seed=1)
    assert report.ok
    assert report.checked == 500


def test_universal_rejects_bad_shapes():
    with pytest.raises(ValueError):
        build_ft_universal(10, 2, 3)  # b >= a with a < n


def test_eq1_transfer_on_search_family():
    # paths of a cycle vs fault sets: some member keeps the path, drops the faults
    g = cycle(8)
    fam = build_ft_universal(8, 4, 2, mode="search")
    hints = []
    path_sets = [
        tuple(range(start + 1, start + 1 + length))
        for start in range(4)
        for length in (1, 2, 3, 4)
    ]
    for path in path_sets:
        rest = [e for e in range(1, 9) if e not in path]
        for faults in itertools.combinations(rest, 2):
            member = fam.find_member_for(path, faults, hints)
            assert member is not None
            assert all(e in member for e in path)
            assert not any(e in member for e in faults)


# ------------------------------------------------- sampled family baseline


def test_randomized_family_search_size_and_property():
    fam = randomized_family_search(10, 3, 1, seed=0)
    assert fam.size <= math.ceil(5 * math.e * 9 * math.log(10))
    # spot re-check of the property
    assert any(
        {1, 2, 3} <= s and 7 not in s for s in fam.subsets
    )


def test_randomized_family_search_rejects_a1():
    with pytest.raises(ValueError):
        randomized_family_search(10, 1, 1)


# --------------------------------------------------- deterministic min cut


def test_det_min_cut_bridge():
    g = two_triangles_bridge()
    res = deterministic_min_cut(g, 1)
    assert res.value == 1
    assert res.witness == frozenset({7})
    assert res.mode == "deterministic"
    assert res.seed is None
    assert verify_cut(g, res.witness, 1).is_cut


def test_det_min_cut_is_bit_reproducible():
    g = two_triangles_bridge()
    a = deterministic_min_cut(g, 1)
    b = deterministic_min_cut(g, 1)
    assert a.digest == b.digest
    assert (a.value, a.witness, a.rounds, a.iterations) == (
        b.value,
        b.witness,
        b.rounds,
        b.iterations,
    )


def test_det_min_cut_consumes_zero_randomness():
    g = two_triangles_bridge()
    rng.reset_draw_counter()
    deterministic_min_cut(g, 1)
    assert rng.draws == 0


def test_det_min_cut_two_k4():
    g = two_k4_two_joins()
    res = deterministic_min_cut(g, 2)
    assert res.value == 2
    assert res.witness == frozenset({13, 14})


def test_det_min_cut_exceeds_on_overconnected():
    g = cycle(5)
    res = deterministic_min_cut(g, 1)
    assert res.exceeds_bound


def test_det_min_cut_family_reported():
    g = cycle(4)
    res = deterministic_min_cut(g, 2)
    assert res.value == 2
    assert res.family is not None
    assert res.family["member_count"] == res.iterations


def test_det_min_cut_budget_error():
    g = two_k4_two_joins()
    with pytest.raises(RuntimeError, match="budget"):
        deterministic_min_cut(g, 2, iteration_budget=100)
