"""Exact oracles: three independent routes must agree with each other
and with closed forms, and every hand-frozen value must hold exactly."""

from fractions import Fraction

import pytest

from chromapprox.exact import (
    DC_CAP,
    INTERP_CAP,
    NBC_CAP,
    PARTITION_CAP,
    PATHCOUNT_CAP,
    ExactPolynomial,
    OracleCapError,
    count_proper_colorings,
    exact_by_interpolation,
    exact_deletion_contraction,
    exact_nbc_counts,
    formula_family,
    independent_partition_counts,
    refinement_path_count,
    whitney_polynomial,
)
from chromapprox.graph import Graph, gen_er, gen_named, input_edge_order

KITE = gen_named("kite")


# ---------------------------------------------------------------------------
# ExactPolynomial


def test_polynomial_basics():
    p = ExactPolynomial((0, -4, 8, -5, 1))  # x^4 - 5x^3 + 8x^2 - 4x
    assert p.degree == 4
    assert p(0) == 0
    assert p(1) == 0
    assert p(2) == 0
    assert p(3) == 6
    assert p(Fraction(1, 2)) == Fraction(0 * 16 - 4 * 8 + 8 * 4 - 5 * 2 + 1, 16)
    assert p.coefficient(4) == 1
    assert p.coefficient(9) == 0
    assert p.b_magnitudes() == (1, 5, 8, 4)
    assert p.chromatic_number() == 3
    assert "x^4" in str(p)
    with pytest.raises(ValueError):
        ExactPolynomial(())


def test_whitney_polynomial_assembly():
    p = whitney_polynomial((1, 5, 8, 4))
    assert p.coeffs == (0, -4, 8, -5, 1)
    assert p.coefficient(p.degree) == 1


# ---------------------------------------------------------------------------
# deletion-contraction


def test_dc_kite():
    p = exact_deletion_contraction(KITE)
    assert p.coeffs == (0, -4, 8, -5, 1)


def test_dc_disconnected_multiplies():
    g = Graph(4, [(0, 1), (2, 3)])
    p = exact_deletion_contraction(g)
    for k in range(6):
        assert p(k) == (k * (k - 1)) ** 2


def test_dc_edgeless():
    p = exact_deletion_contraction(Graph(3, []))
    assert p.coeffs == (0, 0, 0, 1)


# ---------------------------------------------------------------------------
# brute-force counting + interpolation


def test_count_proper_colorings_kite():
    # frozen: brute force gives exactly 6 proper 3-colorings of the kite
    assert count_proper_colorings(KITE, 3) == 6
    assert count_proper_colorings(KITE, 0) == 0
    assert count_proper_colorings(KITE, 2) == 0
    p = exact_deletion_contraction(KITE)
    for k in range(7):
        assert count_proper_colorings(KITE, k) == p(k)


def test_count_proper_colorings_edge_cases():
    assert count_proper_colorings(Graph(1, []), 5) == 5
    assert count_proper_colorings(Graph(4, [(0, 1), (2, 3)]), 3) == 36
    with pytest.raises(ValueError):
        count_proper_colorings(KITE, -1)


def test_interpolation_matches_dc_on_random_graphs():
    for n, seed in [(5, 1), (6, 2), (7, 3), (8, 4)]:
        g = gen_er(n, 0.5, seed)
        assert exact_by_interpolation(g).coeffs == exact_deletion_contraction(g).coeffs


# ---------------------------------------------------------------------------
# broken-circuit-free subgraph counts


def test_nbc_counts_kite():
    counts = exact_nbc_counts(KITE, input_edge_order(KITE))
    assert counts == (1, 5, 8, 4)
    assert whitney_polynomial(counts).coeffs == exact_deletion_contraction(KITE).coeffs


def test_nbc_counts_basics():
    g = gen_named("tree_star", 5)
    counts = exact_nbc_counts(g, input_edge_order(g))
    # forests have no circuits at all: every subset survives
    assert counts == (1, 4, 6, 4, 1)

    c4 = gen_named("cycle", 4)
    counts = exact_nbc_counts(c4, input_edge_order(c4))
    assert counts[0] == 1
    assert counts[1] == c4.m
    assert whitney_polynomial(counts).coeffs == exact_deletion_contraction(c4).coeffs


def test_nbc_counts_match_dc_on_random_graphs():
    for n, seed in [(5, 11), (6, 12), (7, 13)]:
        g = gen_er(n, 0.5, seed)
        counts = exact_nbc_counts(g, input_edge_order(g))
        assert whitney_polynomial(counts).coeffs == exact_deletion_contraction(g).coeffs


# ---------------------------------------------------------------------------
# closed forms


def test_formula_family_against_dc():
    for n in range(4, 8):
        assert formula_family("wheel", n).coeffs == \
            exact_deletion_contraction(gen_named("wheel", n)).coeffs
    for n in range(3, 8):
        assert formula_family("cycle", n).coeffs == \
            exact_deletion_contraction(gen_named("cycle", n)).coeffs
    for n in range(1, 7):
        assert formula_family("complete", n).coeffs == \
            exact_deletion_contraction(gen_named("complete", n)).coeffs
    for n in range(1, 7):
        tree = formula_family("tree", n)
        assert tree.coeffs == exact_deletion_contraction(gen_named("tree_star", n)).coeffs
        assert tree.coeffs == exact_deletion_contraction(gen_named("path", n)).coeffs


def test_formula_family_rejects():
    with pytest.raises(ValueError):
        formula_family("wheel", 3)
    with pytest.raises(ValueError):
        formula_family("petersen", 10)


# ---------------------------------------------------------------------------
# partition-side references


def test_independent_partition_counts_known():
    # kite: only non-adjacent pair is (1, 3)
    assert independent_partition_counts(KITE) == (0, 0, 1, 1)
    assert independent_partition_counts(gen_named("path", 4)) == (0, 1, 3, 1)
    # edgeless graph: all partitions are independent, totals are Bell numbers
    assert sum(independent_partition_counts(Graph(4, []))) == 15


def test_partition_counts_reassemble_polynomial():
    for g in [KITE, gen_named("path", 4), gen_er(6, 0.5, 9)]:
        counts = independent_partition_counts(g)
        p = exact_deletion_contraction(g)
        for k in range(g.n + 2):
            total = 0
            for t, pt in enumerate(counts, start=1):
                ff = 1
                for j in range(t):
                    ff *= k - j
                total += pt * ff
            assert total == p(k)


def test_refinement_path_count_small_cases():
    assert refinement_path_count([1]) == 1
    assert refinement_path_count([2]) == 1
    assert refinement_path_count([1, 1, 1]) == 1
    assert refinement_path_count([2, 2]) == 2
    assert refinement_path_count([3]) == 3
    assert refinement_path_count([2, 2, 1]) == 2
    assert refinement_path_count([3, 2]) == 9


def test_refinement_path_count_single_block_closed_form():
    import math

    for n in range(2, 7):
        expected = math.factorial(n) * math.factorial(n - 1) // 2 ** (n - 1)
        assert refinement_path_count([n]) == expected


def test_refinement_path_count_rejects():
    with pytest.raises(ValueError):
        refinement_path_count([0, 2])


# ---------------------------------------------------------------------------
# caps


def test_caps_raise():
    big = gen_named("cycle", 20)
    with pytest.raises(OracleCapError):
        exact_deletion_contraction(big)
    with pytest.raises(OracleCapError):
        exact_by_interpolation(big)
    with pytest.raises(OracleCapError):
        exact_nbc_counts(big, input_edge_order(big))
    with pytest.raises(OracleCapError):
        independent_partition_counts(big)
    with pytest.raises(OracleCapError):
        refinement_path_count([10])
    # caps are parameters, not hard limits
    assert exact_deletion_contraction(gen_named("cycle", 16), cap=16).degree == 16
    with pytest.raises(OracleCapError):
        exact_deletion_contraction(KITE, cap=3)


def test_cap_constants_ordering():
    assert INTERP_CAP <= NBC_CAP <= DC_CAP
    assert PATHCOUNT_CAP <= PARTITION_CAP
