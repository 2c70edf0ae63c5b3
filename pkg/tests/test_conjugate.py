"""Sentinel factorization, corner values, and the E00 conjugation."""

import random
from fractions import Fraction

import pytest

from lyapdisp import catalog, exactmat, words
from lyapdisp.conjugate import (
    NotIdempotentSimilar,
    conjugation_matrix,
    corner_value,
    sentinel_factorization,
)
from lyapdisp.exactmat import RankNotOne, RationalMatrix, elementary, identity

ALL_FAMILIES = list(catalog.family_names())


def fact_for(name):
    fam = catalog.get_family(name)
    return sentinel_factorization(fam.d0, fam.d1, fam.q, fam.name), fam


class TestSentinelFactorization:
    def test_binomial(self):
        fact, _ = fact_for("g1")
        assert fact.alpha == (1,)
        assert fact.beta == (1,)

    def test_quadrinomial(self):
        fact, _ = fact_for("g3")
        assert fact.alpha == (1, 0, 0)
        assert fact.beta == (1, 2, 2)

    def test_identity_rejected(self):
        with pytest.raises(RankNotOne):
            sentinel_factorization(identity(2), identity(2), 1)

    def test_wrong_trace_rejected(self):
        d0 = elementary(2, 0, 0).scale(2)  # rank 1 but trace 2
        with pytest.raises(NotIdempotentSimilar):
            sentinel_factorization(d0, identity(2), 1)

    @pytest.mark.parametrize("name", ALL_FAMILIES)
    def test_normalization_and_reconstruction(self, name):
        fact, fam = fact_for(name)
        dot = sum((a * b for a, b in zip(fact.alpha, fact.beta)), Fraction(0))
        assert dot == 1
        power = exactmat.mat_pow(fam.d0, fam.q)
        rebuilt = RationalMatrix(
            [[a * b for b in fact.beta] for a in fact.alpha]
        )
        assert rebuilt == power


class TestCornerValue:
    def test_empty_word(self):
        fact, _ = fact_for("h4")
        assert corner_value(fact, "") == 1

    def test_quadrinomial_single_one(self):
        fact, _ = fact_for("g3")
        assert corner_value(fact, "1") == 4

    def test_trinomial_formula(self):
        fact, _ = fact_for("g2")
        assert corner_value(fact, "111") == 11
        for k in range(10):
            assert corner_value(fact, "1" * k) == Fraction(
                2 ** (k + 2) - (-1) ** k, 3
            )

    def test_invalid_symbol(self):
        fact, _ = fact_for("g1")
        with pytest.raises(ValueError):
            corner_value(fact, "102")

    @pytest.mark.parametrize("name", ALL_FAMILIES)
    def test_matches_tabulated_conjugated_pair(self, name):
        """corner(w) equals the (0,0) entry of the tabulated D'_w products."""
        fact, fam = fact_for(name)
        assert fam.d0_prime is not None
        for length in range(0, 9):
            for word in words.words_of_length(fam.q, length):
                matrix = identity(fam.dim)
                for symbol in word:
                    matrix = exactmat.mat_mul(
                        matrix,
                        fam.d0_prime if symbol == "0" else fam.d1_prime,
                    )
                assert corner_value(fact, word) == matrix[0, 0], (name, word)

    @pytest.mark.parametrize("name", ["g2", "g3", "g5"])
    def test_sentinel_multiplicativity(self, name):
        """corner(u 0^q v) = corner(u) * corner(v) for chi words u, v."""
        fact, fam = fact_for(name)
        rng = random.Random(19)
        pool = [
            w for length in range(0, 6)
            for w in words.words_of_length(fam.q, length)
        ]
        for _ in range(25):
            u, v = rng.choice(pool), rng.choice(pool)
            joined = u + "0" * fam.q + v
            assert corner_value(fact, joined) == \
                corner_value(fact, u) * corner_value(fact, v)


class TestConjugationMatrix:
    def test_binomial_trivial(self):
        fact, _ = fact_for("g1")
        res = conjugation_matrix(fact)
        assert res.d0_prime == RationalMatrix([[1]])
        assert res.d1_prime == RationalMatrix([[2]])

    @pytest.mark.parametrize("name", ALL_FAMILIES)
    def test_conjugates_sentinel_to_e00(self, name):
        fact, fam = fact_for(name)
        res = conjugation_matrix(fact)
        product = exactmat.mat_mul(res.q_matrix, res.q_inverse)
        assert product == identity(fam.dim)
        conj = exactmat.mat_mul(
            exactmat.mat_mul(res.q_inverse, exactmat.mat_pow(fam.d0, fam.q)),
            res.q_matrix,
        )
        assert conj == elementary(fam.dim, 0, 0)

    @pytest.mark.parametrize("name", ALL_FAMILIES)
    def test_corner_equals_conjugated_top_left(self, name):
        fact, fam = fact_for(name)
        res = conjugation_matrix(fact)
        top = 8 if fam.dim <= 4 else 6
        for length in range(0, top + 1):
            for word in words.words_of_length(fam.q, length):
                matrix = identity(fam.dim)
                for symbol in word:
                    matrix = exactmat.mat_mul(
                        matrix,
                        res.d0_prime if symbol == "0" else res.d1_prime,
                    )
                assert matrix[0, 0] == corner_value(fact, word)

    def test_basis_independence(self):
        fact, fam = fact_for("g3")
        default = conjugation_matrix(fact)
        # a different exact basis of the null space of beta^T: scale one
        # vector and mix in another
        pivot = next(j for j in range(fam.dim) if fact.beta[j] != 0)
        base = [
            tuple(
                Fraction(1) if i == j else
                (-fact.beta[j] / fact.beta[pivot] if i == pivot else Fraction(0))
                for i in range(fam.dim)
            )
            for j in range(fam.dim) if j != pivot
        ]
        twisted = [
            tuple(3 * x for x in base[0]),
            tuple(x + y for x, y in zip(base[0], base[1])),
        ]
        alt = conjugation_matrix(fact, null_basis=tuple(twisted))
        assert alt.q_matrix != default.q_matrix
        for length in range(0, 7):
            for word in words.words_of_length(fam.q, length):
                m1, m2 = identity(fam.dim), identity(fam.dim)
                for symbol in word:
                    m1 = exactmat.mat_mul(
                        m1, alt.d0_prime if symbol == "0" else alt.d1_prime
                    )
                    m2 = exactmat.mat_mul(
                        m2,
                        default.d0_prime if symbol == "0" else default.d1_prime,
                    )
                assert m1[0, 0] == m2[0, 0]

    def test_bad_basis_rejected(self):
        fact, fam = fact_for("g2")
        with pytest.raises((ValueError, exactmat.Singular, AssertionError)):
            conjugation_matrix(fact, null_basis=(fact.alpha,))
