"""Word enumeration and the corner-value scan against brute-force oracles."""

import math
import random
from fractions import Fraction
from itertools import product

import pytest

from lyapdisp import catalog, conjugate, exactmat, words
from lyapdisp.exactmat import RationalMatrix


def brute_words(q: int, length: int) -> list[str]:
    """Independent oracle: filter all 2^length words by the two rules."""
    if length == 0:
        return [""]
    out = []
    for bits in product("01", repeat=length):
        word = "".join(bits)
        if word.endswith("1") and "0" * q not in word:
            out.append(word)
    return out


def fact_for(name: str):
    fam = catalog.get_family(name)
    return conjugate.sentinel_factorization(fam.d0, fam.d1, fam.q, fam.name)


class TestWordsOfLength:
    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    @pytest.mark.parametrize("length", range(0, 13))
    def test_matches_brute_force(self, q, length):
        assert list(words.words_of_length(q, length)) == brute_words(q, length)

    def test_q1_is_all_ones(self):
        for k in range(8):
            expected = ["1" * k] if k else [""]
            assert list(words.words_of_length(1, k)) == expected

    def test_spec_examples(self):
        assert list(words.words_of_length(2, 3)) == ["011", "101", "111"]
        assert len(list(words.words_of_length(3, 4))) == 7


class TestWordCount:
    @pytest.mark.parametrize("q,expected", [
        (2, [1, 1, 2, 3, 5, 8]),
        (3, [1, 1, 2, 4, 7, 13]),
    ])
    def test_small_sequences(self, q, expected):
        assert [words.word_count(q, l) for l in range(6)] == expected

    def test_q1_always_one(self):
        assert all(words.word_count(1, l) == 1 for l in range(20))

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_matches_brute_filter_up_to_16(self, q):
        for length in range(17):
            assert words.word_count(q, length) == len(brute_words(q, length))
            assert words.word_count(q, length) == sum(
                1 for _ in words.words_of_length(q, length)
            )

    def test_membership_helper(self):
        assert words.is_chi_word("", 2)
        assert words.is_chi_word("101", 2)
        assert not words.is_chi_word("1001", 2)
        assert not words.is_chi_word("10", 2)


class TestFoldProducts:
    def test_empty_word_only(self):
        fact = fact_for("g2")
        seen = []
        words.fold_products(fact, 0, lambda w, c: seen.append((w, c)))
        assert seen == [("", Fraction(1))]

    def test_binomial_powers_of_two(self):
        fact = fact_for("g1")
        seen = {}
        words.fold_products(fact, 10, seen.__setitem__)
        assert seen == {"1" * k: Fraction(2**k) for k in range(11)}

    def test_trinomial_closed_form(self):
        fact = fact_for("g2")
        seen = {}
        words.fold_products(fact, 12, seen.__setitem__)
        for k in range(13):
            assert seen["1" * k] == Fraction(2 ** (k + 2) - (-1) ** k, 3)

    def test_visits_each_chi_word_once_in_order(self):
        fact = fact_for("g3")
        visited = []
        words.fold_products(fact, 7, lambda w, c: visited.append(w))

        # depth-first lexicographic reference walk
        expected = []

        def ref(prefix, run):
            if prefix == "" or prefix.endswith("1"):
                expected.append(prefix)
            if len(prefix) == 7:
                return
            if run + 1 < fact.q:
                ref(prefix + "0", run + 1)
            ref(prefix + "1", 0)

        ref("", 0)
        assert visited == expected
        assert len(set(visited)) == len(visited)

    def test_corners_match_full_matrix_products(self):
        """1000+ random visited words against a from-scratch recomputation."""
        rng = random.Random(41)
        for name in ("g2", "g3", "h4", "g5"):
            fact = fact_for(name)
            collected = []
            words.fold_products(fact, 10, lambda w, c: collected.append((w, c)))
            for word, corner in rng.choices(collected, k=260):
                matrix = exactmat.identity(fact.dim)
                for symbol in word:
                    matrix = exactmat.mat_mul(
                        matrix, fact.d0 if symbol == "0" else fact.d1
                    )
                expected = sum(
                    (
                        fact.beta[i] * matrix.rows[i][j] * fact.alpha[j]
                        for i in range(fact.dim)
                        for j in range(fact.dim)
                    ),
                    Fraction(0),
                )
                assert corner == expected

    def test_visitor_errors_propagate(self):
        fact = fact_for("g2")

        class Boom(Exception):
            pass

        def visitor(word, corner):
            if len(word) == 3:
                raise Boom

        with pytest.raises(Boom):
            words.fold_products(fact, 10, visitor)


def reference_stats(fact, max_len, ts=()):
    """Aggregate fold_products output with math.fsum as the oracle."""
    lns = [[] for _ in range(max_len + 1)]
    ln2s = [[] for _ in range(max_len + 1)]
    pows = [[[] for _ in range(max_len + 1)] for _ in ts]
    counts = [0] * (max_len + 1)
    zeros = [0] * (max_len + 1)

    def visit(word, corner):
        counts[len(word)] += 1
        if corner == 0:
            zeros[len(word)] += 1
            return
        value = math.log(abs(corner))
        lns[len(word)].append(value)
        ln2s[len(word)].append(value * value)
        for idx, t in enumerate(ts):
            pows[idx][len(word)].append(math.exp(t * value))

    words.fold_products(fact, max_len, visit)
    return (
        counts,
        zeros,
        [math.fsum(v) for v in lns],
        [math.fsum(v) for v in ln2s],
        [[math.fsum(v) for v in per_len] for per_len in pows],
    )


class TestScanCornerStats:
    @pytest.mark.parametrize("name", ["g1", "g2", "g3", "h3", "g5", "g6"])
    def test_matches_fold_aggregates(self, name):
        fact = fact_for(name)
        ts = (2.0, -0.5)
        stats = words.scan_corner_stats(fact, 9, ts=ts, threads=1)
        counts, zeros, sum_ln, sum_ln2, pow_sums = reference_stats(fact, 9, ts)
        assert list(stats.counts) == counts
        assert list(stats.zero_words) == zeros
        for a, b in zip(stats.sum_ln, sum_ln):
            assert a == pytest.approx(b, abs=1e-10)
        for a, b in zip(stats.sum_ln2, sum_ln2):
            assert a == pytest.approx(b, abs=1e-9)
        for got, want in zip(stats.pow_sums, pow_sums):
            for a, b in zip(got, want):
                assert a == pytest.approx(b, rel=1e-12, abs=1e-12)

    def test_counts_match_word_count(self):
        for name in ("g2", "g5"):
            fact = fact_for(name)
            stats = words.scan_corner_stats(fact, 14, threads=1)
            assert list(stats.counts) == [
                words.word_count(fact.q, l) for l in range(15)
            ]

    def test_fractional_entries_use_exact_offsets(self):
        # rank-1 idempotent d0 with non-integer entries
        d0 = RationalMatrix([["1/2", 1], ["1/4", "1/2"]])
        d1 = RationalMatrix([[1, 2], [1, 1]])
        fact = conjugate.sentinel_factorization(d0, d1, 1, "fractional")
        stats = words.scan_corner_stats(fact, 9, ts=(1.5,), threads=1)
        counts, zeros, sum_ln, sum_ln2, pow_sums = reference_stats(
            fact, 9, (1.5,)
        )
        assert list(stats.counts) == counts
        for a, b in zip(stats.sum_ln, sum_ln):
            assert a == pytest.approx(b, abs=1e-10)
        for a, b in zip(stats.pow_sums[0], pow_sums[0]):
            assert a == pytest.approx(b, rel=1e-12)

    def test_zero_corners_counted_and_skipped(self):
        d0 = exactmat.elementary(2, 0, 0)
        d1 = RationalMatrix([[0, 1], [1, 0]])
        fact = conjugate.sentinel_factorization(d0, d1, 1, "zeroy")
        stats = words.scan_corner_stats(fact, 6, threads=1)
        counts, zeros, sum_ln, _, _ = reference_stats(fact, 6)
        assert list(stats.zero_words) == zeros
        assert sum(stats.zero_words) > 0
        for a, b in zip(stats.sum_ln, sum_ln):
            assert a == pytest.approx(b, abs=1e-12)

    def test_thread_count_does_not_change_bits(self):
        fact = fact_for("g3")
        one = words.scan_corner_stats(fact, 21, ts=(1.0,), threads=1)
        two = words.scan_corner_stats(fact, 21, ts=(1.0,), threads=2)
        assert one == two

    def test_max_len_zero(self):
        fact = fact_for("g2")
        stats = words.scan_corner_stats(fact, 0, threads=1)
        assert stats.counts == (1,)
        assert stats.sum_ln == (0.0,)
