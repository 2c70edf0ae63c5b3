"""Rank-1 sentinel factorization and the similarity that exposes corner values.

For a matrix pair (D0, D1) with rank(D0^q) = 1, write D0^q = alpha * beta^T.
Then for any invertible Q whose first column is alpha and whose remaining
columns span the null space of beta^T, the conjugated pair D'_i = Q^-1 D_i Q
satisfies Q^-1 D0^q Q = E00 and

    (Q^-1 D_w Q)[0, 0] = beta^T D_w alpha

for every binary word w.  The right side is cheap, exact and basis-free, so
corner values are always computed that way; D'-matrices are only produced on
request for cross-checking against tabulated forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exactmat
from .exactmat import RationalMatrix

__all__ = [
    "SentinelFactorization",
    "ConjugationResult",
    "sentinel_factorization",
    "corner_value",
    "conjugation_matrix",
    "NotIdempotentSimilar",
]


class NotIdempotentSimilar(ValueError):
    """trace(D0^q) != 1, so no Q with Q^-1 D0^q Q = E00 can exist."""


@dataclass(frozen=True)
class SentinelFactorization:
    """alpha, beta with D0^q = alpha*beta^T and beta^T*alpha = 1, plus the pair."""

    q: int
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    d0: RationalMatrix
    d1: RationalMatrix
    family: str = ""

    @property
    def dim(self) -> int:
        return self.d0.dim


def sentinel_factorization(
    d0: RationalMatrix, d1: RationalMatrix, q: int, family: str = ""
) -> SentinelFactorization:
    """Factor D0^q = alpha*beta^T exactly and check beta^T*alpha = 1.

    beta^T*alpha equals trace(D0^q) for any rank-1 factorization, so the
    normalization is a property of D0 itself: trace 1 makes D0^q idempotent,
    which is exactly when the E00 conjugation exists.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if d0.dim != d1.dim:
        raise exactmat.DimensionMismatch(f"{d0.dim} != {d1.dim}")
    power = exactmat.mat_pow(d0, q)
    alpha, beta = exactmat.rank_one_factor(power)
    trace = sum((a * b for a, b in zip(alpha, beta)), Fraction(0))
    if trace != 1:
        raise NotIdempotentSimilar(
            f"trace(D0^{q}) = {trace} != 1; D0^{q} is not idempotent"
        )
    return SentinelFactorization(
        q=q, alpha=alpha, beta=beta, d0=d0, d1=d1, family=family
    )


def corner_value(fact: SentinelFactorization, word: str) -> Fraction:
    """Exact beta^T * D_w * alpha for a binary word w over the original pair."""
    row = fact.beta
    for symbol in word:
        if symbol == "0":
            matrix = fact.d0
        elif symbol == "1":
            matrix = fact.d1
        else:
            raise ValueError(f"word must be over 0/1, got {symbol!r}")
        cols = zip(*matrix.rows)
        row = tuple(
            sum((r * c for r, c in zip(row, col)), Fraction(0)) for col in cols
        )
    return sum((r * a for r, a in zip(row, fact.alpha)), Fraction(0))


@dataclass(frozen=True)
class ConjugationResult:
    q_matrix: RationalMatrix
    q_inverse: RationalMatrix
    d0_prime: RationalMatrix
    d1_prime: RationalMatrix


def conjugation_matrix(
    fact: SentinelFactorization, null_basis: tuple[tuple[Fraction, ...], ...] | None = None
) -> ConjugationResult:
    """Build Q = [alpha | N] with N an exact basis of the null space of beta^T.

    The default basis uses the first nonzero coordinate p of beta as pivot:
    for each j != p the vector e_j - (beta_j/beta_p) e_p.  Any valid basis
    gives the same corner values; callers may supply their own to check that.
    """
    m = fact.dim
    beta = fact.beta
    if null_basis is None:
        pivot = next(j for j in range(m) if beta[j] != 0)
        null_basis = tuple(
            tuple(
                Fraction(1) if i == j else
                (-beta[j] / beta[pivot] if i == pivot else Fraction(0))
                for i in range(m)
            )
            for j in range(m)
            if j != pivot
        )
    columns = (fact.alpha,) + tuple(null_basis)
    if len(columns) != m:
        raise ValueError(f"need {m - 1} null-space basis vectors, got {len(null_basis)}")
    q_matrix = RationalMatrix(zip(*columns))
    q_inverse = exactmat.mat_inverse(q_matrix)

    sentinel = exactmat.mat_pow(fact.d0, fact.q)
    conj_sentinel = exactmat.mat_mul(exactmat.mat_mul(q_inverse, sentinel), q_matrix)
    if conj_sentinel != exactmat.elementary(m, 0, 0):
        raise AssertionError("Q does not conjugate D0^q to E00; invalid basis?")

    d0_prime = exactmat.mat_mul(exactmat.mat_mul(q_inverse, fact.d0), q_matrix)
    d1_prime = exactmat.mat_mul(exactmat.mat_mul(q_inverse, fact.d1), q_matrix)
    return ConjugationResult(
        q_matrix=q_matrix,
        q_inverse=q_inverse,
        d0_prime=d0_prime,
        d1_prime=d1_prime,
    )
