"""Level-by-level zeta decomposition of an Euler-factor template.

Every template ``H`` in ``1 + T R[T]`` has a unique expansion

    H(T)  ==  prod_{m=1..M} prod_q (1 - chi_q T^m)^(lambda(m, q))   mod T^(M+1)

with integer exponents.  The table ``lambda`` is the finite certificate this
module computes: it translates the Euler product of ``H`` into a product of
shifted Riemann zeta powers (one per table entry) times a remainder that
converges in the wider half-plane ``Re(s) > 1/(M+1)``.

``decompose`` builds the table through exact power sums.  Writing
``log H = -sum_j P_j T^j / j`` (Newton's identities make every ``P_j`` an
integer ring element), matching log coefficients gives

    P_j = sum_{m | j} m * raise_{j/m}(Lambda_m),

where ``Lambda_m`` collects level-m exponents as a ring element and
``raise_k`` multiplies character indices by k.  Solving level by level
stays in integers; the division by ``j`` is exact by construction and is
asserted.  ``reconstruct`` multiplies the certificate back out with integer
binomial series, giving an independent round-trip check.

Whether the table terminates at level 1 is precisely the unitary/boundary
dichotomy: unitary templates peel into their linear factors and stop, while
any entry at level >= 2 feeds the pole accumulation toward ``Re(s) = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chars import CharPolynomial, VirtualCharacter
from .errors import ConsistencyError
from .families import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_WITNESS_TOL,
    FamilySpec,
    is_unitary_algebraic,
    unitarity_witness_search,
)

#: Hard cap on decomposition depth; exponent magnitudes and term counts grow
#: roughly geometrically with the level, and level 12 is already enough to
#: exhibit non-termination and pole accumulation.
MAX_LEVEL = 12


@dataclass(frozen=True)
class TruncatedSeries:
    """Formal series ``c_0 + c_1 T + ... + c_M T^M`` with ring coefficients."""

    order: int
    coeffs: tuple[VirtualCharacter, ...]

    def __post_init__(self) -> None:
        if self.order < 0 or len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count must match the truncation order")

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        coeffs = (VirtualCharacter.unit(),) + tuple(
            VirtualCharacter.zero() for _ in range(order)
        )
        return cls(order, coeffs)

    @classmethod
    def from_polynomial(cls, poly: CharPolynomial, order: int) -> "TruncatedSeries":
        coeffs = tuple(poly.coefficient(m) for m in range(order + 1))
        return cls(order, coeffs)

    def coeff(self, m: int) -> VirtualCharacter:
        return self.coeffs[m]

    def is_one(self) -> bool:
        return self.coeffs[0] == VirtualCharacter.unit() and all(
            c.is_zero() for c in self.coeffs[1:]
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.order != self.order:
            raise ValueError("orders must match")
        out = []
        for k in range(self.order + 1):
            acc = VirtualCharacter.zero()
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(self.order, tuple(out))


def binomial_factor(
    q: Fraction, level: int, exponent: int, order: int
) -> TruncatedSeries:
    """``(1 - chi_q T^level)^exponent`` truncated at ``T^(order+1)``.

    Negative exponents expand through the integer binomial series, so the
    coefficients stay in the ring.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    coeffs = [VirtualCharacter.zero() for _ in range(order + 1)]
    coeffs[0] = VirtualCharacter.unit()
    kmax = order // level
    if exponent >= 0:
        kmax = min(kmax, exponent)
    for k in range(1, kmax + 1):
        if exponent >= 0:
            mult = (-1) ** k * math.comb(exponent, k)
        else:
            mult = math.comb(-exponent + k - 1, k)
        coeffs[k * level] = VirtualCharacter.char(q * k, mult)
    return TruncatedSeries(order, tuple(coeffs))


@dataclass(frozen=True)
class ZetaDecomposition:
    """The exponent table ``(level m, index q) -> lambda`` up to ``max_level``.

    Entries are sorted by ``(m, q)`` and never store zero exponents, so the
    representation is canonical and serializes deterministically.
    """

    max_level: int
    entries: tuple[tuple[int, Fraction, int], ...]

    def exponent(self, m: int, q) -> int:
        q = Fraction(q)
        for level, key, lam in self.entries:
            if level == m and key == q:
                return lam
        return 0

    def level_element(self, m: int) -> VirtualCharacter:
        """Level-m exponents bundled as a ring element."""
        return VirtualCharacter.from_dict(
            {q: lam for level, q, lam in self.entries if level == m}
        )

    def nonzero_levels(self) -> list[int]:
        return sorted({m for m, _, _ in self.entries})

    def first_boundary_level(self) -> Optional[int]:
        """Smallest level >= 2 carrying an entry, or None if none exists."""
        deeper = [m for m, _, _ in self.entries if m >= 2]
        return min(deeper) if deeper else None

    def to_json_obj(self) -> dict:
        return {
            "max_level": self.max_level,
            "entries": [
                {"m": m, "q": str(q), "lambda": lam} for m, q, lam in self.entries
            ],
        }

    def text_table(self) -> str:
        lines = [f"{'m':>3}  {'q':<10} {'lambda':>8}"]
        for m, q, lam in self.entries:
            lines.append(f"{m:>3}  {str(q):<10} {lam:>8}")
        return "\n".join(lines)


def _divide_exact(element: VirtualCharacter, j: int) -> VirtualCharacter:
    out = {}
    for q, mult in element.items():
        quot, rem = divmod(mult, j)
        if rem != 0:
            raise ConsistencyError(
                f"exponent recursion left a non-integer multiple at level {j}: "
                f"{mult} chi({q}) not divisible by {j}"
            )
        out[q] = quot
    return VirtualCharacter.from_dict(out)


def decompose(poly: CharPolynomial, max_level: int) -> ZetaDecomposition:
    """Compute the exponent table of ``poly`` up to ``max_level``.

    Exact throughout; levels are resolved in increasing order.  The result
    reconstructs ``poly`` modulo ``T^(max_level+1)`` (see
    :func:`reconstruct`).
    """
    if not 1 <= max_level <= MAX_LEVEL:
        raise ValueError(f"max_level must be in 1..{MAX_LEVEL}")

    # Newton's identities: P_j = -j*h_j - sum_{i<j} h_i P_{j-i}.
    n = poly.degree
    power_sums: list[VirtualCharacter] = []
    for j in range(1, max_level + 1):
        acc = poly.coefficient(j) * (-j) if j <= n else VirtualCharacter.zero()
        for i in range(1, min(j - 1, n) + 1):
            acc = acc - poly.coefficient(i) * power_sums[j - i - 1]
        power_sums.append(acc)

    # Invert P_j = sum_{m | j} m * raise_{j/m}(Lambda_m) level by level.
    levels: list[VirtualCharacter] = []
    for j in range(1, max_level + 1):
        acc = power_sums[j - 1]
        for m in range(1, j):
            if j % m == 0 and not levels[m - 1].is_zero():
                acc = acc - levels[m - 1].scale_keys(j // m) * m
        levels.append(_divide_exact(acc, j))

    entries = []
    for m, element in enumerate(levels, start=1):
        for q, lam in element.items():
            entries.append((m, q, lam))
    entries.sort(key=lambda e: (e[0], e[1]))
    return ZetaDecomposition(max_level, tuple(entries))


def reconstruct(decomposition: ZetaDecomposition) -> TruncatedSeries:
    """Multiply the certificate back out modulo ``T^(max_level+1)``.

    Round-trip validator: for any template ``H``,
    ``reconstruct(decompose(H, M))`` equals the series of ``H`` truncated at
    order ``M``, exactly.
    """
    series = TruncatedSeries.one(decomposition.max_level)
    for m, q, lam in decomposition.entries:
        series = series * binomial_factor(q, m, lam, decomposition.max_level)
    return series


class RigidityClass(enum.Enum):
    """Continuation behaviour of a family member's Euler product."""

    #: Continues to a meromorphic function on all of the complex plane; the
    #: product is a finite product of shifted zeta factors.
    ENTIRE_MEROMORPHIC = "ENTIRE_MEROMORPHIC"
    #: Continues meromorphically to Re(s) > 0 only, with poles accumulating
    #: toward every point of the line Re(s) = 0.
    NATURAL_BOUNDARY = "NATURAL_BOUNDARY"


def classify_rigidity(
    spec: FamilySpec,
    max_level: int,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    tol: float = DEFAULT_WITNESS_TOL,
) -> RigidityClass:
    """Classify a spec by three independent signals and cross-check them.

    The exact shift-sum test, termination of the decomposition at level 1,
    and absence of a sampled witness must all agree; any disagreement is an
    implementation bug and raises :class:`ConsistencyError`, never a
    verdict.
    """
    if max_level < 2:
        raise ValueError("classification needs max_level >= 2")
    algebraic = is_unitary_algebraic(spec)
    poly = spec.polynomial()
    table = decompose(poly, max_level)
    terminated = table.first_boundary_level() is None
    witness = unitarity_witness_search(poly, sample_count, tol)
    if not (algebraic == terminated == (witness is None)):
        raise ConsistencyError(
            f"{spec.label()}: signals disagree "
            f"(algebraic={algebraic}, decomposition_terminates={terminated}, "
            f"witness_found={witness is not None})"
        )
    return (
        RigidityClass.ENTIRE_MEROMORPHIC if algebraic else RigidityClass.NATURAL_BOUNDARY
    )
