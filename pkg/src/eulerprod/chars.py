"""Exact arithmetic for integer combinations of unitary characters of the line.

A character is indexed by a rational ``q`` and acts as ``x -> exp(i*q*x)``;
multiplying characters adds their indices, so finite integer combinations
form a commutative ring.  Indices are :class:`fractions.Fraction` (always in
lowest terms), multiplicities are unbounded Python ints, and equality is
structural, which makes coincidences such as ``a + b == c`` decidable.
Floating point enters only when a value is evaluated at a real point.

Irrational indices are deliberately unsupported: exactness of the index
arithmetic is what the whole decomposition machinery rests on.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

#: Index of a unitary character x -> exp(i*q*x).  Kept as an alias so the
#: intent is visible in signatures; values are plain Fractions.
CharParam = Fraction

RationalLike = Union[Fraction, int, str]


def as_param(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact character index.

    Accepts ints, Fractions and strings like ``"5/6"`` or ``"-2"``.  Floats
    are rejected rather than silently converted: a float carries its binary
    expansion, not the rational the caller had in mind.
    """
    if isinstance(value, float):
        raise TypeError("character indices must be exact rationals, not floats")
    return Fraction(value)


@dataclass(frozen=True)
class VirtualCharacter:
    """Finite integer combination of characters, keyed by rational index.

    ``terms`` is canonical: strictly sorted by index, no zero
    multiplicities.  Structural equality and hashing therefore agree with
    ring equality.  Instances are immutable and safe to share.
    """

    terms: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self) -> None:
        last = None
        for q, mult in self.terms:
            if not isinstance(q, Fraction) or not isinstance(mult, int):
                raise TypeError("terms must be (Fraction, int) pairs")
            if mult == 0:
                raise ValueError("zero multiplicities must be pruned")
            if last is not None and q <= last:
                raise ValueError("terms must be strictly sorted by index")
            last = q

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "VirtualCharacter":
        return cls(())

    @classmethod
    def unit(cls) -> "VirtualCharacter":
        """The ring unit: the trivial character with multiplicity one."""
        return cls(((Fraction(0), 1),))

    @classmethod
    def char(cls, q: RationalLike, mult: int = 1) -> "VirtualCharacter":
        """A single character ``x -> exp(i*q*x)`` with integer multiplicity."""
        if mult == 0:
            return cls.zero()
        return cls(((as_param(q), mult),))

    @classmethod
    def from_dict(cls, mapping: Mapping[Fraction, int]) -> "VirtualCharacter":
        items = tuple(
            (as_param(q), int(m)) for q, m in sorted(mapping.items()) if m != 0
        )
        return cls(items)

    # -- structure ----------------------------------------------------

    def items(self) -> Iterator[tuple[Fraction, int]]:
        return iter(self.terms)

    def multiplicity(self, q: RationalLike) -> int:
        q = as_param(q)
        for key, mult in self.terms:
            if key == q:
                return mult
        return 0

    @property
    def support(self) -> tuple[Fraction, ...]:
        return tuple(q for q, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        acc = dict(self.terms)
        for q, m in other.terms:
            acc[q] = acc.get(q, 0) + m
        return VirtualCharacter.from_dict(acc)

    def __neg__(self) -> "VirtualCharacter":
        return VirtualCharacter(tuple((q, -m) for q, m in self.terms))

    def __sub__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["VirtualCharacter", int]) -> "VirtualCharacter":
        if isinstance(other, int):
            if other == 0:
                return VirtualCharacter.zero()
            return VirtualCharacter(tuple((q, m * other) for q, m in self.terms))
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        acc: dict[Fraction, int] = {}
        for qa, ma in self.terms:
            for qb, mb in other.terms:
                key = qa + qb
                acc[key] = acc.get(key, 0) + ma * mb
        return VirtualCharacter.from_dict(acc)

    __rmul__ = __mul__

    def scale_keys(self, k: int) -> "VirtualCharacter":
        """Apply the index map q -> k*q to every term (k >= 1).

        This is the power map on characters: raising each character to the
        k-th power multiplies its index by k.
        """
        if k < 1:
            raise ValueError("key scaling requires k >= 1")
        if k == 1:
            return self
        return VirtualCharacter(tuple((q * k, m) for q, m in self.terms))

    # -- numeric evaluation -------------------------------------------

    def evaluate(self, x: float) -> complex:
        """Value at a real point: sum of m * exp(i*q*x) over all terms."""
        return sum(
            (m * cmath.exp(1j * float(q) * x) for q, m in self.terms), complex(0)
        )

    # -- presentation ---------------------------------------------------

    def to_strings(self) -> list[str]:
        """Serialized form: one ``"q=<rational>: <multiplicity>"`` per term."""
        return [f"q={q}: {m}" for q, m in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for q, m in self.terms:
            body = f"chi({q})" if abs(m) == 1 else f"{abs(m)}*chi({q})"
            parts.append(("- " if m < 0 else "+ " if parts else "") + body)
        return " ".join(parts).lstrip("+ ")


@dataclass(frozen=True)
class CharPolynomial:
    """Euler-factor template ``1 + h_1 T + ... + h_n T^n`` over the ring.

    The constant term is implicitly the ring unit; ``coeffs`` stores
    ``h_1 .. h_n``.  The trailing coefficient is required to be nonzero so
    the degree is well defined.
    """

    coeffs: tuple[VirtualCharacter, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("polynomial must have degree >= 1")
        if self.coeffs[-1].is_zero():
            raise ValueError("trailing coefficient must be nonzero")

    @classmethod
    def of(cls, coeffs: Iterable[VirtualCharacter]) -> "CharPolynomial":
        """Build from ``h_1..h_n``, trimming trailing zero coefficients."""
        items = list(coeffs)
        while items and items[-1].is_zero():
            items.pop()
        return cls(tuple(items))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def coefficient(self, m: int) -> VirtualCharacter:
        """h_m, with h_0 the ring unit and h_m = 0 beyond the degree."""
        if m == 0:
            return VirtualCharacter.unit()
        if 1 <= m <= self.degree:
            return self.coeffs[m - 1]
        return VirtualCharacter.zero()

    def specialize(self, x: float) -> list[complex]:
        """Complex coefficients ``[1, h_1(x), ..., h_n(x)]`` at a real point."""
        return [complex(1)] + [c.evaluate(x) for c in self.coeffs]

    def __mul__(self, other: "CharPolynomial") -> "CharPolynomial":
        if not isinstance(other, CharPolynomial):
            return NotImplemented
        n, m = self.degree, other.degree
        prod = [VirtualCharacter.zero() for _ in range(n + m)]
        for k in range(1, n + m + 1):
            acc = VirtualCharacter.zero()
            for i in range(max(0, k - m), min(n, k) + 1):
                acc = acc + self.coefficient(i) * other.coefficient(k - i)
            prod[k - 1] = acc
        return CharPolynomial(tuple(prod))

    def __str__(self) -> str:
        parts = ["1"]
        for m, c in enumerate(self.coeffs, start=1):
            if c.is_zero():
                continue
            power = "T" if m == 1 else f"T^{m}"
            parts.append(f"({c})*{power}")
        return " + ".join(parts)
