"""Polynomial families and the two unitarity tests (exact and sampled).

The families covered:

* ``abc``: degree-2 templates ``1 - (chi_a + chi_b) T + chi_c T^2``;
* ``chain``: degree-n templates (n >= 2) equal to the product
  ``(1 - chi_{a_1} T) ... (1 - chi_{a_n} T)`` except that the top
  coefficient is replaced by ``(-1)^n chi_b``.

A template is *unitary* when every real specialization factors into terms
``(1 - e^{i theta} T)``, i.e. all reciprocal roots stay on the unit circle.
For these families the exact criterion is a rational identity — the index
sum of the linear part must equal the top index — while the sampled test
looks for a specialization with a reciprocal root off the circle and
reports it as a witness.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .chars import CharParam, CharPolynomial, RationalLike, VirtualCharacter, as_param
from .errors import ConsistencyError, RootConvergenceError

#: Spacing of the deterministic sample sequence x_k = k * GOLDEN_RATIO.
#: Irrational spacing keeps rational character indices away from the
#: measure-zero set where a non-unitary specialization happens to have
#: unimodular roots.
GOLDEN_RATIO = (1 + math.sqrt(5)) / 2

DEFAULT_SAMPLE_COUNT = 64
DEFAULT_WITNESS_TOL = 1e-8

_ROOT_TOL = 1e-12
_ROOT_MAX_ITER = 200


def build_abc(a: RationalLike, b: RationalLike, c: RationalLike) -> CharPolynomial:
    """Degree-2 template ``1 - (chi_a + chi_b) T + chi_c T^2``."""
    a, b, c = as_param(a), as_param(b), as_param(c)
    h1 = -(VirtualCharacter.char(a) + VirtualCharacter.char(b))
    h2 = VirtualCharacter.char(c)
    return CharPolynomial((h1, h2))


def product_of_linear_factors(params: Iterable[RationalLike]) -> CharPolynomial:
    """The plain product ``(1 - chi_{a_1} T) ... (1 - chi_{a_n} T)``."""
    factors = [
        CharPolynomial((VirtualCharacter.char(as_param(a), -1),)) for a in params
    ]
    if not factors:
        raise ValueError("need at least one linear factor")
    poly = factors[0]
    for f in factors[1:]:
        poly = poly * f
    return poly


def build_chain(shifts: Sequence[RationalLike], total: RationalLike) -> CharPolynomial:
    """Degree-n chain template (n >= 2) with top coefficient ``(-1)^n chi_b``.

    Equals the product of the linear factors for the given shifts plus the
    correction ``(-1)^n (chi_b - chi_{sum}) T^n``, so it reduces to the
    plain product exactly when ``total`` equals the shift sum.
    """
    shifts = [as_param(a) for a in shifts]
    n = len(shifts)
    if n < 2:
        raise ValueError("chain templates need at least two shifts")
    total = as_param(total)
    poly = product_of_linear_factors(shifts)
    sign = 1 if n % 2 == 0 else -1
    correction = (
        VirtualCharacter.char(total) - VirtualCharacter.char(sum(shifts, Fraction(0)))
    ) * sign
    coeffs = list(poly.coeffs)
    coeffs[n - 1] = coeffs[n - 1] + correction
    return CharPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class FamilySpec:
    """A parametrized family member: shift list plus the top-index parameter."""

    shifts: tuple[Fraction, ...]
    total: Fraction
    kind: str  # "abc" | "chain"

    @classmethod
    def abc(cls, a: RationalLike, b: RationalLike, c: RationalLike) -> "FamilySpec":
        return cls((as_param(a), as_param(b)), as_param(c), "abc")

    @classmethod
    def chain(
        cls, shifts: Sequence[RationalLike], total: RationalLike
    ) -> "FamilySpec":
        shifts = tuple(as_param(a) for a in shifts)
        if len(shifts) < 2:
            raise ValueError("chain specs need at least two shifts")
        return cls(shifts, as_param(total), "chain")

    @property
    def degree(self) -> int:
        return len(self.shifts)

    def polynomial(self) -> CharPolynomial:
        if self.kind == "abc":
            return build_abc(self.shifts[0], self.shifts[1], self.total)
        return build_chain(self.shifts, self.total)

    def label(self) -> str:
        inner = ", ".join(str(q) for q in self.shifts)
        return f"{self.kind}({inner} | {self.total})"


def is_unitary_algebraic(spec: FamilySpec) -> bool:
    """Exact unitarity test: the shift sum must equal the top index."""
    return sum(spec.shifts, Fraction(0)) == spec.total


# ---------------------------------------------------------------------------
# Root finding for specializations.
#
# A specialization 1 + c_1 T + ... + c_n T^n has reciprocal roots equal to
# the roots of the reversed monic polynomial z^n + c_1 z^{n-1} + ... + c_n.
# Degree 2 goes through the quadratic formula; higher degrees use
# simultaneous Weierstrass refinement.  Repeated roots need care: float
# noise in the coefficients spreads an m-fold root over a cluster of radius
# ~eps^(1/m), far above the witness threshold, so exact-looking clusters are
# collapsed and re-polished on the (m-1)-th derivative where the root is
# simple again.
# ---------------------------------------------------------------------------


def _horner(coeffs: Sequence[complex], z: complex) -> complex:
    acc = complex(coeffs[0])
    for c in coeffs[1:]:
        acc = acc * z + c
    return acc


def _derivative(coeffs: Sequence[complex]) -> list[complex]:
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


def _quadratic_roots(c1: complex, c2: complex) -> list[complex]:
    disc = c1 * c1 - 4 * c2
    scale = max(1.0, abs(c1) ** 2, 4 * abs(c2))
    if abs(disc) <= 1e-13 * scale:
        # Numerically indistinguishable from a double root; snapping to the
        # midpoint keeps the moduli accurate to second order.
        r = -c1 / 2
        return [r, r]
    sq = cmath.sqrt(disc)
    if (c1.conjugate() * sq).real > 0:
        sq = -sq
    big = (-c1 + sq) / 2
    return [big, c2 / big]


def _eval_bound(coeffs: Sequence[complex], z: complex) -> float:
    """Scale of the evaluation: sum of term magnitudes at z."""
    zb = max(1.0, abs(z))
    return sum(abs(c) * zb**k for k, c in enumerate(reversed(coeffs)))


def _collapse_clusters(
    coeffs: Sequence[complex], roots: list[complex], x: float
) -> list[complex]:
    """Reinterpret root clusters as multiple roots where that is justified.

    An m-fold root spreads over a noise cluster of radius ~eps^(1/m), which
    the refinement cannot shrink; the moduli of the cluster members are
    then far less accurate than simple roots.  Clusters are detected at a
    ladder of radii (tight first, so a double inside a wider near-cluster
    resolves before the wider group is considered).  Each cluster is
    tentatively collapsed to one root of multiplicity m, polished by Newton
    steps on the (m-1)-th derivative (where an m-fold root is simple), and
    accepted only if all derivatives below order m vanish to evaluation
    noise at the polished point.  Genuinely distinct close roots fail that
    test and keep their refined values.
    """
    n = len(roots)
    scale = max(1.0, max(abs(z) for z in roots))
    current = list(roots)

    for radius in (3e-7, 3e-6, 3e-5, 3e-4, 3e-3, 3e-2):
        radius *= scale
        parent = list(range(n))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if abs(current[i] - current[j]) <= radius:
                    parent[find(i)] = find(j)

        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)

        for members in groups.values():
            m = len(members)
            if m == 1:
                continue
            derivatives = [list(coeffs)]
            for _ in range(m):
                derivatives.append(_derivative(derivatives[-1]))
            z = sum(current[i] for i in members) / m
            for _ in range(3):
                dv = _horner(derivatives[m], z)
                if dv == 0:
                    break
                z = z - _horner(derivatives[m - 1], z) / dv
            if all(
                abs(_horner(derivatives[k], z)) <= 1e-12 * _eval_bound(derivatives[k], z)
                for k in range(m)
            ):
                for i in members:
                    current[i] = z

    for z in current:
        if abs(_horner(coeffs, z)) > 1e-7 * _eval_bound(coeffs, z):
            raise RootConvergenceError(x)
    return current


def _weierstrass_roots(coeffs: Sequence[complex], x: float) -> list[complex]:
    """All roots of a monic polynomial by simultaneous refinement.

    The final root set always goes through cluster collapsing: a repeated
    root makes the iteration settle on a noise-floor cluster whose movement
    looks converged, so stopping early is not evidence that the roots are
    accurate individually.
    """
    n = len(coeffs) - 1
    radius = 1.0 + max(abs(c) for c in coeffs[1:])
    roots = [
        radius * cmath.exp(2j * math.pi * k / n + 0.4j) for k in range(n)
    ]
    for _ in range(_ROOT_MAX_ITER):
        shift = 0.0
        for i in range(n):
            denom = complex(1)
            for j in range(n):
                if j != i:
                    denom *= roots[i] - roots[j]
            if denom == 0:
                denom = complex(1e-20)
            step = _horner(coeffs, roots[i]) / denom
            roots[i] = roots[i] - step
            shift = max(shift, abs(step))
        if shift <= _ROOT_TOL * max(1.0, radius):
            break
    return _collapse_clusters(coeffs, roots, x)


def reciprocal_roots(poly: CharPolynomial, x: float) -> list[complex]:
    """Reciprocal roots alpha_j of the specialization at x.

    These are the numbers with ``H_x(T) = prod_j (1 - alpha_j T)``; for a
    unitary template they all lie on the unit circle.  Raises
    :class:`RootConvergenceError` (carrying x) if refinement fails.
    """
    coeffs = poly.specialize(x)
    n = poly.degree
    if n == 1:
        return [-coeffs[1]]
    if n == 2:
        return _quadratic_roots(coeffs[1], coeffs[2])
    return _weierstrass_roots(coeffs, x)


def sample_points(count: int) -> list[float]:
    """The deterministic sample sequence x_k = k * golden ratio, k = 1..count."""
    if count < 1:
        raise ValueError("sample count must be >= 1")
    return [k * GOLDEN_RATIO for k in range(1, count + 1)]


@dataclass(frozen=True)
class NonUnitaryWitness:
    """A sample point whose reciprocal roots leave the unit circle."""

    x: float
    root_moduli: tuple[float, ...]

    def to_json_obj(self) -> dict:
        return {"x": self.x, "root_moduli": list(self.root_moduli)}


@dataclass(frozen=True)
class UnitarityVerdict:
    """Combined verdict: exact test plus (for the negative case) a witness."""

    algebraic: bool
    witness: Optional[NonUnitaryWitness]

    def to_json_obj(self) -> dict:
        return {
            "algebraic": self.algebraic,
            "witness": None if self.witness is None else self.witness.to_json_obj(),
        }


def unitarity_witness_search(
    poly: CharPolynomial,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    tol: float = DEFAULT_WITNESS_TOL,
) -> Optional[NonUnitaryWitness]:
    """Scan sample specializations for a reciprocal root off the unit circle.

    Returns the first witness in sample order, or None if every sampled
    specialization has all root moduli within ``tol`` of 1.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    for x in sample_points(sample_count):
        moduli = sorted(abs(r) for r in reciprocal_roots(poly, x))
        if any(abs(m - 1.0) > tol for m in moduli):
            return NonUnitaryWitness(x, tuple(moduli))
    return None


def assess_unitarity(
    spec: FamilySpec,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
    tol: float = DEFAULT_WITNESS_TOL,
) -> UnitarityVerdict:
    """Run both tests and cross-check them.

    A witness for an algebraically unitary spec (or the absence of any
    witness for a non-unitary one) can only mean an implementation bug and
    raises :class:`ConsistencyError`.
    """
    algebraic = is_unitary_algebraic(spec)
    witness = unitarity_witness_search(spec.polynomial(), sample_count, tol)
    if algebraic and witness is not None:
        raise ConsistencyError(
            f"{spec.label()}: exact test says unitary but sample x={witness.x} "
            f"has root moduli {witness.root_moduli}"
        )
    if not algebraic and witness is None:
        raise ConsistencyError(
            f"{spec.label()}: exact test says non-unitary but no witness was "
            f"found in {sample_count} samples"
        )
    return UnitarityVerdict(algebraic, witness)
