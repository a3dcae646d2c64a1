"""Numerical layer: primes, Riemann zeta, Euler products, continuation.

Evaluation strategy
-------------------
Products over primes are accumulated in log space (sum of per-factor
principal logs) so that 10^5..10^6 factors neither overflow nor lose the
magnitude; absolute values and final values are branch-safe, the overall
argument is only meaningful modulo 2*pi.

``euler_product_eval`` truncates the defining product at the configured
prime limit and is only offered in the half-plane of absolute convergence
``Re(s) > 1``.  ``continued_eval`` evaluates through a decomposition table:
a finite product of shifted zeta powers ``zeta(m*s - i*q)^lambda`` times a
corrected Euler product whose local factors are ``1 + O(p^-(M+1)*Re(s))``,
convergent for ``Re(s) > 1/(M+1)``.  A safety margin of 0.05 over that
bound keeps the truncated tail negligible at the supported prime limits.

Near-pole evaluation is allowed everywhere (values just get large); the
pole atlas, not the evaluator, is the authority on where poles are.  The
atlas lists the candidates contributed by the pole of zeta at argument 1:
one entry ``s = (1 + i*q)/m`` per table entry, a pole for positive
exponents and a zero for negative ones.  Pole candidates arising from
nontrivial zeta zeros (negative exponents) are deliberately not computed —
that would need a zero database — and the omission is recorded in the
atlas output.
"""

from __future__ import annotations

import cmath
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import IO, Optional, Sequence

import numpy as np

from .chars import CharPolynomial
from .decomp import ZetaDecomposition
from .errors import RegionError, VanishingFactorError, ZetaPoleError

MAX_PRIME_LIMIT = 10_000_000

#: Safety margin over the theoretical convergence bound 1/(M+1) of the
#: corrected product; keeps the tail beyond the prime limit below ~1e-4.
CONTINUATION_MARGIN = 0.05

_ZETA_RE_MIN = -1.0
_ZETA_IM_MAX = 1.0e3
_FACTOR_EPS = 1e-14


@dataclass(frozen=True)
class EvalConfig:
    """Shared numeric configuration.

    ``zeta_terms`` is the base Euler-Maclaurin cutoff; the actual number of
    summation terms is ``zeta_terms + ceil(|Im s|)``.  ``bernoulli_terms``
    counts the even-index Bernoulli corrections B_2, B_4, ..., B_{2K}.
    ``threads`` > 1 splits per-prime work into contiguous chunks; chunk
    results are reduced in fixed order, so output is deterministic for a
    given thread count but may differ from serial mode at the 1e-12 level.
    """

    prime_limit: int = 100_000
    level: int = 6
    zeta_terms: int = 50
    bernoulli_terms: int = 12
    threads: int = 1

    def __post_init__(self) -> None:
        if not 2 <= self.prime_limit <= MAX_PRIME_LIMIT:
            raise ValueError(f"prime_limit must be in 2..{MAX_PRIME_LIMIT}")
        if not 1 <= self.level <= 12:
            raise ValueError("level must be in 1..12")
        if self.zeta_terms < 10:
            raise ValueError("zeta_terms must be >= 10")
        if self.bernoulli_terms < 1:
            raise ValueError("bernoulli_terms must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


DEFAULT_CONFIG = EvalConfig()


@lru_cache(maxsize=8)
def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending, as a read-only int64 array."""
    if limit < 2:
        raise ValueError("prime limit must be >= 2")
    if limit > MAX_PRIME_LIMIT:
        raise ValueError(f"prime limit above maximum {MAX_PRIME_LIMIT}")
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    primes = np.flatnonzero(mask).astype(np.int64)
    primes.setflags(write=False)
    return primes


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    # B_0 = 1; sum_{j<=m} C(m+1, j) B_j = 0 for m >= 1.
    if m == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(m):
        acc += math.comb(m + 1, j) * _bernoulli(j)
    return -acc / (m + 1)


@lru_cache(maxsize=None)
def _em_correction_coeffs(count: int) -> tuple[float, ...]:
    """B_{2k}/(2k)! for k = 1..count, as floats."""
    return tuple(
        float(_bernoulli(2 * k) / math.factorial(2 * k)) for k in range(1, count + 1)
    )


def riemann_zeta(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Riemann zeta by Euler-Maclaurin summation.

    Implemented validity region: ``Re(s) > -1`` and ``|Im(s)| <= 1e3``;
    accuracy is 1e-10 or better for ``Re(s) in [0.1, 3]``, ``|Im(s)| <= 50``
    (and much better in practice).  The pole at s = 1 is rejected; nearby
    points evaluate to honestly large values.
    """
    s = complex(s)
    if s == 1:
        raise ZetaPoleError("zeta has its pole at s = 1")
    if s.real <= _ZETA_RE_MIN:
        raise RegionError(f"zeta evaluation supported only for Re(s) > {_ZETA_RE_MIN}")
    if abs(s.imag) > _ZETA_IM_MAX:
        raise RegionError(f"zeta evaluation supported only for |Im(s)| <= {_ZETA_IM_MAX}")

    cutoff = cfg.zeta_terms + math.ceil(abs(s.imag))
    n = np.arange(1, cutoff, dtype=np.float64)
    total = complex(np.sum(n ** (-s)))
    total += 0.5 * cutoff ** (-s)
    total += cutoff ** (1 - s) / (s - 1)

    # Correction terms B_{2k}/(2k)! * s(s+1)...(s+2k-2) * cutoff^(-s-2k+1).
    rising = s
    power = cutoff ** (-s - 1)
    inv_sq = 1.0 / (cutoff * cutoff)
    for k, coeff in enumerate(_em_correction_coeffs(cfg.bernoulli_terms), start=1):
        total += coeff * rising * power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power *= inv_sq
    return total


# ---------------------------------------------------------------------------
# Local-factor kernel shared by all product evaluators.
# ---------------------------------------------------------------------------


def _local_factor_logs(
    poly: CharPolynomial, norms: np.ndarray, s: complex
) -> np.ndarray:
    """Principal log of the local factor ``H_{log N}(N^-s)`` per norm."""
    if norms.size == 0:
        return np.zeros(0, dtype=np.complex128)
    ln = np.log(norms)
    z = np.exp(-s * ln)
    values = np.ones_like(z)
    zpow = np.ones_like(z)
    for coeff in poly.coeffs:
        zpow = zpow * z
        if coeff.is_zero():
            continue
        hval = np.zeros_like(z)
        for q, mult in coeff.items():
            hval += mult * np.exp(1j * float(q) * ln)
        values += hval * zpow
    small = np.abs(values) <= _FACTOR_EPS
    if small.any():
        raise VanishingFactorError(float(norms[int(np.argmax(small))]))
    return np.log(values)


def _reduce_sum(values: np.ndarray, threads: int) -> complex:
    """Deterministic reduction: whole-array in serial mode, fixed-order
    contiguous chunks otherwise."""
    if threads <= 1 or values.size < 2 * threads:
        return complex(np.sum(values))
    chunks = np.array_split(values, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        partials = list(pool.map(np.sum, chunks))
    return complex(sum(partials))


def product_over_norms(
    poly: CharPolynomial, norms: np.ndarray, s: complex, threads: int = 1
) -> complex:
    """``prod_N H_{log N}(N^-s)^-1`` over an explicit norm list."""
    logs = _local_factor_logs(poly, norms, s)
    return cmath.exp(-_reduce_sum(logs, threads))


def _prime_norms(limit: int) -> np.ndarray:
    norms = sieve_primes(limit).astype(np.float64)
    norms.setflags(write=False)
    return norms


def euler_product_eval(
    poly: CharPolynomial, s: complex, cfg: EvalConfig = DEFAULT_CONFIG
) -> complex:
    """Truncated Euler product over primes up to the configured limit.

    Only defined for ``Re(s) > 1``: outside the half-plane of absolute
    convergence a truncation carries no meaning and is refused.
    """
    s = complex(s)
    if s.real <= 1:
        raise RegionError("truncated Euler products require Re(s) > 1")
    return product_over_norms(poly, _prime_norms(cfg.prime_limit), s, cfg.threads)


def continued_eval(
    poly: CharPolynomial,
    decomposition: ZetaDecomposition,
    s: complex,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> complex:
    """Evaluate through the decomposition: zeta powers times corrected tail.

    Valid for ``Re(s) > 1/(M+1) + 0.05`` with ``M`` the table's depth.  For
    a unitary template the corrected local factors are identically 1 and
    the result is the pure product of shifted zeta factors.
    """
    s = complex(s)
    level = decomposition.max_level
    bound = 1.0 / (level + 1) + CONTINUATION_MARGIN
    if s.real <= bound:
        raise RegionError(
            f"continued evaluation at depth {level} requires Re(s) > {bound:.4f}"
        )

    log_total = complex(0)
    for m, q, lam in decomposition.entries:
        arg = m * s - 1j * float(q)
        if abs(arg - 1) < 1e-12:
            raise ZetaPoleError(
                f"zeta factor for (m={m}, q={q}) is evaluated at its pole"
            )
        log_total += lam * cmath.log(riemann_zeta(arg, cfg))

    norms = _prime_norms(cfg.prime_limit)
    ln = np.log(norms)
    corrected = -_local_factor_logs(poly, norms, s)
    for m, q, lam in decomposition.entries:
        corrected += lam * np.log(1.0 - np.exp((1j * float(q) - m * s) * ln))
    log_total += _reduce_sum(corrected, cfg.threads)
    return cmath.exp(log_total)


# ---------------------------------------------------------------------------
# Pole atlas.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Closed rectangle in the complex plane, required to sit in Re(s) > 0."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if self.re_min <= 0:
            raise ValueError("pole-atlas regions must satisfy Re(s) > 0")

    def contains(self, re: Fraction, im: Fraction) -> bool:
        return (
            self.re_min <= re <= self.re_max and self.im_min <= im <= self.im_max
        )


@dataclass(frozen=True)
class PoleEntry:
    """Candidate pole/zero contributed by one decomposition entry.

    Located exactly at ``s = (1 + i*q)/m``; a pole of order ``exponent``
    when the exponent is positive, a zero of order ``-exponent`` otherwise.
    """

    m: int
    q: Fraction
    exponent: int

    @property
    def re(self) -> Fraction:
        return Fraction(1, self.m)

    @property
    def im(self) -> Fraction:
        return self.q / self.m

    @property
    def location(self) -> complex:
        return complex(float(self.re), float(self.im))

    @property
    def kind(self) -> str:
        return "pole" if self.exponent > 0 else "zero"

    @property
    def order(self) -> int:
        return abs(self.exponent)

    def to_json_obj(self) -> dict:
        return {
            "re": float(self.re),
            "im": float(self.im),
            "kind": self.kind,
            "order": self.order,
            "m": self.m,
            "q": str(self.q),
            "lambda": self.exponent,
        }


def pole_atlas(
    decomposition: ZetaDecomposition, region: Optional[Region] = None
) -> list[PoleEntry]:
    """All candidate poles/zeros of the continued product, sorted by
    descending real part, then ascending imaginary part.

    Candidates come from the pole of zeta at argument 1 only; additional
    poles contributed by nontrivial zeta zeros under negative exponents are
    out of scope.
    """
    entries = []
    for m, q, lam in decomposition.entries:
        entry = PoleEntry(m, q, lam)
        if region is None or region.contains(entry.re, entry.im):
            entries.append(entry)
    entries.sort(key=lambda e: (-e.re, e.im))
    return entries


def atlas_json_obj(entries: Sequence[PoleEntry]) -> dict:
    return {
        "note": "candidates from the zeta pole at argument 1 only; "
        "pole contributions from nontrivial zeta zeros are not computed",
        "entries": [e.to_json_obj() for e in entries],
    }


# ---------------------------------------------------------------------------
# Boundary scans.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid with a common step in both directions."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    step: float

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        if self.re_max < self.re_min or self.im_max < self.im_min:
            raise ValueError("grid bounds are empty")

    def _axis(self, lo: float, hi: float) -> list[float]:
        count = int(math.floor((hi - lo) / self.step + 1e-9)) + 1
        return [lo + i * self.step for i in range(count)]

    def points(self) -> list[complex]:
        """Row-major traversal: imaginary part ascending in the outer loop,
        real part ascending within each row."""
        return [
            complex(re, im)
            for im in self._axis(self.im_min, self.im_max)
            for re in self._axis(self.re_min, self.re_max)
        ]


@dataclass(frozen=True)
class ScanRow:
    re: float
    im: float
    magnitude: Optional[float]
    argument: Optional[float]
    error: Optional[str] = None


def boundary_scan(
    poly: CharPolynomial,
    decomposition: ZetaDecomposition,
    grid: GridSpec,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> list[ScanRow]:
    """Evaluate the continued product over a grid.

    Rows come back in deterministic row-major order; grid points where the
    evaluation errors produce marker rows rather than being dropped.
    """
    rows = []
    for point in grid.points():
        try:
            value = continued_eval(poly, decomposition, point, cfg)
        except (RegionError, VanishingFactorError) as exc:
            rows.append(ScanRow(point.real, point.imag, None, None, str(exc)))
            continue
        rows.append(ScanRow(point.real, point.imag, abs(value), cmath.phase(value)))
    return rows


def write_scan_csv(rows: Sequence[ScanRow], stream: IO[str]) -> None:
    """CSV emission: header ``re,im,abs,arg``, LF line endings, floats in
    shortest round-trip form.  Error rows carry the marker ``error`` in the
    abs column and the reason in the arg column."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["re", "im", "abs", "arg"])
    for row in rows:
        if row.error is not None:
            writer.writerow([row.re, row.im, "error", row.error])
        else:
            writer.writerow([row.re, row.im, row.magnitude, row.argument])
