"""Executable acceptance checks, runnable via ``eulerprod verify`` or pytest.

Each check is a function returning a :class:`CheckResult`; ``run_all`` runs
the full battery.  Seeds are fixed so results are reproducible; tolerances
are pinned here and nowhere else.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .analytic import (
    EvalConfig,
    continued_eval,
    euler_product_eval,
    pole_atlas,
    riemann_zeta,
)
from .chars import CharPolynomial
from .decomp import decompose, reconstruct, TruncatedSeries
from .families import (
    FamilySpec,
    build_abc,
    is_unitary_algebraic,
    reciprocal_roots,
    sample_points,
    unitarity_witness_search,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(name: str, fn: Callable[[], str]) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = fn()
    except Exception as exc:  # a crash is a failure, not an abort
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}", time.perf_counter() - start)
    return CheckResult(name, True, detail, time.perf_counter() - start)


class _Failure(Exception):
    pass


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise _Failure(message)


# -- random spec generation -------------------------------------------------


def _random_param(rng: random.Random, span: int = 6, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def _random_spec(rng: random.Random, unitary: bool) -> FamilySpec:
    n = rng.choice([2, 2, 3, 4])
    shifts = [_random_param(rng) for _ in range(n)]
    total = sum(shifts, Fraction(0))
    if not unitary:
        delta = Fraction(0)
        while delta == 0:
            delta = _random_param(rng, span=5, den=3)
        total += delta
    if n == 2 and rng.random() < 0.5:
        return FamilySpec.abc(shifts[0], shifts[1], total)
    return FamilySpec.chain(shifts, total)


# -- criteria ----------------------------------------------------------------


def check_rigidity_dichotomy() -> CheckResult:
    """Termination of the exponent table at level 1 tracks the shift-sum
    identity exactly, over 100 random specs on each side."""

    def run() -> str:
        rng = random.Random(0xD1C407)
        for _ in range(100):
            spec = _random_spec(rng, unitary=True)
            table = decompose(spec.polynomial(), 8)
            _require(
                table.first_boundary_level() is None,
                f"{spec.label()}: unexpected entry beyond level 1",
            )
        for _ in range(100):
            spec = _random_spec(rng, unitary=False)
            table = decompose(spec.polynomial(), 8)
            first = table.first_boundary_level()
            _require(
                first is not None and first <= spec.degree,
                f"{spec.label()}: expected an entry at level <= {spec.degree}, got {first}",
            )
        return "100 matched specs terminate at level 1; 100 mismatched specs break by level n"

    return _timed("rigidity-dichotomy", run)


def check_level_two_law() -> CheckResult:
    """For degree-2 templates with mismatched top index and no index
    collisions, level 2 carries exactly -1 at the top index and +1 at the
    shift sum."""

    def run() -> str:
        rng = random.Random(0x1E7E12)
        count = 0
        while count < 60:
            a, b = _random_param(rng), _random_param(rng)
            c = _random_param(rng)
            keys = {2 * a, 2 * b, a + b, c}
            if c == a + b or len(keys) < 4:
                continue
            table = decompose(build_abc(a, b, c), 4)
            _require(
                table.exponent(2, c) == -1,
                f"abc({a},{b}|{c}): lambda(2, c) != -1",
            )
            _require(
                table.exponent(2, a + b) == 1,
                f"abc({a},{b}|{c}): lambda(2, a+b) != +1",
            )
            _require(
                table.level_element(2)
                == (
                    table.level_element(2).from_dict({a + b: 1, c: -1})
                ),
                f"abc({a},{b}|{c}): stray level-2 entries",
            )
            count += 1
        return f"level-2 law holds on {count} collision-free mismatched specs"

    return _timed("level-two-law", run)


def check_round_trip() -> CheckResult:
    """Multiplying the exponent table back out reproduces the template,
    exactly, through depth 8."""

    def run() -> str:
        rng = random.Random(0x407A11)
        specs = [
            FamilySpec.abc(0, 0, 0),
            FamilySpec.abc(0, 0, 1),
            FamilySpec.abc(Fraction(1, 2), Fraction(1, 3), Fraction(5, 6)),
            FamilySpec.abc(Fraction(1, 4), Fraction(1, 4), 1),
            FamilySpec.chain([0, 0, 0], 1),
            FamilySpec.chain([Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)], 2),
        ]
        specs += [_random_spec(rng, unitary=bool(i % 2)) for i in range(10)]
        checked = 0
        for spec in specs:
            poly = spec.polynomial()
            for depth in (2, 5, 8):
                table = decompose(poly, depth)
                _require(
                    reconstruct(table) == TruncatedSeries.from_polynomial(poly, depth),
                    f"{spec.label()}: round trip failed at depth {depth}",
                )
                checked += 1
        return f"{checked} (spec, depth) round trips exact"

    return _timed("round-trip", run)


def check_zeta_product_identity() -> CheckResult:
    """Matched templates evaluate to the product of two shifted zeta
    factors, and the plain truncated product reproduces zeta(2)^2."""

    def run() -> str:
        cfg = EvalConfig(prime_limit=100_000, level=6)
        rng = random.Random(0x2E7A)
        poly000 = build_abc(0, 0, 0)
        direct = euler_product_eval(poly000, 2.0 + 0j, cfg)
        basel_sq = (math.pi**2 / 6) ** 2
        _require(
            abs(direct - basel_sq) <= 1e-4,
            f"truncated product at s=2 off by {abs(direct - basel_sq):.2e}",
        )
        worst = 0.0
        for _ in range(20):
            a = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            b = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            poly = build_abc(a, b, a + b)
            table = decompose(poly, cfg.level)
            while True:
                s = complex(rng.uniform(0.4, 3.0), rng.uniform(-2.0, 2.0))
                if all(abs(s - (1 + 1j * float(q))) > 0.1 for q in (a, b)):
                    break
            via_table = continued_eval(poly, table, s, cfg)
            direct_zeta = riemann_zeta(s - 1j * float(a), cfg) * riemann_zeta(
                s - 1j * float(b), cfg
            )
            worst = max(worst, abs(via_table - direct_zeta))
            _require(
                abs(via_table - direct_zeta) <= 1e-6,
                f"abc({a},{b}|{a+b}) at s={s}: delta {abs(via_table - direct_zeta):.2e}",
            )
        return f"20 matched specs agree with the zeta product (worst delta {worst:.2e})"

    return _timed("zeta-product-identity", run)


def check_continuation_consistency() -> CheckResult:
    """Depth-3 and depth-5 continuations of the (0,0,1) template agree in
    the critical strip at the 1e-3 level with a 1e6 prime limit."""

    def run() -> str:
        cfg = EvalConfig(prime_limit=1_000_000, level=6)
        poly = build_abc(0, 0, 1)
        t3 = decompose(poly, 3)
        t5 = decompose(poly, 5)
        worst = 0.0
        for t in (0.0, 1.0, 2.0):
            s = complex(0.6, t)
            v3 = continued_eval(poly, t3, s, cfg)
            v5 = continued_eval(poly, t5, s, cfg)
            worst = max(worst, abs(v3 - v5))
            _require(
                abs(v3 - v5) <= 1e-3,
                f"s={s}: depth-3 and depth-5 values differ by {abs(v3 - v5):.2e}",
            )
        return f"depth 3 vs 5 agree at s=0.6+ti, t in {{0,1,2}} (worst delta {worst:.2e})"

    return _timed("continuation-consistency", run)


def check_pole_accumulation() -> CheckResult:
    """The (0,0,1) atlas at depth 8 carries poles at Re(s)=1/m down to 1/8,
    and the evaluator blows up monotonically approaching s = 1/2."""

    def run() -> str:
        poly = build_abc(0, 0, 1)
        table = decompose(poly, 8)
        atlas = pole_atlas(table)
        for m in range(1, 9):
            lam = table.exponent(m, 0)
            if lam == 0:
                continue
            _require(
                any(
                    e.kind == "pole" and e.m == m and e.q == 0 and e.re == Fraction(1, m)
                    for e in atlas
                ),
                f"no pole entry at Re(s)=1/{m}",
            )
        min_re = min(e.re for e in atlas)
        _require(
            min_re <= Fraction(1, 7),
            f"atlas minimum Re(s) = {min_re} does not approach 0",
        )
        cfg = EvalConfig(prime_limit=100_000, level=8)
        magnitudes = [
            abs(continued_eval(poly, table, complex(0.5 + delta, 0.0), cfg))
            for delta in (1e-1, 1e-2, 1e-3)
        ]
        _require(
            magnitudes[0] < magnitudes[1] < magnitudes[2],
            f"no monotone blow-up toward s=1/2: {magnitudes}",
        )
        return (
            f"poles at Re(s)=1/m for all m<=8; |value| grows "
            f"{magnitudes[0]:.3g} -> {magnitudes[1]:.3g} -> {magnitudes[2]:.3g} toward s=1/2"
        )

    return _timed("pole-accumulation", run)


def check_unitarity_agreement() -> CheckResult:
    """Exact and sampled unitarity verdicts agree on 200 random specs, and
    the coefficient identities hold at every sample."""

    def run() -> str:
        rng = random.Random(0xA9EE)
        xs = sample_points(64)
        for i in range(200):
            spec = _random_spec(rng, unitary=(i % 2 == 0))
            poly = spec.polynomial()
            algebraic = is_unitary_algebraic(spec)
            witness = unitarity_witness_search(poly, 64, 1e-8)
            _require(
                algebraic == (witness is None),
                f"{spec.label()}: exact={algebraic}, witness={witness}",
            )
            coeffs_top = poly.coeffs[-1]
            for x in xs[:8]:
                roots = reciprocal_roots(poly, x)
                total = sum(roots)
                expect = -poly.coeffs[0].evaluate(x)
                _require(
                    abs(total - expect) <= 1e-10,
                    f"{spec.label()} at x={x}: root sum off by {abs(total - expect):.2e}",
                )
                prod = 1
                for r in roots:
                    prod *= r
                _require(
                    abs(abs(prod) - abs(coeffs_top.evaluate(x))) <= 1e-10,
                    f"{spec.label()} at x={x}: root product modulus off",
                )
        return "200 specs: verdicts agree; coefficient identities hold at samples"

    return _timed("unitarity-agreement", run)


def check_zeta_sanity() -> CheckResult:
    """Spot values of the zeta evaluator against closed forms and a direct
    summation oracle."""

    def run() -> str:
        z2 = riemann_zeta(2.0 + 0j)
        _require(abs(z2 - math.pi**2 / 6) <= 1e-10, f"zeta(2) off: {z2}")
        z0 = riemann_zeta(0.0 + 0j)
        _require(abs(z0 + 0.5) <= 1e-10, f"zeta(0) off: {z0}")
        cutoff = 100_000
        oracle = sum(n**-3.0 for n in range(1, cutoff + 1)) + 1 / (2 * cutoff**2)
        z3 = riemann_zeta(3.0 + 0j)
        _require(abs(z3 - oracle) <= 1e-7, f"zeta(3) vs direct sum: {abs(z3 - oracle):.2e}")
        return "zeta(2), zeta(0) exact to 1e-10; zeta(3) matches direct summation"

    return _timed("zeta-sanity", run)


ALL_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_rigidity_dichotomy,
    check_level_two_law,
    check_round_trip,
    check_zeta_product_identity,
    check_continuation_consistency,
    check_pole_accumulation,
    check_unitarity_agreement,
    check_zeta_sanity,
)


def run_all(progress: Optional[Callable[[CheckResult], None]] = None) -> list[CheckResult]:
    results = []
    for check in ALL_CHECKS:
        result = check()
        if progress is not None:
            progress(result)
        results.append(result)
    return results
