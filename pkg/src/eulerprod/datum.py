"""Norm systems: rational primes by default, user-supplied lists otherwise.

A norm system is just an ascending list of real norms N > 1 (repetition
allowed — split primes or distinct geodesics may share a norm) over which a
template's Euler product is evaluated.  Custom systems are evaluation-only:
the zeta-factor decomposition is specific to the rational primes, so
nothing continuation-related accepts a custom system.

File format: one decimal norm per line, ``#`` comments and blank lines
ignored; norms are sorted on load.  The rational-prime system stores the
primes exactly (they are exactly representable as doubles), so products
over it reproduce :func:`eulerprod.analytic.euler_product_eval` bit for bit
in serial mode.
"""

from __future__ import annotations

import os
from typing import Union

import numpy as np

from .analytic import _local_factor_logs, _prime_norms, product_over_norms
from .chars import CharPolynomial
from .errors import DatumError, RegionError


class EulerDatum:
    """An ascending list of norms with a label.

    ``is_rational_primes`` marks systems built by :meth:`from_primes`;
    only those may feed decomposition-based continuation.
    """

    def __init__(
        self,
        norms,
        label: str = "custom",
        is_rational_primes: bool = False,
    ):
        arr = np.asarray(norms, dtype=np.float64)
        if arr.ndim != 1:
            raise DatumError("norms must form a one-dimensional list")
        if arr.size and not np.all(arr > 1.0):
            raise DatumError("every norm must exceed 1")
        arr = np.sort(arr)
        arr.setflags(write=False)
        self._norms = arr
        self.label = label
        self.is_rational_primes = is_rational_primes

    @property
    def norms(self) -> np.ndarray:
        return self._norms

    def __len__(self) -> int:
        return int(self._norms.size)

    def __repr__(self) -> str:
        return f"EulerDatum({self.label!r}, {len(self)} norms)"

    @classmethod
    def from_primes(cls, limit: int) -> "EulerDatum":
        return cls(
            _prime_norms(limit), label=f"primes<={limit}", is_rational_primes=True
        )


def load_datum(path: Union[str, os.PathLike]) -> EulerDatum:
    """Read a norm file; malformed lines are reported with their number."""
    norms = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                value = float(line)
            except ValueError:
                raise DatumError(f"{path}: line {lineno}: unparsable norm {line!r}")
            if not value > 1.0:
                raise DatumError(
                    f"{path}: line {lineno}: norm {value!r} must exceed 1"
                )
            norms.append(value)
    return EulerDatum(norms, label=str(path))


def datum_euler_product_eval(
    datum: EulerDatum, poly: CharPolynomial, s: complex, threads: int = 1
) -> complex:
    """Truncated product over the datum's norms; empty datum gives 1.

    Requires ``Re(s) > 1``.  For custom norm systems convergence is
    heuristic and remains the caller's responsibility.
    """
    s = complex(s)
    if s.real <= 1:
        raise RegionError("truncated Euler products require Re(s) > 1")
    if len(datum) == 0:
        return complex(1)
    return product_over_norms(poly, datum.norms, s, threads)


def partial_products(
    datum: EulerDatum, poly: CharPolynomial, s: complex
) -> np.ndarray:
    """Convergence diagnostics: the partial product after each norm.

    For ``Re(s) = 2`` the increment magnitudes shrink monotonically for the
    family templates, which makes truncation behaviour visible at a glance.
    """
    s = complex(s)
    if s.real <= 1:
        raise RegionError("truncated Euler products require Re(s) > 1")
    if len(datum) == 0:
        return np.ones(0, dtype=np.complex128)
    logs = _local_factor_logs(poly, datum.norms, s)
    return np.exp(-np.cumsum(logs))
