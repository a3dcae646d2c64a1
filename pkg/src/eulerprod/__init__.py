"""Rigidity analysis and numerical evaluation of parametrized Euler products.

The library decides whether a family member's Euler product continues to a
meromorphic function on the whole complex plane or stops at the natural
boundary ``Re(s) = 0``, computes the zeta-factor decomposition realizing the
continuation into ``0 < Re(s) < 1``, evaluates the products numerically, and
emits the atlas of candidate poles whose real parts ``1/m`` accumulate at
the boundary.
"""

from .chars import CharParam, CharPolynomial, VirtualCharacter, as_param
from .families import (
    FamilySpec,
    NonUnitaryWitness,
    UnitarityVerdict,
    assess_unitarity,
    build_abc,
    build_chain,
    is_unitary_algebraic,
    product_of_linear_factors,
    reciprocal_roots,
    sample_points,
    unitarity_witness_search,
)
from .decomp import (
    MAX_LEVEL,
    RigidityClass,
    TruncatedSeries,
    ZetaDecomposition,
    binomial_factor,
    classify_rigidity,
    decompose,
    reconstruct,
)
from .analytic import (
    CONTINUATION_MARGIN,
    DEFAULT_CONFIG,
    EvalConfig,
    GridSpec,
    MAX_PRIME_LIMIT,
    PoleEntry,
    Region,
    ScanRow,
    boundary_scan,
    continued_eval,
    euler_product_eval,
    pole_atlas,
    riemann_zeta,
    sieve_primes,
    write_scan_csv,
)
from .datum import EulerDatum, datum_euler_product_eval, load_datum, partial_products
from .errors import (
    ConsistencyError,
    DatumError,
    EulerProdError,
    RegionError,
    RootConvergenceError,
    VanishingFactorError,
    ZetaPoleError,
)

__version__ = "0.1.0"

__all__ = [
    "CharParam",
    "CharPolynomial",
    "VirtualCharacter",
    "as_param",
    "FamilySpec",
    "NonUnitaryWitness",
    "UnitarityVerdict",
    "assess_unitarity",
    "build_abc",
    "build_chain",
    "is_unitary_algebraic",
    "product_of_linear_factors",
    "reciprocal_roots",
    "sample_points",
    "unitarity_witness_search",
    "MAX_LEVEL",
    "RigidityClass",
    "TruncatedSeries",
    "ZetaDecomposition",
    "binomial_factor",
    "classify_rigidity",
    "decompose",
    "reconstruct",
    "CONTINUATION_MARGIN",
    "DEFAULT_CONFIG",
    "EvalConfig",
    "GridSpec",
    "MAX_PRIME_LIMIT",
    "PoleEntry",
    "Region",
    "ScanRow",
    "boundary_scan",
    "continued_eval",
    "euler_product_eval",
    "pole_atlas",
    "riemann_zeta",
    "sieve_primes",
    "write_scan_csv",
    "EulerDatum",
    "datum_euler_product_eval",
    "load_datum",
    "partial_products",
    "ConsistencyError",
    "DatumError",
    "EulerProdError",
    "RegionError",
    "RootConvergenceError",
    "VanishingFactorError",
    "ZetaPoleError",
]
