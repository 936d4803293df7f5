"""Numerics for k-hypermonogenic functions and their Eisenstein series.

Modules
-------
clifford     Clifford algebra Cl_n, paravectors and upper half-space points.
moebius      Ahlfors-Vahlen matrices, Moebius action, coset enumeration.
diffops      Finite-difference residuals of the differential operators.
specfun      Modified Bessel function K_nu and the Gamma function.
eisenstein   Truncated Eisenstein series and their tail estimates.
fourier      Fourier kernels, coefficient extraction and alpha(m) recovery.
cli          Command-line front end (``hypermonogenic`` / ``python3 -m hypermonogenic``).
"""
from .clifford import (
    Algebra,
    Multivector,
    Paravector,
    UpperHalfPoint,
    format_multivector,
    geometric_product,
    get_algebra,
    involution,
    parse_multivector,
    pq_split,
)
from .diffops import (
    FunctionOracle,
    StencilSpec,
    apply_cauchy_riemann,
    khyper_residual,
    khypharm_residual,
    laplace_beltrami,
    maass_residual,
    qpart_residual,
)
from .eisenstein import EisensteinSpec, SeriesValue, eval_eisenstein, lift_negative_k, tail_estimate
from .errors import (
    AliasingError,
    DimensionError,
    DivergentSpecError,
    DomainError,
    EnumerationError,
    HypermonogenicError,
    PoleError,
    ShapeError,
    SingularError,
)
from .fourier import (
    FourierExpansion,
    FrequencyVector,
    QuadratureSpec,
    alpha_from_series,
    beta_closed_form,
    beta_numeric_oracle,
    extract_coefficient,
    monogenic_planewave,
    reconstruct,
)
from .moebius import (
    LatticeSpec,
    TruncationPolicy,
    VahlenMatrix,
    automorphy_factor,
    check_vahlen_conditions,
    enumerate_cosets,
    mobius_apply,
)
from .specfun import bessel_k, gamma_fn, kv

__version__ = "0.1.0"
