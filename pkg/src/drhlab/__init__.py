"""Desk-scale numerical lab for Euler products on the critical line,
mod-4 prime races, and Ramanujan tau bias experiments."""

from .akatsuka import (
    CriticalPoint,
    RatioSample,
    akatsuka_ratio,
    finite_zeta,
    log_normalizer,
    normalizer,
    psi_error_diag,
    validate_normalizer,
)
from .bias import (
    Crossing,
    DensityReport,
    StepSeries,
    char_bias_series,
    crossings,
    densities,
    loglog_ratio,
    sarnak_statistic,
    tau_bias_series,
    weighted_pi,
)
from .characters import CHI3, CHI4, RealCharacter
from .euler import (
    Decomposition,
    ProductTrace,
    decompose,
    decompose_many,
    drh_ratio,
    drh_target,
    partial_product_log,
    partial_product_log_at,
)
from .families import (
    CharacterFamily,
    DeltaFamily,
    LocalFactor,
    UnitaryFamily,
    character_family,
    delta_family,
    delta_of,
    family_by_label,
    local_factor,
)
from .lvalues import (
    LValue,
    lvalue_chi4_center,
    lvalue_chi4_center_hurwitz,
    lvalue_delta_center,
)
from .primes import (
    MangoldtValue,
    PrimeTable,
    chebyshev_psi,
    count_by_class,
    mangoldt,
    mertens_sum,
    primes_upto,
    read_prime_cache,
    sieve_range,
    write_prime_cache,
)
from .tau import (
    SatakeAngle,
    TauTable,
    build_tau_table,
    crt_reconstruct,
    exact_convolve,
    lambda_of,
    read_tau_cache,
    theta_of,
    verify_table,
    write_tau_cache,
)

__version__ = "0.1.0"
