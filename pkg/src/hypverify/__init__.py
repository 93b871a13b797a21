"""Verification toolkit for radial analysis on real hyperbolic space.

Seven building blocks, re-exported flat:

- ``geometry``: ball and half-space models, Mobius shifts, distances.
- ``exact``: rational Laurent/polynomial engines and exact identities.
- ``radial``: quadrature grids, norms, Laplacian, radial convolution.
- ``specialfn``: complex log-gamma, c-function, spherical functions.
- ``spectral``: the radial transform, multipliers, quadratic forms.
- ``kernels``: heat, resolvent, Green, and inverse operator kernels.
- ``inequalities``: deficit reports, trial families, sharp constants.

The ``cli`` module drives the verification suites (`hypverify verify`,
`hypverify constants`, `hypverify tabulate`).
"""

from hypverify.exact import (
    LaurentElement,
    Poly,
    ball_conjugation_numeric_check,
    ball_laplace_beltrami,
    gjms_operator,
    halfspace_conjugation_monomial_check,
    sinh_expansion_coefficients,
    verify_sinh_derivative_recursion,
    weighted_laplacian_conjugation_check,
)
from hypverify.geometry import (
    BallPoint,
    BoundaryError,
    Dimension,
    HalfSpacePoint,
    ball_to_halfspace,
    geodesic_distance,
    half_distance_factors,
    halfspace_distance,
    halfspace_to_ball,
    mobius_shift,
    radius_from_rho,
    rho_from_radius,
    volume_density,
)
from hypverify.inequalities import (
    VARIANTS,
    BubbleFamily,
    ConvolutionBoundReport,
    DeficitReport,
    DualityChainReport,
    HardyIdentityReport,
    InequalitySpec,
    biharmonic_hardy_identity_check,
    bubble_family,
    convolution_bound_check,
    deficit,
    duality_chain_check,
    estimate_best_constant,
    halfspace_deficit,
    hls_bilinear,
    hls_constant,
    hls_trial_family,
    ratio_curve,
    riesz_composition_identity,
    riesz_gamma,
    sobolev_constant,
    symbol_gap_infimum,
)
from hypverify.kernels import (
    KernelSpec,
    RecursionCoefficients,
    frac_resolvent_h3,
    fractional_green_h3,
    heat_kernel,
    limiting_green_kernel,
    product_resolvent_h5,
    qk_inverse_kernel,
    resolvent_kernel,
    sinh_recursion_coeffs,
)
from hypverify.radial import (
    RadialFunction,
    RadialGrid,
    as_callable,
    convolve_with_kernel,
    integrate_radial,
    lp_norm,
    make_radial_grid,
    radial_convolution,
    radial_laplacian,
    sphere_area,
)
from hypverify.specialfn import (
    PlancherelDensity,
    harish_chandra_c,
    log_gamma_complex,
    phi_matrix,
    plancherel_density,
    spherical_function,
    spherical_function_sphere_average,
)
from hypverify.spectral import (
    InsufficientDecayError,
    MultiplierSpec,
    SpectralFunction,
    SpectralGrid,
    apply_multiplier,
    forward_transform,
    inverse_transform,
    make_spectral_grid,
    plancherel_check,
    plancherel_prefactor,
    quadratic_form,
)

__version__ = "0.1.0"

__all__ = [
    "BallPoint",
    "BoundaryError",
    "BubbleFamily",
    "ConvolutionBoundReport",
    "DeficitReport",
    "Dimension",
    "DualityChainReport",
    "HalfSpacePoint",
    "HardyIdentityReport",
    "InequalitySpec",
    "InsufficientDecayError",
    "KernelSpec",
    "LaurentElement",
    "MultiplierSpec",
    "PlancherelDensity",
    "Poly",
    "RadialFunction",
    "RadialGrid",
    "RecursionCoefficients",
    "SpectralFunction",
    "SpectralGrid",
    "VARIANTS",
    "apply_multiplier",
    "as_callable",
    "ball_conjugation_numeric_check",
    "ball_laplace_beltrami",
    "ball_to_halfspace",
    "biharmonic_hardy_identity_check",
    "bubble_family",
    "convolution_bound_check",
    "convolve_with_kernel",
    "deficit",
    "duality_chain_check",
    "estimate_best_constant",
    "forward_transform",
    "frac_resolvent_h3",
    "fractional_green_h3",
    "geodesic_distance",
    "gjms_operator",
    "half_distance_factors",
    "halfspace_conjugation_monomial_check",
    "halfspace_deficit",
    "halfspace_distance",
    "halfspace_to_ball",
    "harish_chandra_c",
    "heat_kernel",
    "hls_bilinear",
    "hls_constant",
    "hls_trial_family",
    "integrate_radial",
    "inverse_transform",
    "limiting_green_kernel",
    "log_gamma_complex",
    "lp_norm",
    "make_radial_grid",
    "make_spectral_grid",
    "mobius_shift",
    "phi_matrix",
    "plancherel_check",
    "plancherel_density",
    "plancherel_prefactor",
    "product_resolvent_h5",
    "qk_inverse_kernel",
    "quadratic_form",
    "radial_convolution",
    "radial_laplacian",
    "radius_from_rho",
    "ratio_curve",
    "resolvent_kernel",
    "rho_from_radius",
    "riesz_composition_identity",
    "riesz_gamma",
    "sinh_expansion_coefficients",
    "sinh_recursion_coeffs",
    "sobolev_constant",
    "sphere_area",
    "spherical_function",
    "spherical_function_sphere_average",
    "symbol_gap_infimum",
    "verify_sinh_derivative_recursion",
    "volume_density",
    "weighted_laplacian_conjugation_check",
]
