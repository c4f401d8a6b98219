"""Exact computations in skew extensions of finite-dimensional rational algebras."""

from .algebra import (
    AlgebraPresentation,
    Check,
    Ideal,
    RadicalChain,
    ideal_generated_by,
    jacobson_radical,
    multiply,
    nilpotency_index,
    power_in_radical,
    prime_radical,
    prime_radical_chain,
    quasi_inverse,
    quotient,
    validate_presentation,
    wedderburn_radical,
)
from .errors import (
    CapExceededError,
    DimensionError,
    GrassmannBoundaryError,
    HypothesisError,
    NotLocallyNilpotentError,
    OrelabError,
    RadicalComputationError,
)
from .linear import Subspace, rref
from .lnd import (
    Derivation,
    Filtration,
    check_prop_22,
    check_surjective,
    check_theorem_b,
    degree,
    exp_derivation,
    grassmann_algebra,
    grassmann_preimage,
    induced_presentation,
    kernel_filtration,
)
from .maps import (
    Automorphism,
    GeneratorFamily,
    LinearEndomap,
    SigmaDerivation,
    bold_Vk,
    check_automorphism,
    check_sigma_derivation,
    check_strong_invariance,
    delta_nk_image,
)
from .skew import (
    NilpotencyCertificate,
    SkewPolynomial,
    SkewSpan,
    certify_theorem_14,
    certify_theorem_16,
    enumerate_B,
    multiply_skew,
    push_left,
    verify_product_inclusion,
)

# descriptive aliases
certify_power_nilpotency = certify_theorem_14
certify_prime_descent = certify_theorem_16

__version__ = "0.1.0"
