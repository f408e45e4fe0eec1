"""Exact invariance certificates, extactic minors and first integrals for polynomial Pfaff systems."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BadPrimeError,
    CapExceededError,
    DimensionError,
    DomainError,
    InternalConsistencyError,
    NotProjectiveError,
    ParseError,
    PfaffkitError,
    TrivialKernelError,
)
from .exact import (  # noqa: E402
    Polynomial,
    RationalFunction,
    Residue,
    evaluate_at,
    exact_divide,
    gcd,
    reduce_mod_p,
    variables,
)
from .diffcalc import (  # noqa: E402
    FoliationSpec,
    PolyDifferentialForm,
    PolyVectorField,
    apply_derivation,
    contract,
    derivation_word,
    differential,
    dx,
    euler_field,
    exterior_derivative,
    involutivity_check,
    lie_bracket,
    pfaff_degree,
    wedge,
)
from .ratlinalg import PolyMatrix, det_fraction_free, kernel_min_support, rank_ratfunc  # noqa: E402
from .extactic import (  # noqa: E402
    ExtacticSystem,
    JetMatrix,
    LinearSystem,
    build_jet_matrix,
    degree_formula_check,
    extactic_minors,
    extactic_single,
    sieve_divisibility,
)
from .integrability import (  # noqa: E402
    DarbouxReport,
    FirstIntegralCandidate,
    InvariantCertificate,
    LogCertificate,
    Refusal,
    certify_invariant,
    darboux_log_certificate,
    extract_first_integral,
    rank_first_integral,
    ratio_extraction,
    verify_first_integral,
)
from .bounds import BoundReport, Verdict, compute_bound, h0_twisted_forms, verdict  # noqa: E402
from .census import CensusResult, enumerate_invariants_modp  # noqa: E402
from .dsl import SessionInput, parse_input  # noqa: E402
