"""dyadicl: exact 2-adic analysis of Dirichlet L-values over the
cyclotomic 2-tower, with derived zeta values, even K-group orders,
growth invariants and a congruence verification suite."""

from .cache import CachePoisonedError, LValueCache
from .characters import (
    CONVENTION,
    CharSpec,
    FrobeniusConstant,
    char_eval,
    chi_eval,
    conductor,
    frobenius_constant,
    kronecker_symbol,
    psi_eval,
)
from .cyclotomic import (
    CyclotomicNumber,
    DyadicValuation,
    LevelMismatchError,
    add,
    congruent_mod,
    cyclo_from_rational,
    embed_to_level,
    field_norm,
    galois_conjugate,
    mul,
    neg,
    ord2,
    root_of_unity,
    sub,
)
from .iwasawa import (
    FieldLayerSpec,
    InvariantTriple,
    KGroupOrder,
    NdBound,
    TameKernelStructure,
    empirical_threshold,
    field_layer,
    invariant_triple,
    k_group_ord2,
    n_d_bound,
    nu_prime,
    predicted_lvalue_ord,
    tame_kernel_structure,
    w_m_ord2,
)
from .lvalues import (
    CharacterSum,
    LValueResult,
    NonPrimitiveError,
    SizeGuardError,
    bernoulli_number,
    bernoulli_poly,
    char_sum_S,
    char_sum_T,
    gen_bernoulli,
    l_value,
    l_value_imprimitive,
    l_value_minus1_quadsum,
    use_disk_cache,
    zeta_Kn,
    zeta_Qn,
)
from .verify import CheckReport, GridConfig, run_all

__version__ = "0.1.0"
