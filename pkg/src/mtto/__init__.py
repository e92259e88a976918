"""Matrix-valued truncated Toeplitz operators on K_Θ with Θ(z) = z^N I_E."""

from .analysis import (
    HypothesisError,
    NotToeplitzError,
    VerdictReport,
    coefficient_criteria,
    difference_condition,
    extract_symbol,
    is_mtto_via_delta,
    lemma_residual_check,
    oracle_is_block_toeplitz,
    product_condition,
)
from .fast import FastToeplitzPlan, apply, plan
from .linalg import (
    Conjugation,
    commutes,
    gamma_apply,
    gamma_sandwich,
    gamma_symmetrize,
    random_conjugation,
)
from .model import (
    BlockOperator,
    ModelSpaceSpec,
    ModelVector,
    TallMap,
    bold_CGamma,
    build_J,
    build_J0,
    build_mtto,
    conj_CGamma,
    delta,
    embed_V,
    proj_const,
    proj_dstar,
    shift,
)
from .symbols import (
    LaurentSymbol,
    SymbolDecomposition,
    SymbolFamily,
    decompose,
    gen_family,
    gen_sedlock_pair,
    is_gamma_compatible,
    recompose,
    sedlock_symbol,
    symbols_commute,
)

__version__ = "0.1.0"
