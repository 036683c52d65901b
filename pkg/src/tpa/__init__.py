"""Exact rational arithmetic for half-derivations and transposed Poisson
structures on matrix Lie algebras.

Everything runs over Q with fractions.Fraction scalars; there is no floating
point anywhere. See the README for the CLI and the JSON interchange formats.
"""

__version__ = "0.1.0"

from .liealg import (  # noqa: F401
    BasisLabel,
    LieAlgebra,
    Subspace,
    abelian,
    full_matrix,
    special_linear,
    upper_triangular,
)
from .halfderiv import (  # noqa: F401
    HALF,
    LinearMap,
    alpha_map,
    beta_map,
    delta_derivation_space,
    gamma_map,
    is_delta_derivation,
    verify_entry_lemmas,
)
from .products import (  # noqa: F401
    BilinearProduct,
    StructureReport,
    catalog,
    extension_by_zero,
    is_poisson_type,
    is_tp_structure,
    mn_trace_product,
    orthogonal_sum,
    t2_catalog,
    tn_corner_product,
)
from .classify import (  # noqa: F401
    Automorphism,
    ParamFamily,
    associativity_constraints,
    conjugation_automorphism,
    flip_automorphism,
    invariant_signature,
    normalize_tn,
    sample_solutions,
    support_pattern,
    tp_ansatz,
    trace_scaling_automorphism,
    transport,
)
