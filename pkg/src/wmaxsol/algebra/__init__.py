"""Operations, polymorphisms, groups and the binary-operation toolkit."""
from .binary import (
    FixitySet,
    GfDigraph,
    affine_by_nesting,
    build_gf,
    fixity,
    half_sum,
    in_class_a,
    iterate,
)
from .genmax import DEFAULT_WITNESS_BUDGET, find_genmax_witness
from .groups import (
    AbelianGroup,
    Labeling,
    LinearSystem,
    coset_to_linear_system,
    cyclic_group,
    distinct_affine_ops,
    enumerate_abelian_groups,
    group_from_table,
    klein_group,
)
from .named import (
    d_op,
    discriminator,
    dual_discriminator,
    exponent2_sum,
    named_op,
    named_ops,
    near_projection,
    r_op,
    switching,
)
from .ops import (
    OpPredicates,
    apply_componentwise,
    cayley,
    closure,
    constant_op,
    identity_op,
    is_affine_for,
    is_commutative,
    is_constant,
    is_generalised_max,
    is_idempotent,
    is_majority,
    is_maltsev,
    is_polymorphism,
    is_polymorphism_lang,
    is_two_semilattice,
    max_op,
    min_op,
    op_predicates,
    polymorphism_counterexample,
    projection,
)

__all__ = [name for name in dir() if not name.startswith("_")]
