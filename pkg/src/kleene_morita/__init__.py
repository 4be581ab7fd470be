"""Finite Kleene algebras, Kleene modules, tensor products and Morita equivalence, checked by enumeration."""

from .algebra import (
    DEFAULT_BOUNDS,
    AlgebraHomomorphism,
    Bounds,
    Element,
    FiniteKleeneAlgebra,
    MatrixAlgebra,
    MatrixElement,
    bool2,
    check_algebra_homomorphism,
    check_kleene_axioms,
    construct_builtin,
    find_algebra_isomorphism,
    matrix_algebra,
    natural_order,
    relation_algebra,
    resolve_algebra,
    star_saturate,
    subalgebra,
)
from .congruence import GeneratedCongruence, ModuleCongruence, congruence_closure, quotient_module
from .errors import (
    AlgebraMismatchError,
    CornerStarError,
    KleeneError,
    ParseError,
    PreconditionError,
    SizeGuardError,
    SubalgebraError,
    ValidationError,
)
from .fileformat import Catalog, StructureWriter, parse_structure_file, write_witness
from .module import (
    FiniteKleeneModule,
    ModuleHomomorphism,
    algebra_as_bimodule,
    check_isomorphism,
    check_module_axioms,
    check_module_homomorphism,
    dual_module,
    free_module,
    hom_module,
    hom_set,
    module_iso_search,
    regular_module,
    submodule_generated,
)
from .morita import (
    HomomorphismModule,
    Idempotent,
    MoritaWitness,
    check_category_equivalence,
    check_composition_law,
    corner_algebra,
    full_idempotents,
    homomorphism_module,
    is_full_idempotent,
    lift_semiring_morita,
    matrix_morita_witness,
    parse_idempotent,
    scalar_embedding,
)
from .report import Check, Report
from .tensor import (
    Adjunction,
    TensorProduct,
    check_adjunction,
    check_monoid_laws,
    check_tensor,
    pure_tensor,
    tensor_map,
    tensor_product,
)
from .verify import verify_catalog

__version__ = "0.1.0"
