"""Exact computations with braided autoequivalences of Drinfeld centers.

The package computes, over exact cyclotomic arithmetic, the modular data
(S, T) of the center of the category of G-graded vector spaces for a finite
group G, and realizes families of braided autoequivalences of that center:

* ``groups``  -- finite groups by multiplication table, subgroups, morphisms;
* ``cyclo``   -- exact cyclotomic numbers (sparse roots of unity over Q);
* ``zmodlin`` -- linear algebra over Z/m (echelon, Smith form, solving);
* ``chars``   -- exact character tables and Clifford-theory restriction;
* ``cohom``   -- 2-cocycles, H^2 classes, pairings, lazy representatives;
* ``center``  -- simple objects, S and T matrices, Verlinde fusion rules;
* ``autoeq``  -- braided autoequivalences: constructions from group
  automorphisms, double cohomology classes, lazy module-category twists,
  and partial dualizations; completion search; bimodule invariants;
* ``fpn``     -- the matrix model over F_p for elementary abelian gradings:
  form-preserving matrices, the dictionary to autoequivalences, generator
  families, an independent order oracle, and Bruhat factorization.

The ``brpic`` command-line tool (see ``brpic --help``) exposes the same
functionality as deterministic JSON reports.
"""

from .autoeq import (
    BimoduleData,
    BraidedAutoeq,
    GeneratedGroup,
    PartialBrEq,
    Provenance,
    autoeq_from_json,
    autoeq_to_json,
    bimodule_data,
    complete_extensions,
    compose,
    equal,
    from_bv,
    from_ev_lazy,
    from_hopf_auto,
    generate_group,
    identity_autoeq,
    inverse,
    partial_dualization_rprime,
    preserves_modular_data,
    self_dual_pairing,
)
from .center import (
    ModularData,
    SimpleObject,
    modular_data,
    simple_objects,
    verlinde_fusion,
)
from .chars import Character, character_table
from .cohom import (
    Cocycle2,
    antisymmetrize,
    coboundary,
    h2_classes,
    is_nondegenerate,
)
from .cyclo import Cyclotomic, root_of_unity
from .errors import BrpicError
from .fpn import (
    BruhatCell,
    FpMatrix,
    bruhat_factorize,
    generate_matrix_group,
    group_order_oracle,
    hyperbolic_form,
    matrix_to_autoeq,
    autoeq_to_matrix,
    standard_generators,
    subgroup_generators,
)
from .groups import (
    FiniteGroup,
    GroupMorphism,
    Subgroup,
    abelian_normal_subgroups,
    all_subgroups,
    automorphisms,
    conjugacy_classes,
    identity_morphism,
    named_group,
    semidirect_decompositions,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # groups
    "FiniteGroup",
    "Subgroup",
    "GroupMorphism",
    "named_group",
    "conjugacy_classes",
    "identity_morphism",
    "automorphisms",
    "all_subgroups",
    "abelian_normal_subgroups",
    "semidirect_decompositions",
    # exact scalars
    "Cyclotomic",
    "root_of_unity",
    # characters
    "Character",
    "character_table",
    # cohomology
    "Cocycle2",
    "coboundary",
    "h2_classes",
    "antisymmetrize",
    "is_nondegenerate",
    # center
    "SimpleObject",
    "ModularData",
    "simple_objects",
    "modular_data",
    "verlinde_fusion",
    # autoequivalences
    "Provenance",
    "BraidedAutoeq",
    "PartialBrEq",
    "BimoduleData",
    "GeneratedGroup",
    "identity_autoeq",
    "from_hopf_auto",
    "from_bv",
    "from_ev_lazy",
    "self_dual_pairing",
    "partial_dualization_rprime",
    "complete_extensions",
    "compose",
    "inverse",
    "equal",
    "generate_group",
    "preserves_modular_data",
    "bimodule_data",
    "autoeq_to_json",
    "autoeq_from_json",
    # matrix model
    "FpMatrix",
    "BruhatCell",
    "hyperbolic_form",
    "autoeq_to_matrix",
    "matrix_to_autoeq",
    "subgroup_generators",
    "standard_generators",
    "generate_matrix_group",
    "group_order_oracle",
    "bruhat_factorize",
    # errors
    "BrpicError",
]
