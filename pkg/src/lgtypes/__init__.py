"""Logical types of points in finite algebras.

Multi-sorted formulas and their valuation, translation to first-order
logic, bounded type comparison, integer lattice tools for free abelian
groups, and free semigroup and free group word utilities.
"""
from .algebra import (
    App,
    FiniteAlgebra,
    Point,
    Signature,
    Sort,
    Substitution,
    Var,
    automorphisms,
    cyclic_group,
    klein_group,
    orbit_equivalent,
    small_groups,
    symmetric_group3,
)
from .formulas import (
    And,
    Eq,
    Exists,
    Not,
    Or,
    Subst,
    enumerate_formulas,
    length,
    presentation_formula,
    proper_extension_formula,
)
from .freeword import (
    abelianize,
    apply_f2_endo,
    freduce,
    s3_image,
    semigroup_extend,
    verify_f2_counterexample,
)
from .semantics import bounded_lker_eq, ef_equivalent, lker_member, val, val_member
from .translate import fo_sat, tp_member, translate
from .zlattice import (
    IntMatrix,
    abelian_extend,
    eval_u_abelian,
    eval_v_abelian,
    smith_normal_form,
    solve_endo,
    stacked_basis,
)

__version__ = "0.1.0"
