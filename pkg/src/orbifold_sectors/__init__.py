"""Finite models of orbifold twisted sectors, orientifolds and their dihedral sectors.

Groups are multiplication tables, groupoids are finite arrays of arrows, and
linear carriers are explicit matrices, so every construction can be checked
exhaustively.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .groups import (DEFAULT_CAP, ConjugacyClass, DoubledGroup, FiniteGroup, GradedGroup, closure,
                     conjugacy_classes, cycle_notation, grade, odd_involutions, parse_cycles,
                     semidirect_double, verify_group_axioms)
from .groupoids import (ActionGroupoidSpec, AxiomReport, FiniteGroupoid, GroupoidFunctor, Verdict,
                        action_from_generators, action_from_table, action_groupoid,
                        check_groupoid_axioms, check_natural_transformation, coarse_space,
                        component_index, compose_functors, discrete_groupoid, functor, identity_functor,
                        inertia, is_isomorphism, is_weak_equivalence, isotropy, natural_action,
                        point_action, relabel, validate_functor)
from .linear import (COMPLEX, REAL_SYMPLECTIC, AgeRecord, LinearRep, Subspace, age,
                     common_fixed_subspace, eigenphase_multiplicities, element_order, fixed_subspace,
                     is_lagrangian, kernel, rep_from_generators, rep_from_matrices, standard_form)
from .lagrangian import (LagrangianGroupoid, OrientifoldModel, ValidationReport, adjoint_orbits,
                         build_lagrangian, involution_components, validate_orientifold)
from .dihedral import (DihedralComponent, DihedralSector, census_by_order, components_by_order,
                       dihedral_components, dihedral_morphism_census, dihedral_sector)
from .diagonal import (CorrespondenceEntry, DiagonalModel, check_diagonal_equivalence, diagonal_groupoid,
                       diagonal_lagrangian, diagonal_model, sector_correspondence)
from .modelfile import ModelFile, assemble, emit_model, parse_model, parse_model_text
