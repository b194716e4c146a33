"""Special Kahler geometry in rigid and local form.

From a holomorphic prepotential or a symplectic section the toolkit computes
Kahler potentials, metrics and vector kinetic matrices, applies symplectic
duality transformations, checks the defining constraints, decides whether a
symplectic frame admits a prepotential, and evaluates the cone metric.
"""
from .catalog import CatalogEntry, catalog_get, catalog_names
from .errors import (DegenerateFrameError, DegenerateModelWarning, DimensionError, DomainError,
                     ExprSyntaxError, FrameDegeneracyError, HomogeneityError, ModelFileError,
                     NotSymplecticError, PreconditionError, PrepotentialNotFoundError, SingularPointError,
                     SpecialKahlerError, UnknownVariableError)
from .holo import HoloExpr, compile_exprs, diff_expr, eval_expr, parse_expr, substitute
from .local import (ConePoint, LocalPrepotentialModel, LocalSectionModel, apply_symplectic_local,
                    build_section, check_homogeneity, cone_metric, constraint_check, covariant_derivative,
                    gauge_fix, local_kahler, local_kinetic, local_metric, point_geometry,
                    prepotential_exists, reconstruct_prepotential)
from .maxwell import compute_G, hodge_dual, selfdual_split, transform_pair
from .modelfile import ModelDescription, load_model, parse_model_text
from .rigid import (ChartTransition, RigidPrepotentialModel, RigidSectionModel, apply_transition,
                    rigid_constraint, rigid_kahler, rigid_kahler_prepotential, rigid_kinetic, rigid_metric,
                    rigid_section)
from .symplectic import (KineticMatrix, SymplecticFrame, SymplecticMatrix, act_on_kinetic, canonicalize,
                         inner, is_symplectic, random_symplectic)

__version__ = "0.1.0"
