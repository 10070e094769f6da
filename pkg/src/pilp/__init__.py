"""Exact value functions of parametric integer linear programs.

Programs have integer-polynomial data in one parameter t.  The package
enumerates lattice points exactly, fits and verifies eventual
quasi-polynomial value certificates, carries out constructive
decompositions (slack, translation, base-t digits, hyperplane layers,
lattice projection), and recovers the eventual vertex structure of the
convex hulls.  All arithmetic is exact; nothing is floating point.
"""

from .model import (
    ConcreteILP, CoordinateBound, Diagnostic, Form, InvalidProgramError,
    PILP, coordinate_bound_exponent, dumps_pilp, instantiate, load_pilp,
    loads_pilp, normalize_b_signs, pilp_from_json, pilp_to_json, save_pilp,
    validate,
)
from .poly import (
    BOTTOM, BottomArithmeticError, Poly, QuasiPolynomial, RationalFunction,
    ThresholdError, compare_eventually, eventual_sign,
    eventual_sign_threshold, eventual_sort, interpolate, poly_str, qp_eval,
    qp_equivalent, qp_from_json, qp_str, qp_to_json,
)
from .oracle import (
    EnumerationBudgetError, LPResult, LPStatus, UnboundedRelaxationError,
    count_lattice_points, f_ell, hull_vertices, points_at, solve_lp,
)
from .transforms import (
    AffineParamMap, DegenerateProgramError, DigitDecomposition,
    HyperplaneSpec, LayerDecomposition, ProjectionResult,
    canonical_to_standard_slack, general_to_canonical_translate,
    hyperplane_layers, project_to_hyperplane, standard_to_reduced_digits,
)
from .eqp import (
    ConstructiveMismatchError, EQPCertificate, InferenceConfig, NoFit,
    certificate_from_json, certificate_to_json, constructive_qp,
    f_ell_structure, infer_qp, kth_of_eqps, verify_qp,
)
from .hull import (
    ParametricVertexFamily, affinely_independent_eventually,
    candidate_vertices_reduced, convex_combination_eventually,
    eventual_hull_vertices, family_from_json, family_to_json,
    infer_hull_structure,
)
from .programs import example, example_names

__version__ = "0.1.0"

__all__ = [
    "AffineParamMap", "BOTTOM", "BottomArithmeticError", "ConcreteILP",
    "ConstructiveMismatchError", "CoordinateBound", "DegenerateProgramError",
    "Diagnostic", "DigitDecomposition", "EQPCertificate",
    "EnumerationBudgetError", "Form", "HyperplaneSpec", "InferenceConfig",
    "InvalidProgramError", "LPResult", "LPStatus", "LayerDecomposition",
    "NoFit", "PILP", "ParametricVertexFamily", "Poly", "ProjectionResult",
    "QuasiPolynomial", "RationalFunction", "ThresholdError",
    "UnboundedRelaxationError", "affinely_independent_eventually",
    "candidate_vertices_reduced", "canonical_to_standard_slack",
    "certificate_from_json", "certificate_to_json", "compare_eventually",
    "constructive_qp", "convex_combination_eventually",
    "coordinate_bound_exponent", "count_lattice_points", "dumps_pilp",
    "eventual_hull_vertices", "eventual_sign", "eventual_sign_threshold",
    "eventual_sort", "example", "example_names", "f_ell", "f_ell_structure",
    "family_from_json", "family_to_json", "general_to_canonical_translate",
    "hull_vertices", "hyperplane_layers", "infer_hull_structure", "infer_qp",
    "instantiate", "interpolate", "kth_of_eqps", "load_pilp", "loads_pilp",
    "normalize_b_signs", "pilp_from_json", "pilp_to_json", "points_at",
    "poly_str", "project_to_hyperplane", "qp_equivalent", "qp_eval",
    "qp_from_json", "qp_str", "qp_to_json", "save_pilp", "solve_lp",
    "standard_to_reduced_digits", "validate", "verify_qp",
]
