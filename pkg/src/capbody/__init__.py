"""Cap bodies of the unit ball: illumination criteria, constructive solvers and brute-force oracles."""

from .caps import (
    Cap,
    CapBody,
    KTangentProfile,
    Packing,
    Violation,
    cap_from_vertex,
    classify_k_tangent,
    is_centrally_symmetric,
    is_unconditional,
    k_tangent_radius,
    ktangent_sets_compatible,
    validate_packing,
    vertex_from_cap,
    view_angle_sin,
)
from .errors import (
    CapBodyError,
    GenerationStalled,
    InternalContradiction,
    InvalidInputError,
    InvalidPacking,
    NotCentrallySymmetric,
    NotOnBoundary,
    NotUnconditional,
    PointInsideCap,
    UnrecognizedConfiguration,
    VertexInsideBall,
)
from .generate import canned, central_s2, unconditional_s3
from .illumination import (
    DirectionSet,
    IlluminationCertificate,
    greatsphere_separates,
    hemisphere_separates,
    hemispheres_cover,
    illuminates_sphere_point,
    illuminates_vertex,
    pair_separable_by_one_hemisphere,
    verify_illumination,
)
from .kernels import BACKEND
from .oracle import Membership, MCReport, direct_illuminated, mc_verify, membership, radial_function
from .solver3d import Solution3D, solve_central_s2
from .solver4d import CaseId, CaseKind, Solution4D, detect_case, solve_unconditional_s3, stranded_distance
from .sphere import DEFAULT_TOL, Tolerance, Verdict, angular_distance, rotation_about_axis, rotation_taking

__version__ = "0.1.0"
