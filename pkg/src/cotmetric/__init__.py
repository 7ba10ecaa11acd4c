"""Cotangent Laplacian, heat kernel, and metric recovery on triangle meshes.

The forward direction maps edge lengths to cotangent edge weights, the
Laplace matrix and the heat kernel. The inverse direction recovers edge
lengths, up to a global scale, from the weights by minimizing a convex
energy.
"""
from .energy import (
    assemble_gradient,
    assemble_hessian,
    energy_value,
    face_gradient,
    face_hessian,
)
from .kernels import get_backend, set_backend
from .laplace import (
    SpectralData,
    corner_angles,
    cotangent_weights,
    face_geometry,
    heat_kernel,
    heat_kernel_to_laplacian,
    laplace_matrix,
    spectral_decomposition,
)
from .mesh import (
    MeshConnectivity,
    MeshError,
    boundary_edges,
    double_cover,
    euler_characteristic,
    induced_metric,
    load_obj,
    write_obj,
)
from .metric import (
    InadmissibleMetricError,
    PolyhedralMetric,
    UCoordinates,
    from_u,
    is_admissible,
    normalize,
    project_tangent,
    to_u,
)
from .recover import (
    SolveReport,
    SolverOptions,
    recover_metric,
    recover_via_double_cover,
    solve_triangle,
    verify_scaling,
)

__version__ = "0.1.0"
