"""Embedded minimal disks whose curvature blows up at finitely many points.

A family of holomorphic functions ``h_a`` on thin pinched strips is pushed
through the Weierstrass representation with Gauss map ``exp(i h_a)``.  The
package evaluates the resulting immersions, their curvature, meshes them and
checks the estimates that make them embedded.
"""

from .domain import (CompactSubset, DomainSpec, GridSpec, build_domain, contains, omega_zero,
                     sample_grid)
from .export import (SurfaceMesh, ball_radius, build_mesh, clip_to_ball, read_mesh, write_mesh,
                     write_report)
from .geometry import (BlowupSweep, CurvatureSample, angle_defect_curvature, blowup_sweep,
                       gauss_curvature, second_ff_norm)
from .holo import (DomainError, FamilyData, HelicoidData, continuation_check, dzh_values,
                   eval_dz_h, eval_h, h_values)
from .immersion import (ImmersionSample, QuadratureConfig, QuadratureError, eval_F, eval_F_batch,
                        helicoid_oracle)
from .intersect import self_intersections
from .params import ConstructionParams
from .verify import (CheckRecord, VerificationReport, check_convergence, check_embedding,
                     check_graph_property, check_height, check_separation, check_two_sheets,
                     check_u_oscillation, convergence_table, run_all, sheet_count)

__all__ = [
    "BlowupSweep", "CheckRecord", "CompactSubset", "ConstructionParams", "CurvatureSample",
    "DomainError", "DomainSpec", "FamilyData", "GridSpec", "HelicoidData", "ImmersionSample",
    "QuadratureConfig", "QuadratureError", "SurfaceMesh", "VerificationReport",
    "angle_defect_curvature", "ball_radius", "blowup_sweep", "build_domain", "build_mesh",
    "check_convergence", "check_embedding", "check_graph_property", "check_height",
    "check_separation", "check_two_sheets", "check_u_oscillation", "clip_to_ball", "contains",
    "continuation_check", "convergence_table", "dzh_values", "eval_F", "eval_F_batch",
    "eval_dz_h", "eval_h", "gauss_curvature", "h_values", "helicoid_oracle", "omega_zero",
    "read_mesh", "run_all", "sample_grid", "second_ff_norm", "self_intersections",
    "sheet_count", "write_mesh", "write_report",
]
