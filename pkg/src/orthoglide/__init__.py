"""Certified dextrous workspace and largest enclosed cube of the Orthoglide."""

__version__ = "0.1.0"

from .certify import BoxClass, DomainTag, ExclusionBudget, Verdict, ZeroTest, classify, excludes_zero
from .cube import CubeParams, CubeResult, grow_cube_at, largest_cube
from .interval import Box, Interval, bisect_widest
from .kinematics import (
    DomainError,
    Point,
    SingularityError,
    Spectrum,
    TransmissionSpec,
    char_value,
    det_A_enclosure,
    in_domain,
    inverse_kinematics,
    parallel_singularity_at,
    serial_singularity_at,
    spectrum_at,
)
from .workspace import WorkspaceParams, WorkspaceResult, compute_workspace, workspace_volume_bracket

__all__ = [
    "Box",
    "BoxClass",
    "CubeParams",
    "CubeResult",
    "DomainError",
    "DomainTag",
    "ExclusionBudget",
    "Interval",
    "Point",
    "SingularityError",
    "Spectrum",
    "TransmissionSpec",
    "Verdict",
    "WorkspaceParams",
    "WorkspaceResult",
    "ZeroTest",
    "bisect_widest",
    "char_value",
    "classify",
    "compute_workspace",
    "det_A_enclosure",
    "excludes_zero",
    "grow_cube_at",
    "in_domain",
    "inverse_kinematics",
    "largest_cube",
    "parallel_singularity_at",
    "serial_singularity_at",
    "spectrum_at",
    "workspace_volume_bracket",
]
