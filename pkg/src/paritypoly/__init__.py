"""Sorting-free Euclidean projection onto parity polytopes and an ADMM LP decoder."""

from .geometry import (
    ForbiddenSetInequality,
    MembershipMode,
    ParityKind,
    clamp_unit_box,
    cut_search,
    is_member,
)
from .fix import FixProjectionResult, ProjectionTrace, Termination, project, project_hyperplane
from .opcount import Algorithm, OpCounters, counted_projection

__all__ = [
    "Algorithm",
    "FixProjectionResult",
    "ForbiddenSetInequality",
    "MembershipMode",
    "OpCounters",
    "ParityKind",
    "ProjectionTrace",
    "Termination",
    "clamp_unit_box",
    "counted_projection",
    "cut_search",
    "is_member",
    "project",
    "project_hyperplane",
]
