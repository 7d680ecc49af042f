"""Full classification of one operator into the normal / cohyponormal /
semi-hyponormal / paranormal / GCSI classes, plus the kernel relations."""
from __future__ import annotations

from dataclasses import dataclass

from .classes import (
    ClassVerdict,
    is_cohyponormal,
    is_normal,
    is_semi_hyponormal,
    kernel_containment,
    kernel_equality,
    paranormal_defect,
)
from .engine import MEMBER, NON_MEMBER, GcsiVerdict, gcsi_index
from .linalg import DEFAULT_TOL, as_matrix, rank
from .search import SearchConfig


@dataclass(frozen=True)
class ClassificationReport:
    normal: ClassVerdict
    cohyponormal: ClassVerdict
    semi_hyponormal: ClassVerdict
    paranormal: ClassVerdict
    gcsi: GcsiVerdict
    kernel_eq: bool
    kernel_containment: bool
    rank: int
    rank_square: int

    def lattice_violations(self):
        """Names of implications that this report breaks (empty when consistent)."""
        broken = []
        if self.normal.holds and not self.semi_hyponormal.holds:
            broken.append("normal => semi_hyponormal")
        if self.semi_hyponormal.holds and not self.paranormal.holds:
            broken.append("semi_hyponormal => paranormal")
        if self.semi_hyponormal.holds and not self.normal.holds:
            broken.append("semi_hyponormal => normal (finite dimension)")
        if self.gcsi.membership == MEMBER and not self.kernel_eq:
            broken.append("gcsi member => N(A) = N(A^2)")
        if self.gcsi.membership == MEMBER and not self.kernel_containment:
            broken.append("gcsi member => N(A) in N(A*)")
        if self.semi_hyponormal.holds and self.gcsi.membership == NON_MEMBER:
            broken.append("semi_hyponormal => not non_member")
        return broken

    def to_json(self):
        return {
            "normal": self.normal.to_json(),
            "cohyponormal": self.cohyponormal.to_json(),
            "semi_hyponormal": self.semi_hyponormal.to_json(),
            "paranormal": self.paranormal.to_json(),
            "gcsi": self.gcsi.to_json(),
            "kernel_eq": bool(self.kernel_eq),
            "kernel_containment": bool(self.kernel_containment),
            "rank": int(self.rank),
            "rank_square": int(self.rank_square),
        }


def classify(a, config=None, k=1, tol=DEFAULT_TOL):
    a = as_matrix(a, square=True)
    config = config or SearchConfig()
    return ClassificationReport(
        normal=is_normal(a, tol),
        cohyponormal=is_cohyponormal(a, tol),
        semi_hyponormal=is_semi_hyponormal(a, tol),
        paranormal=paranormal_defect(a, config, k=k, tol=tol),
        gcsi=gcsi_index(a, config, k=k, tol=tol),
        kernel_eq=kernel_equality(a, tol),
        kernel_containment=kernel_containment(a, tol),
        rank=rank(a, tol),
        rank_square=rank(a @ a, tol),
    )
