"""Verification report container shared by the kernel and harness modules."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Measured constants/ratios for one check, with a verdict.

    ``verdict`` is ``"pass"`` iff the max measured ratio stays at or below
    the declared ceiling and the stability variation across refinement is
    at most 50% (checks may downgrade to ``"warning"`` on soft conditions).
    """

    check_id: str
    parameters: dict = field(default_factory=dict)
    measured: list = field(default_factory=list)
    verdict: str = "pass"
    stability: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def csv_rows(self):
        for i, m in enumerate(self.measured):
            yield (self.check_id, _param_hash(self.parameters), i, m)

    def summary_line(self) -> str:
        xs = [m for m in self.measured if m == m]
        lo = min(xs) if xs else float("nan")
        hi = max(xs) if xs else float("nan")
        return (f"{self.check_id}: verdict={self.verdict} trials={len(self.measured)} "
                f"range=[{lo:.4g}, {hi:.4g}] stability={self.stability:.3f}")


def _param_hash(params: dict) -> str:
    import hashlib
    import json

    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha1(blob).hexdigest()[:10]
