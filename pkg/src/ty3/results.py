"""Per-instance verification outcomes."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped-out-of-window"


@dataclass
class VerificationResult:
    suite: str
    instance: str
    status: str
    residual_terms: int = 0
    ms: float = 0.0
    key: Dict[str, Any] = field(default_factory=dict)
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> Dict[str, Any]:
        d = asdict(self)
        d["id"] = d.pop("instance")
        d["ms"] = round(self.ms, 3)
        if d["detail"] is None:
            del d["detail"]
        return d
