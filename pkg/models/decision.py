from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from models.base_model import BaseModel
from models.program import Program

DEFAULT_REFUSAL_MESSAGE = "Sorry, I cannot solve this requirement."


class Verdict(str, Enum):
    SHOW = "show"
    REFUSE = "refuse"


@dataclass(frozen=True)
class GateDecision(BaseModel):
    """Decisión de mostrar o rechazar: Show si confidence > threshold"""

    requirement_id: str
    verdict: Verdict
    confidence: float
    threshold: float
    programs: Tuple[Program, ...] = ()
    message: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        shown = self.verdict is Verdict.SHOW
        return {
            "requirement_id": self.requirement_id,
            "verdict": self.verdict.value,
            "confidence": self.confidence,
            "threshold": self.threshold,
            "programs": [p.source for p in self.programs] if shown else None,
            "message": None if shown else self.message,
        }
