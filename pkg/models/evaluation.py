from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from models.base_model import BaseModel
from models.benchmark import Label
from models.errors import InvalidConfig


@dataclass(frozen=True)
class ScoredSample(BaseModel):
    """Puntaje de un estimador para un requerimiento, con su etiqueta"""

    id: str
    score: float
    label: Label
    programs_correct: Optional[int] = None
    programs_total: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "label", Label(self.label))
        if (
            self.programs_correct is not None
            and self.programs_total is not None
            and not 0 <= self.programs_correct <= self.programs_total
        ):
            raise InvalidConfig(
                f"{self.id}: programs_correct={self.programs_correct} exceeds programs_total={self.programs_total}"
            )

    @property
    def positive(self) -> bool:
        return self.label is Label.PASSED


@dataclass(frozen=True)
class SweepPoint(BaseModel):
    threshold: float
    shown_correct: int
    shown_erroneous: int


@dataclass(frozen=True)
class ConfusionResult(BaseModel):
    """Matriz de confusión y tasas; NaN marca cocientes 0/0"""

    tp: int
    fp: int
    tn: int
    fn: int
    tpr: float
    fpr: float
    precision: float
    recall: float


@dataclass(frozen=True)
class EvalCurves(BaseModel):
    roc: List[Tuple[float, float]] = field(default_factory=list)
    pr: List[Tuple[float, float]] = field(default_factory=list)
    sweep: List[SweepPoint] = field(default_factory=list)
    # Totales al mostrar todo sin filtrar (punto estrella)
    indiscriminate: Optional[Tuple[int, int]] = None
