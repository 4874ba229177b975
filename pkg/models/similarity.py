import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from models.base_model import BaseModel
from models.errors import InvalidWeights, MalformedLine

MODALITIES: Tuple[str, ...] = ("text", "syntax", "dataflow", "embedding")
WEIGHT_NAMES: Tuple[str, ...] = ("alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class SimilarityWeights(BaseModel):
    """Pesos (alpha, beta, gamma, delta) de la similitud híbrida; suman 1"""

    alpha: float = 0.25
    beta: float = 0.25
    gamma: float = 0.25
    delta: float = 0.25

    def __post_init__(self):
        values = self.as_tuple()
        for name, value in zip(WEIGHT_NAMES, values):
            if not (0.0 <= value <= 1.0) or math.isnan(value):
                raise InvalidWeights(f"{name}={value} outside [0, 1]")
        if abs(sum(values) - 1.0) > 1e-9:
            raise InvalidWeights(f"weights must sum to 1, got {sum(values)!r}")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "SimilarityWeights":
        return cls(*[float(v) for v in values])

    @classmethod
    def from_dict(cls, data: Dict[str, float]) -> "SimilarityWeights":
        try:
            return cls(*[float(data[name]) for name in WEIGHT_NAMES])
        except KeyError as e:
            raise InvalidWeights(f"missing weight {e.args[0]!r}") from None


DEFAULT_WEIGHTS = SimilarityWeights()


@dataclass(frozen=True)
class SimilarityBreakdown(BaseModel):
    """Similitudes por modalidad para el par ordenado (i, j)"""

    i: int
    j: int
    text: float
    syntax: float
    dataflow: float
    embedding: float
    hybrid: float

    def components(self) -> Tuple[float, float, float, float]:
        return (self.text, self.syntax, self.dataflow, self.embedding)


@dataclass(frozen=True)
class ConfidenceReport(BaseModel):
    """Matriz de similitudes por par ordenado y confianza agregada"""

    requirement_id: str
    n: int
    pair_sims: List[List[Optional[SimilarityBreakdown]]]
    confidence: float

    def ordered_pairs(self) -> List[SimilarityBreakdown]:
        """Pares (i, j), i != j, en orden de fila"""
        return [
            self.pair_sims[i][j]
            for i in range(self.n)
            for j in range(self.n)
            if i != j
        ]

    def recompute(self) -> float:
        sims = [pair.hybrid for pair in self.ordered_pairs()]
        return sum(sims) / len(sims)

    def modality_means(self) -> Tuple[float, float, float, float]:
        pairs = self.ordered_pairs()
        return tuple(
            sum(p.components()[k] for p in pairs) / len(pairs)
            for k in range(len(MODALITIES))
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConfidenceReport":
        """Reconstruir un reporte leído de JSON"""
        try:
            matrix = [
                [SimilarityBreakdown(**cell) if cell is not None else None for cell in row]
                for row in data["pair_sims"]
            ]
            return cls(str(data["requirement_id"]), int(data["n"]), matrix, float(data["confidence"]))
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedLine(f"invalid confidence report: {e}") from None


@dataclass(frozen=True)
class TuningResult(BaseModel):
    weights: SimilarityWeights
    train_auroc: float
    grid_points_evaluated: int

    def to_weights_document(self) -> Dict[str, float]:
        """Documento JSON persistido: {alpha, beta, gamma, delta, train_auroc}"""
        document = dict(zip(WEIGHT_NAMES, self.weights.as_tuple()))
        document["train_auroc"] = self.train_auroc
        return document
