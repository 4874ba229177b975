"""
Estimador de confianza: similitud promedio entre todos los pares ordenados de
programas muestreados, y ajuste de pesos (alpha, beta, gamma, delta) por grilla.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from components.embeddings import EmbeddingProvider, get_provider
from components.similarity import NGramProfile, sim_dataflow, sim_embed, sim_hybrid, sim_syntax, sim_text_profiles
from components.static_analysis import DEFAULT_SUBTREE_HEIGHT, dataflow_from_tree, extract_subtrees, parse_cst
from components.tokenizer import tokens_from_tree
from models.analysis import DataflowGraph, EmbeddingProviderConfig, EmbeddingVector, SubtreeBag
from models.base_model import PathLike, read_json, write_json
from models.benchmark import Label
from models.errors import DegenerateLabels, InvalidConfig, InvalidWeights, TooFewSamples
from models.program import Program, SampleSet, TokenSequence
from models.similarity import (
    DEFAULT_WEIGHTS,
    MODALITIES,
    ConfidenceReport,
    SimilarityBreakdown,
    SimilarityWeights,
    TuningResult,
)
from utils.calculators import auroc_from_arrays

logger = logging.getLogger(__name__)

DEFAULT_GRID_STEP = 0.05
TIE_TOLERANCE = 1e-12

ProviderLike = Union[EmbeddingProvider, EmbeddingProviderConfig]


@dataclass(frozen=True)
class ProgramFeatures:
    """Análisis de un programa, calculado una vez y reutilizado en todos sus pares"""

    tokens: TokenSequence
    profile: NGramProfile
    subtrees: SubtreeBag
    dataflow: DataflowGraph
    embedding: EmbeddingVector


def resolve_provider(provider: Optional[ProviderLike]) -> EmbeddingProvider:
    if provider is None:
        return get_provider(EmbeddingProviderConfig())
    if isinstance(provider, EmbeddingProviderConfig):
        return get_provider(provider)
    return provider


def _default_workers() -> int:
    return os.cpu_count() or 1


def average_similarity(n: int, sim: Callable[[int, int], float]) -> float:
    """
    Confianza como promedio de sim(i, j) sobre los N(N-1) pares ordenados

    Args:
        n: Cantidad de programas (>= 2)
        sim: Similitud del par ordenado (i, j)

    Returns:
        SUM(sim_list) / LEN(sim_list)
    """
    if n < 2:
        raise TooFewSamples(f"average similarity needs at least 2 programs, got {n}")
    sim_list = [sim(i, j) for i in range(n) for j in range(n) if i != j]
    return sum(sim_list) / len(sim_list)


class ConfidenceEstimator:
    """
    Estimador de confianza multimodal

    Cada programa se tokeniza, parsea, analiza y embebe una sola vez; luego se
    comparan todos los pares ordenados con la similitud híbrida.
    """

    def __init__(
        self,
        weights: SimilarityWeights = DEFAULT_WEIGHTS,
        provider: Optional[ProviderLike] = None,
        workers: Optional[int] = None,
        subtree_height: int = DEFAULT_SUBTREE_HEIGHT,
    ):
        if workers is not None and workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {workers}")
        self.weights = weights
        self.provider = resolve_provider(provider)
        self.workers = workers or _default_workers()
        self.subtree_height = subtree_height

    def _map(self, fn, items: Sequence) -> List:
        # executor.map conserva el orden de entrada
        if self.workers == 1 or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(fn, items))

    def analyze(self, program: Program) -> ProgramFeatures:
        tree = parse_cst(program)
        tokens = tokens_from_tree(tree.tree, program.language) if program.source.strip() else TokenSequence(())
        return ProgramFeatures(
            tokens=tokens,
            profile=NGramProfile.from_tokens(tokens.tokens),
            subtrees=extract_subtrees(tree, self.subtree_height),
            dataflow=dataflow_from_tree(tree),
            embedding=self.provider.embed_tokens(program, tokens),
        )

    def analyze_all(self, programs: Sequence[Program]) -> List[ProgramFeatures]:
        return self._map(self.analyze, list(programs))

    def components(self, fi: ProgramFeatures, fj: ProgramFeatures) -> Tuple[float, float, float, float]:
        """(text, syntax, dataflow, embedding) del par ordenado"""
        return (
            sim_text_profiles(fi.profile, fj.profile),
            sim_syntax(fi.subtrees, fj.subtrees),
            sim_dataflow(fi.dataflow, fj.dataflow),
            sim_embed(fi.embedding, fj.embedding),
        )

    def compare(self, i: int, j: int, fi: ProgramFeatures, fj: ProgramFeatures) -> SimilarityBreakdown:
        text, syntax, dataflow, embedding = self.components(fi, fj)
        return SimilarityBreakdown(
            i=i,
            j=j,
            text=text,
            syntax=syntax,
            dataflow=dataflow,
            embedding=embedding,
            hybrid=sim_hybrid((text, syntax, dataflow, embedding), self.weights),
        )

    def pair_matrix(self, features: Sequence[ProgramFeatures]) -> List[List[Optional[SimilarityBreakdown]]]:
        n = len(features)
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        breakdowns = self._map(lambda ij: self.compare(ij[0], ij[1], features[ij[0]], features[ij[1]]), pairs)
        matrix: List[List[Optional[SimilarityBreakdown]]] = [[None] * n for _ in range(n)]
        for (i, j), breakdown in zip(pairs, breakdowns):
            matrix[i][j] = breakdown
        return matrix

    def estimate(self, samples: SampleSet) -> ConfidenceReport:
        """
        Estimar la confianza del LLM para un requerimiento

        Args:
            samples: N >= 2 programas de un mismo lenguaje

        Returns:
            ConfidenceReport con la matriz de pares y la confianza promedio
        """
        samples.validate_for_estimation()
        return self.report_from_features(samples.requirement_id, self.analyze_all(samples.programs))

    def report_from_features(self, requirement_id: str, features: Sequence[ProgramFeatures]) -> ConfidenceReport:
        n = len(features)
        matrix = self.pair_matrix(features)
        confidence = average_similarity(n, lambda i, j: matrix[i][j].hybrid)
        return ConfidenceReport(requirement_id, n, matrix, confidence)

    def modality_means(self, samples: SampleSet) -> Tuple[float, float, float, float]:
        """Promedio por modalidad sobre los pares ordenados (AvgSim de cada modalidad)"""
        return self.estimate(samples).modality_means()


def estimate_confidence(
    samples: SampleSet,
    weights: SimilarityWeights = DEFAULT_WEIGHTS,
    provider: Optional[ProviderLike] = None,
    workers: Optional[int] = None,
) -> ConfidenceReport:
    return ConfidenceEstimator(weights, provider, workers).estimate(samples)


# ---------------------------------------------------------------------------
# Ajuste de pesos
# ---------------------------------------------------------------------------

def weight_grid(step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    """
    Puntos del símplex de pesos con paso `step`, en orden lexicográfico ascendente

    Returns:
        Arreglo (G, 4); con paso 0.05 hay 1771 puntos
    """
    units = int(round(1.0 / step))
    if units < 1 or abs(units * step - 1.0) > 1e-9:
        raise InvalidConfig(f"grid step must divide 1 evenly, got {step}")
    points = [
        (a, b, c, units - a - b - c)
        for a in range(units + 1)
        for b in range(units + 1 - a)
        for c in range(units + 1 - a - b)
    ]
    return np.asarray(points, dtype=np.float64) / units


def _as_positive(label) -> bool:
    if isinstance(label, bool):
        return label
    return Label(label) is Label.PASSED


def tune_weights_from_modalities(
    means: np.ndarray,
    labels: Sequence,
    step: float = DEFAULT_GRID_STEP,
) -> TuningResult:
    """
    Búsqueda exhaustiva de pesos sobre modalidades ya calculadas

    La confianza híbrida es lineal en los pesos, por lo que cada punto de la
    grilla se obtiene como producto de los promedios por modalidad.

    Args:
        means: Arreglo (m, 4) de AvgSim por modalidad de cada conjunto de entrenamiento
        labels: Etiquetas passed/failed (Label, str o bool) de cada conjunto
        step: Paso de la grilla

    Returns:
        TuningResult del mejor punto; entre empates se prefiere el de mayor peso
        máximo y, si persiste el empate, el primero en orden lexicográfico
    """
    means = np.asarray(means, dtype=np.float64)
    if means.ndim != 2 or means.shape[1] != len(MODALITIES):
        raise InvalidConfig(f"modality means must have shape (m, {len(MODALITIES)}), got {means.shape}")
    positives = np.asarray([_as_positive(label) for label in labels], dtype=bool)
    if positives.size != means.shape[0]:
        raise InvalidConfig(f"{means.shape[0]} sample sets but {positives.size} labels")
    if positives.all() or not positives.any():
        raise DegenerateLabels("weight tuning needs both passed and failed training labels")

    grid = weight_grid(step)
    scores = auroc_from_arrays(means @ grid.T, positives)
    tied = np.flatnonzero(scores >= scores.max() - TIE_TOLERANCE)
    best = int(tied[np.argmax(grid[tied].max(axis=1))])
    logger.info(
        "weight grid: %d points over %d training sets, best AUROC %.4f at %s",
        len(grid), means.shape[0], scores[best], tuple(grid[best]),
    )
    return TuningResult(
        weights=SimilarityWeights.from_sequence(grid[best]),
        train_auroc=float(scores[best]),
        grid_points_evaluated=len(grid),
    )


def tune_weights(
    train: Sequence[Tuple[SampleSet, object]],
    provider: Optional[ProviderLike] = None,
    workers: Optional[int] = None,
    step: float = DEFAULT_GRID_STEP,
) -> TuningResult:
    """
    Ajustar (alpha, beta, gamma, delta) maximizando el AUROC de entrenamiento

    Las similitudes por modalidad se calculan una sola vez por conjunto y se
    recombinan en cada punto de la grilla.
    """
    labels = [label for _, label in train]
    positives = {_as_positive(label) for label in labels}
    if len(positives) < 2:
        raise DegenerateLabels("weight tuning needs both passed and failed training labels")
    estimator = ConfidenceEstimator(DEFAULT_WEIGHTS, provider, workers)
    means = np.asarray([estimator.modality_means(samples) for samples, _ in train], dtype=np.float64)
    return tune_weights_from_modalities(means, labels, step)


def save_weights(path: PathLike, result: TuningResult) -> None:
    write_json(path, result.to_weights_document())


def load_weights(path: Optional[PathLike]) -> SimilarityWeights:
    """
    Leer pesos ajustados; sin archivo se usan los pesos uniformes

    Raises:
        InvalidWeights: Documento sin alguno de los cuatro pesos o fuera del símplex
    """
    if path is None:
        return DEFAULT_WEIGHTS
    if not Path(path).exists():
        logger.warning("weights file %s not found; using default weights %s", path, DEFAULT_WEIGHTS.as_tuple())
        return DEFAULT_WEIGHTS
    document = read_json(path)
    if not isinstance(document, dict):
        raise InvalidWeights(f"{path}: weights document must be a JSON object")
    return SimilarityWeights.from_dict(document)
