"""
Unión de benchmark y archivos de muestras, y puntajes por método para los
comandos de evaluación, ajuste y ablación.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from components import baselines
from components.confidence import ConfidenceEstimator, ProviderLike, resolve_provider
from components.estimator_variants import variant_confidences
from components.llm_client import LLMClient
from components.static_analysis import DEFAULT_SUBTREE_HEIGHT
from models.benchmark import BenchmarkSample, Label
from models.errors import InvalidConfig, JoinError
from models.evaluation import ScoredSample
from models.program import SampleSet
from models.sample_archive import SampleArchiveEntry, entries_for_model
from models.similarity import DEFAULT_WEIGHTS, MODALITIES, SimilarityWeights
from utils.calculators import aucpr, auroc, build_curves

logger = logging.getLogger(__name__)

HONEST = "honest"
METHODS = ("honest", "avg-prob", "product-prob", "self-ask-code", "self-ask-req", "knn-bm25", "knn-embed")
ALL_METHODS = METHODS + baselines.UNIMPLEMENTED_BASELINES
ONLINE_METHODS = ("self-ask-code", "self-ask-req")


@dataclass(frozen=True)
class JoinedSample:
    """Muestra del benchmark con los programas archivados de un modelo"""

    benchmark: BenchmarkSample
    entry: SampleArchiveEntry
    model: str

    @property
    def id(self) -> str:
        return self.benchmark.id

    @property
    def label(self) -> Label:
        return self.benchmark.label_for(self.model)

    def sample_set(self, limit: Optional[int] = None) -> SampleSet:
        samples = self.entry.to_sample_set(self.benchmark.language, self.benchmark.requirement)
        return samples if limit is None else samples.truncated(limit)

    def scored(self, score: float, limit: Optional[int] = None) -> ScoredSample:
        samples = self.sample_set(limit)
        correct = samples.correct_count
        total = len(samples.programs) if correct is not None else None
        return ScoredSample(self.id, score, self.label, correct, total)


def resolve_model(entries: Sequence[SampleArchiveEntry], model: Optional[str]) -> str:
    """Modelo a evaluar: el indicado o el único presente en el archivo"""
    if model:
        return model
    models = sorted({entry.model for entry in entries})
    if len(models) != 1:
        raise InvalidConfig(f"archive holds {len(models)} model(s) {models}; pass --model")
    return models[0]


def join_samples(
    benchmark: Sequence[BenchmarkSample],
    entries: Sequence[SampleArchiveEntry],
    model: Optional[str] = None,
) -> List[JoinedSample]:
    """
    Unir benchmark y archivo por id para un modelo

    Args:
        benchmark: Muestras etiquetadas
        entries: Entradas del archivo de muestras
        model: Modelo (opcional si el archivo tiene uno solo)

    Returns:
        Muestras unidas en el orden del benchmark

    Raises:
        JoinError: Hay entradas del archivo cuyo id no existe en el benchmark
    """
    model = resolve_model(entries, model)
    indexed = entries_for_model(entries, model)
    known = {sample.id for sample in benchmark}
    orphans = sorted(set(indexed) - known)
    if orphans:
        raise JoinError(f"{len(orphans)} archive id(s) not in the benchmark, e.g. {orphans[0]!r}")

    joined: List[JoinedSample] = []
    for sample in benchmark:
        if sample.id not in indexed:
            logger.warning("benchmark sample %s has no archived programs for %s; skipping", sample.id, model)
            continue
        if model not in sample.labels:
            logger.warning("benchmark sample %s has no label for %s; skipping", sample.id, model)
            continue
        joined.append(JoinedSample(sample, indexed[sample.id], model))
    return joined


def labeled_training(benchmark: Sequence[BenchmarkSample], model: str) -> Tuple[List[str], List[Label]]:
    """Requerimientos y etiquetas de entrenamiento para K-NNS"""
    rows = [(s.requirement, s.labels[model]) for s in benchmark if model in s.labels]
    return [r for r, _ in rows], [label for _, label in rows]


class MethodScorer:
    """
    Calcula el puntaje de confianza de cada muestra con un método

    Args:
        weights: Pesos de la similitud híbrida
        provider: Proveedor de embeddings (configuración o instancia)
        workers: Hilos del estimador
        client: Cliente LLM para los métodos de auto-pregunta
        k: K fijo para K-NNS; si es None se ajusta sobre entrenamiento
        k_grid: Valores de k a probar
        subtree_height: Altura de las huellas de sub-árboles
    """

    def __init__(
        self,
        weights: SimilarityWeights = DEFAULT_WEIGHTS,
        provider: Optional[ProviderLike] = None,
        workers: Optional[int] = None,
        client: Optional[LLMClient] = None,
        k: Optional[int] = None,
        k_grid: Sequence[int] = baselines.DEFAULT_K_GRID,
        subtree_height: int = DEFAULT_SUBTREE_HEIGHT,
    ):
        self.weights = weights
        self.provider = resolve_provider(provider)
        self.workers = workers
        self.client = client
        self.k = k
        self.k_grid = tuple(k_grid)
        self.subtree_height = subtree_height

    def _client(self) -> LLMClient:
        if self.client is None:
            raise InvalidConfig("self-ask methods need an endpoint and a model")
        return self.client

    def _knn_index(self, method: str, documents: List[str], labels: List[Label]):
        if method == "knn-bm25":
            return baselines.Bm25Index(documents, labels)
        return baselines.EmbeddingIndex(documents, labels, self.provider)

    def score(
        self,
        method: str,
        joined: Sequence[JoinedSample],
        train: Sequence[BenchmarkSample] = (),
    ) -> Tuple[List[ScoredSample], Dict[str, Any]]:
        """
        Puntuar las muestras unidas con el método indicado

        Returns:
            (muestras puntuadas, datos extra del método como el k elegido)
        """
        if method in baselines.UNIMPLEMENTED_BASELINES:
            baselines.unimplemented_baseline(method)
        if method not in METHODS:
            raise InvalidConfig(f"unknown method {method!r}; choose from {', '.join(ALL_METHODS)}")
        extras: Dict[str, Any] = {}

        if method == HONEST:
            estimator = ConfidenceEstimator(self.weights, self.provider, self.workers, self.subtree_height)
            scores = [estimator.estimate(j.sample_set()).confidence for j in joined]
        elif method == "avg-prob":
            scores = [baselines.avg_prob(j.entry.programs) for j in joined]
        elif method == "product-prob":
            scores = [baselines.product_prob(j.entry.programs) for j in joined]
        elif method == "self-ask-code":
            client = self._client()
            scores = [
                baselines.self_ask_code(j.sample_set().programs, j.benchmark.requirement, client.config, client)
                for j in joined
            ]
        elif method == "self-ask-req":
            client = self._client()
            scores = [
                baselines.self_ask_requirement(j.benchmark.requirement, j.benchmark.language, client.config, client)
                for j in joined
            ]
        else:
            model = joined[0].model if joined else None
            documents, labels = labeled_training(train, model) if model else ([], [])
            index = self._knn_index(method, documents, labels)
            k = self.k
            if k is None:
                k, train_auroc = baselines.tune_k(index, self.k_grid)
                extras["knn_train_auroc"] = train_auroc
            extras["k"] = k
            config = baselines.KnnConfig(k, "bm25" if method == "knn-bm25" else "embedding")
            scores = [baselines.knn_confidence(j.benchmark.requirement, index, config) for j in joined]

        return [j.scored(score) for j, score in zip(joined, scores)], extras

    def modality_means(self, joined: Sequence[JoinedSample], limit: Optional[int] = None) -> np.ndarray:
        """Arreglo (m, 4) con el AvgSim de cada modalidad por muestra"""
        estimator = ConfidenceEstimator(self.weights, self.provider, self.workers, self.subtree_height)
        return np.asarray(
            [estimator.modality_means(j.sample_set(limit)) for j in joined],
            dtype=np.float64,
        ).reshape(len(joined), len(MODALITIES))

    def score_variants(
        self,
        variants: Sequence[str],
        joined: Sequence[JoinedSample],
        limit: Optional[int] = None,
    ) -> Dict[str, List[ScoredSample]]:
        """Puntajes por variante de estimador, analizando cada programa una vez"""
        results: Dict[str, List[ScoredSample]] = {variant: [] for variant in variants}
        for j in joined:
            confidences = variant_confidences(
                j.sample_set(limit), variants, self.weights, self.provider, self.workers, self.subtree_height
            )
            for variant in variants:
                results[variant].append(j.scored(confidences[variant], limit))
        return results


def summarize(
    scored: Sequence[ScoredSample],
    pr_mode: str = "average-precision",
    sweep_points: int = 100,
    with_curves: bool = False,
) -> Dict[str, Any]:
    """Métricas de un método: AUROC, AUCPR y opcionalmente curvas"""
    summary: Dict[str, Any] = {
        "samples": len(scored),
        "passed": sum(1 for s in scored if s.positive),
        "auroc": auroc(scored),
        "aucpr": aucpr(scored, pr_mode),
        "pr_mode": pr_mode,
    }
    if with_curves:
        summary["curves"] = build_curves(scored, sweep_points)
    return summary


def motivation_table(means: np.ndarray, labels: Sequence[Label], weights: SimilarityWeights) -> Dict[str, Dict[str, float]]:
    """
    AvgSim promedio de requerimientos passed frente a failed, por modalidad y para la híbrida
    """
    positives = np.asarray([Label(label) is Label.PASSED for label in labels], dtype=bool)
    if not positives.any() or positives.all():
        raise InvalidConfig("motivating statistic needs both passed and failed requirements")
    hybrid = means @ np.asarray(weights.as_tuple())
    columns = {name: means[:, k] for k, name in enumerate(MODALITIES)}
    columns["hybrid"] = hybrid
    return {
        name: {
            "passed": float(values[positives].mean()),
            "failed": float(values[~positives].mean()),
        }
        for name, values in columns.items()
    }
