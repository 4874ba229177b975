"""
Estimadores de referencia: probabilidades de tokens, auto-pregunta al LLM y
K vecinos más cercanos sobre requerimientos de entrenamiento (BM25 o embeddings).
"""

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from components.embeddings import EmbeddingProvider, cosine
from components.llm_client import LLMClient
from config.prompts import SELF_ASK_CODE_PROMPT, SELF_ASK_REQUIREMENT_PROMPT, render
from models.benchmark import Label
from models.errors import (
    DegenerateLabels,
    EmptyCorpus,
    EmptyInput,
    InvalidConfig,
    MissingLogprobs,
    UnimplementedBaseline,
    UnknownDocument,
)
from models.generation import SamplingConfig
from models.program import Language, Program
from utils.calculators import auroc_from_arrays

logger = logging.getLogger(__name__)

DEFAULT_K_GRID: Tuple[int, ...] = (1, 3, 5, 10, 20)
UNIMPLEMENTED_BASELINES = ("code-classifier", "requirement-classifier")
_TERM = re.compile(r"\w+")


# ---------------------------------------------------------------------------
# Probabilidades de tokens
# ---------------------------------------------------------------------------

def _token_probs(records: Sequence) -> List[Sequence[float]]:
    if not records:
        raise EmptyInput("probability baselines need at least one generation record")
    probs = []
    for index, record in enumerate(records):
        values = getattr(record, "token_probs", None)
        if not values:
            raise MissingLogprobs(f"record {index} has no token probabilities")
        probs.append(values)
    return probs


def avg_prob(records: Sequence) -> float:
    """Media de todas las probabilidades de tokens, agrupadas entre registros"""
    pooled = [p for probs in _token_probs(records) for p in probs]
    return float(np.mean(pooled))


def product_prob(records: Sequence) -> float:
    """
    Producto de probabilidades por programa, luego media entre programas

    El producto se acumula en espacio logarítmico.
    """
    products = [math.exp(math.fsum(math.log(p) for p in probs)) for probs in _token_probs(records)]
    return float(np.mean(products))


# ---------------------------------------------------------------------------
# Auto-pregunta
# ---------------------------------------------------------------------------

def self_ask_code(
    programs: Sequence[Program],
    requirement: str,
    config: SamplingConfig,
    client: Optional[LLMClient] = None,
) -> float:
    """Media de P(Yes) al preguntar si cada programa es correcto"""
    if not programs:
        raise EmptyInput("self-ask (code) needs at least one program")
    client = client or LLMClient(config)
    answers = [
        client.ask_yes_no(
            render(SELF_ASK_CODE_PROMPT, program.language.value, requirement=requirement, code=program.source)
        )
        for program in programs
    ]
    return float(np.mean(answers))


def self_ask_requirement(
    requirement: str,
    language: Language,
    config: SamplingConfig,
    client: Optional[LLMClient] = None,
) -> float:
    """P(Yes) al preguntar si el LLM puede resolver el requerimiento"""
    client = client or LLMClient(config)
    language = Language.parse(language)
    return client.ask_yes_no(render(SELF_ASK_REQUIREMENT_PROMPT, language.value, requirement=requirement))


# ---------------------------------------------------------------------------
# K vecinos más cercanos
# ---------------------------------------------------------------------------

class KnnMetric(str, Enum):
    BM25 = "bm25"
    EMBEDDING = "embedding"


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5
    metric: KnnMetric = KnnMetric.BM25

    def __post_init__(self):
        object.__setattr__(self, "metric", KnnMetric(self.metric))
        if self.k < 1:
            raise InvalidConfig(f"k must be >= 1, got {self.k}")


def _as_passed(label) -> bool:
    if isinstance(label, bool):
        return label
    return Label(label) is Label.PASSED


def tokenize_requirement(text: str) -> List[str]:
    return _TERM.findall(text.lower())


class _RequirementCorpus:
    """Requerimientos de entrenamiento con su etiqueta passed/failed"""

    def __init__(self, labels: Iterable):
        self.labels: List[bool] = [_as_passed(label) for label in labels]

    def __len__(self) -> int:
        return len(self.labels)

    def similarities(self, requirement: str) -> List[float]:
        raise NotImplementedError

    def rank(self, requirement: str, exclude: Optional[int] = None) -> List[int]:
        """Índices ordenados por similitud descendente; empates por orden de inserción"""
        scores = self.similarities(requirement)
        candidates = [d for d in range(len(scores)) if d != exclude]
        return sorted(candidates, key=lambda d: (-scores[d], d))

    def text(self, doc_id: int) -> str:
        raise NotImplementedError


class Bm25Index(_RequirementCorpus):
    """
    Índice Okapi BM25 sobre requerimientos tokenizados

    Args:
        documents: Textos de los requerimientos
        labels: Etiqueta de cada requerimiento
        k1: Saturación de frecuencia de término
        b: Normalización por longitud
    """

    def __init__(self, documents: Sequence[str], labels: Sequence, k1: float = 1.2, b: float = 0.75):
        if len(documents) != len(labels):
            raise InvalidConfig(f"{len(documents)} documents but {len(labels)} labels")
        super().__init__(labels)
        self.k1 = k1
        self.b = b
        self.documents = list(documents)
        self.doc_tokens = [tokenize_requirement(d) for d in self.documents]
        self.term_freqs = [Counter(tokens) for tokens in self.doc_tokens]
        self.doc_len = [len(tokens) for tokens in self.doc_tokens]
        self.avgdl = sum(self.doc_len) / len(self.doc_len) if self.doc_len else 0.0
        self.df = self._document_frequencies()

    def _document_frequencies(self) -> Counter:
        df: Counter = Counter()
        for tf in self.term_freqs:
            df.update(tf.keys())
        return df

    def is_consistent(self) -> bool:
        return self._document_frequencies() == self.df

    def idf(self, term: str) -> float:
        n_docs = len(self.documents)
        df = self.df.get(term, 0)
        return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))

    def score(self, query_tokens: Sequence[str], doc_id: int) -> float:
        if not 0 <= doc_id < len(self.documents):
            raise UnknownDocument(f"document {doc_id} not in index of {len(self.documents)}")
        tf = self.term_freqs[doc_id]
        length_ratio = self.doc_len[doc_id] / self.avgdl if self.avgdl else 1.0
        norm = self.k1 * (1.0 - self.b + self.b * length_ratio)
        total = 0.0
        for term in query_tokens:
            f = tf.get(term, 0)
            if f:
                total += self.idf(term) * (f * (self.k1 + 1.0)) / (f + norm)
        return total

    def similarities(self, requirement: str) -> List[float]:
        query = tokenize_requirement(requirement)
        return [self.score(query, d) for d in range(len(self.documents))]

    def text(self, doc_id: int) -> str:
        return self.documents[doc_id]


def bm25_score(query_tokens: Sequence[str], index: Bm25Index, doc_id: int) -> float:
    return index.score(query_tokens, doc_id)


class EmbeddingIndex(_RequirementCorpus):
    """Requerimientos embebidos; similitud coseno con la consulta"""

    def __init__(self, documents: Sequence[str], labels: Sequence, provider: EmbeddingProvider):
        if len(documents) != len(labels):
            raise InvalidConfig(f"{len(documents)} documents but {len(labels)} labels")
        super().__init__(labels)
        self.provider = provider
        self.documents = list(documents)
        self.vectors = [provider.embed_text(d) for d in self.documents]

    def similarities(self, requirement: str) -> List[float]:
        query = self.provider.embed_text(requirement)
        return [cosine(query, vector) for vector in self.vectors]

    def text(self, doc_id: int) -> str:
        return self.documents[doc_id]


def knn_confidence(
    requirement: str,
    index: _RequirementCorpus,
    config: KnnConfig,
    exclude: Optional[int] = None,
) -> float:
    """
    Proporción de requerimientos passed entre los k más similares

    Args:
        requirement: Requerimiento consultado
        index: Bm25Index o EmbeddingIndex de entrenamiento
        config: k (se recorta al tamaño del corpus) y métrica
        exclude: Documento omitido (validación leave-one-out)
    """
    if len(index) == 0:
        raise EmptyCorpus("k-NN needs a non-empty training corpus")
    ranked = index.rank(requirement, exclude)
    if not ranked:
        raise EmptyCorpus("k-NN corpus is empty after excluding the query")
    k = min(config.k, len(ranked))
    return sum(1 for d in ranked[:k] if index.labels[d]) / k


def tune_k(index: _RequirementCorpus, k_grid: Sequence[int] = DEFAULT_K_GRID) -> Tuple[int, float]:
    """
    Elegir k por AUROC leave-one-out sobre el corpus de entrenamiento

    Returns:
        (k, AUROC); empates se resuelven por el k menor
    """
    if len(index) < 2:
        raise EmptyCorpus("k tuning needs at least 2 training requirements")
    positives = np.asarray(index.labels, dtype=bool)
    if positives.all() or not positives.any():
        raise DegenerateLabels("k tuning needs both passed and failed training labels")

    grid = sorted(set(k_grid))
    scores = np.zeros((len(index), len(grid)))
    for d in range(len(index)):
        ranked = index.rank(index.text(d), exclude=d)
        for column, k in enumerate(grid):
            top = ranked[:min(k, len(ranked))]
            scores[d, column] = sum(1 for r in top if index.labels[r]) / len(top)
    aurocs = auroc_from_arrays(scores, positives)
    best = int(np.argmax(aurocs))
    logger.info("k-NN tuning over k=%s: best k=%d (AUROC %.4f)", grid, grid[best], aurocs[best])
    return grid[best], float(aurocs[best])


def unimplemented_baseline(name: str):
    """Los clasificadores neuronales no forman parte de esta herramienta"""
    raise UnimplementedBaseline(f"unimplemented baseline: {name}")
