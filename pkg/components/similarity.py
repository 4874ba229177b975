import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Sequence

from components.embeddings import cosine
from models.analysis import DataflowGraph, EmbeddingVector, SubtreeBag
from models.errors import ComponentOutOfRange
from models.program import TokenSequence
from models.similarity import MODALITIES, SimilarityWeights

MAX_ORDER = 4


@dataclass(frozen=True)
class NGramProfile:
    """Multiconjuntos de n-gramas para n = 1..4"""

    counts: Dict[int, Counter] = field(default_factory=dict)
    length: int = 0

    @classmethod
    def from_tokens(cls, tokens: Sequence[str], max_order: int = MAX_ORDER) -> "NGramProfile":
        tokens = tuple(tokens)
        counts = {
            n: Counter(tokens[k:k + n] for k in range(len(tokens) - n + 1))
            for n in range(1, max_order + 1)
        }
        return cls(counts, len(tokens))

    def total(self, n: int) -> int:
        return sum(self.counts.get(n, Counter()).values())


def clipped_overlap(a: Counter, b: Counter) -> int:
    """Intersección de multiconjuntos con recorte de conteos"""
    if len(a) > len(b):
        a, b = b, a
    return sum(min(count, b[key]) for key, count in a.items() if key in b)


def sim_text_profiles(profile_i: NGramProfile, profile_j: NGramProfile) -> float:
    log_ratios = []
    for n in range(1, MAX_ORDER + 1):
        denominator = profile_j.total(n)
        if denominator == 0:
            continue
        overlap = clipped_overlap(profile_i.counts[n], profile_j.counts[n])
        if overlap == 0:
            return 0.0
        log_ratios.append(math.log(overlap / denominator))
    if not log_ratios:
        # c_j sin tokens
        return 1.0 if profile_i.length == 0 else 0.0
    return math.exp(sum(log_ratios) / len(log_ratios))


def sim_text(seq_i: TokenSequence, seq_j: TokenSequence) -> float:
    """
    Similitud de n-gramas (n = 1..4) de c_i respecto de c_j

    Media geométrica de las razones de solapamiento recortado sobre la cantidad
    de n-gramas de c_j; los órdenes sin n-gramas en c_j se excluyen.
    """
    return sim_text_profiles(NGramProfile.from_tokens(seq_i.tokens), NGramProfile.from_tokens(seq_j.tokens))


def _bag_ratio(items_i: Counter, items_j: Counter) -> float:
    total_j = sum(items_j.values())
    if total_j == 0:
        return 1.0 if sum(items_i.values()) == 0 else 0.0
    return clipped_overlap(items_i, items_j) / total_j


def sim_syntax(bag_i: SubtreeBag, bag_j: SubtreeBag) -> float:
    """Proporción de sub-árboles de c_j presentes en c_i"""
    return _bag_ratio(bag_i.entries, bag_j.entries)


def sim_dataflow(dfg_i: DataflowGraph, dfg_j: DataflowGraph) -> float:
    """Proporción de aristas de flujo de datos de c_j presentes en c_i"""
    return _bag_ratio(dfg_i.edges, dfg_j.edges)


def sim_embed(e_i: EmbeddingVector, e_j: EmbeddingVector) -> float:
    return cosine(e_i, e_j)


def sim_hybrid(components: Sequence[float], weights: SimilarityWeights) -> float:
    """
    Suma ponderada de las similitudes de texto, sintaxis, flujo de datos y embedding

    Args:
        components: (text, syntax, dataflow, embedding), cada una en [0, 1]
        weights: Pesos (alpha, beta, gamma, delta)

    Returns:
        Similitud híbrida en [0, 1]
    """
    if len(components) != len(MODALITIES):
        raise ComponentOutOfRange(f"expected {len(MODALITIES)} components, got {len(components)}")
    for name, value in zip(MODALITIES, components):
        if not 0.0 <= value <= 1.0:
            raise ComponentOutOfRange(f"{name} similarity {value!r} outside [0, 1]")
    value = sum(w * c for w, c in zip(weights.as_tuple(), components))
    return min(1.0, max(0.0, value))

