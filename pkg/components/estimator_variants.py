"""
Variantes del estimador de confianza para comparación y ablación.

Todas usan el mismo promedio sobre pares ordenados; cambia solo la similitud
entre dos programas.
"""

import keyword
from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from nltk import edit_distance
from nltk.translate.bleu_score import SmoothingFunction, sentence_bleu

from components.confidence import ConfidenceEstimator, ProgramFeatures, ProviderLike, average_similarity
from components.similarity import sim_dataflow, sim_embed, sim_syntax
from components.static_analysis import DEFAULT_SUBTREE_HEIGHT
from models.errors import InvalidConfig
from models.program import Language, SampleSet
from models.similarity import DEFAULT_WEIGHTS, MODALITIES, SimilarityWeights

HYBRID = "hybrid"
PAIRWISE_VARIANTS = ("bleu", "codebleu", "edit", "embedding-only")
KEYWORD_WEIGHT = 5.0

KEYWORDS: Dict[Language, frozenset] = {
    Language.PYTHON: frozenset(keyword.kwlist) | frozenset(getattr(keyword, "softkwlist", ())),
    Language.JAVA: frozenset({
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
        "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
        "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
        "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
        "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
        "volatile", "while", "var", "record", "yield", "true", "false", "null",
    }),
}

_smoothing = SmoothingFunction().method4


def available_variants() -> List[str]:
    names = [HYBRID, *PAIRWISE_VARIANTS]
    names += [f"without-{m}" for m in MODALITIES]
    names += [f"single-{m}" for m in MODALITIES]
    return names


def bleu_similarity(hypothesis: Sequence[str], reference: Sequence[str]) -> float:
    """BLEU-4 con penalización por brevedad; c_i como hipótesis y c_j como referencia"""
    if not hypothesis and not reference:
        return 1.0
    if not hypothesis or not reference:
        return 0.0
    try:
        score = sentence_bleu([list(reference)], list(hypothesis), smoothing_function=_smoothing)
    except ZeroDivisionError:
        score = 0.0
    return min(1.0, max(0.0, float(score)))


def weighted_unigram_match(hypothesis: Sequence[str], reference: Sequence[str], keywords: frozenset) -> float:
    """Precisión de unigramas recortada; las palabras clave pesan KEYWORD_WEIGHT"""
    if not hypothesis:
        return 1.0 if not reference else 0.0
    hyp_counts = Counter(hypothesis)
    ref_counts = Counter(reference)
    matches = total = 0.0
    for token, count in hyp_counts.items():
        weight = KEYWORD_WEIGHT if token in keywords else 1.0
        matches += weight * min(count, ref_counts.get(token, 0))
        total += weight * count
    return matches / total


def edit_similarity(tokens_i: Sequence[str], tokens_j: Sequence[str]) -> float:
    """1 - Lev(c_i, c_j) / max(len_i, len_j) a nivel de tokens"""
    longest = max(len(tokens_i), len(tokens_j))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(list(tokens_i), list(tokens_j)) / longest


def without_weights(modality: str, weights: SimilarityWeights = DEFAULT_WEIGHTS) -> SimilarityWeights:
    """Anular una modalidad y renormalizar las restantes para que sumen 1"""
    if modality not in MODALITIES:
        raise InvalidConfig(f"unknown modality {modality!r}")
    values = list(weights.as_tuple())
    values[MODALITIES.index(modality)] = 0.0
    remaining = sum(values)
    if remaining == 0.0:
        return SimilarityWeights.from_sequence([0.0 if m == modality else 1.0 / 3.0 for m in MODALITIES])
    return SimilarityWeights.from_sequence([v / remaining for v in values])


def single_weights(modality: str) -> SimilarityWeights:
    if modality not in MODALITIES:
        raise InvalidConfig(f"unknown modality {modality!r}")
    return SimilarityWeights.from_sequence([1.0 if m == modality else 0.0 for m in MODALITIES])


def _codebleu(language: Language) -> Callable[[ProgramFeatures, ProgramFeatures], float]:
    keywords = KEYWORDS[language]

    def similarity(fi: ProgramFeatures, fj: ProgramFeatures) -> float:
        parts = (
            bleu_similarity(fi.tokens.tokens, fj.tokens.tokens),
            weighted_unigram_match(fi.tokens.tokens, fj.tokens.tokens, keywords),
            sim_syntax(fi.subtrees, fj.subtrees),
            sim_dataflow(fi.dataflow, fj.dataflow),
        )
        return sum(parts) / len(parts)

    return similarity


def _pairwise(variant: str, language: Language) -> Callable[[ProgramFeatures, ProgramFeatures], float]:
    if variant == "bleu":
        return lambda fi, fj: bleu_similarity(fi.tokens.tokens, fj.tokens.tokens)
    if variant == "codebleu":
        return _codebleu(language)
    if variant == "edit":
        return lambda fi, fj: edit_similarity(fi.tokens.tokens, fj.tokens.tokens)
    return lambda fi, fj: sim_embed(fi.embedding, fj.embedding)


def variant_weights(variant: str, weights: SimilarityWeights = DEFAULT_WEIGHTS) -> Optional[SimilarityWeights]:
    """Pesos de las variantes híbridas; None para las variantes de similitud propia"""
    if variant == HYBRID:
        return weights
    if variant.startswith("without-"):
        return without_weights(variant[len("without-"):], weights)
    if variant.startswith("single-"):
        return single_weights(variant[len("single-"):])
    if variant in PAIRWISE_VARIANTS:
        return None
    raise InvalidConfig(f"unknown estimator variant {variant!r}; choose from {', '.join(available_variants())}")


def variant_confidence(
    samples: SampleSet,
    variant: str,
    weights: SimilarityWeights = DEFAULT_WEIGHTS,
    provider: Optional[ProviderLike] = None,
    workers: Optional[int] = None,
    subtree_height: int = DEFAULT_SUBTREE_HEIGHT,
) -> float:
    """
    Confianza de un requerimiento con la variante de estimador indicada

    Args:
        samples: Programas muestreados (N >= 2)
        variant: hybrid, bleu, codebleu, edit, embedding-only, without-<modalidad> o single-<modalidad>
        weights: Pesos base para las variantes híbridas
        provider: Proveedor de embeddings
        workers: Hilos para el análisis por programa
        subtree_height: Altura de las huellas de sub-árboles

    Returns:
        Confianza en [0, 1]
    """
    mixed = variant_weights(variant, weights)
    if mixed is not None:
        return ConfidenceEstimator(mixed, provider, workers, subtree_height).estimate(samples).confidence

    samples.validate_for_estimation()
    estimator = ConfidenceEstimator(weights, provider, workers, subtree_height)
    features = estimator.analyze_all(samples.programs)
    similarity = _pairwise(variant, samples.language)
    return average_similarity(len(features), lambda i, j: similarity(features[i], features[j]))


def variant_confidences(
    samples: SampleSet,
    variants: Sequence[str],
    weights: SimilarityWeights = DEFAULT_WEIGHTS,
    provider: Optional[ProviderLike] = None,
    workers: Optional[int] = None,
    subtree_height: int = DEFAULT_SUBTREE_HEIGHT,
) -> Dict[str, float]:
    """
    Confianza de varias variantes analizando cada programa una sola vez

    Las variantes híbridas se obtienen de los promedios por modalidad, ya que la
    confianza es lineal en los pesos.
    """
    mixes = {variant: variant_weights(variant, weights) for variant in variants}
    samples.validate_for_estimation()
    estimator = ConfidenceEstimator(weights, provider, workers, subtree_height)
    features = estimator.analyze_all(samples.programs)
    means: Optional[np.ndarray] = None
    results: Dict[str, float] = {}
    for variant, mixed in mixes.items():
        if mixed is None:
            similarity = _pairwise(variant, samples.language)
            results[variant] = average_similarity(len(features), lambda i, j: similarity(features[i], features[j]))
            continue
        if means is None:
            means = np.asarray(estimator.report_from_features(samples.requirement_id, features).modality_means())
        results[variant] = float(np.clip(means @ np.asarray(mixed.as_tuple()), 0.0, 1.0))
    return results
