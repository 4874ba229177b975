"""
Proveedores de embeddings para programas y similitud coseno.

LocalHashed: conteos de unigramas y bigramas de tokens léxicos, hasheados con
MurmurHash3 (semilla HASH_SEED) en `dimension` cubetas y normalizados en L2.
Remote: endpoint de embeddings compatible con OpenAI, vector devuelto tal cual.
"""

import logging
import re
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.utils import murmurhash3_32

from components.tokenizer import tokenize
from config.http import EndpointConnection
from models.analysis import EmbeddingProviderConfig, EmbeddingVector, ProviderKind
from models.errors import DegenerateEmbedding, DimensionMismatch, EndpointError, ProviderUnavailable, ZeroVector
from models.program import Program, TokenSequence

logger = logging.getLogger(__name__)

HASH_SEED = 20240601
EMPTY_FEATURE = "<empty>"
_WORD = re.compile(r"\w+|[^\w\s]")


class EmbeddingProvider:
    """Interfaz común: programas y textos a vectores"""

    def embed(self, program: Program) -> EmbeddingVector:
        raise NotImplementedError

    def embed_text(self, text: str) -> EmbeddingVector:
        raise NotImplementedError

    def embed_tokens(self, program: Program, tokens: TokenSequence) -> EmbeddingVector:
        """Embedding reutilizando los tokens ya extraídos, si el proveedor los usa"""
        return self.embed(program)


class LocalHashedProvider(EmbeddingProvider):
    def __init__(self, dimension: int = 256):
        self.dimension = dimension

    def _vectorize(self, tokens: Sequence[str]) -> EmbeddingVector:
        features: List[str] = list(tokens)
        features.extend(f"{a}␟{b}" for a, b in zip(tokens, tokens[1:]))
        if not features:
            # Reemplazo del vector nulo: todos los programas vacíos comparten dirección
            features = [EMPTY_FEATURE]
        values = np.zeros(self.dimension, dtype=np.float64)
        for feature in features:
            values[murmurhash3_32(feature, seed=HASH_SEED, positive=True) % self.dimension] += 1.0
        return EmbeddingVector(values / np.linalg.norm(values))

    def embed(self, program: Program) -> EmbeddingVector:
        return self._vectorize(tokenize(program).tokens)

    def embed_tokens(self, program: Program, tokens: TokenSequence) -> EmbeddingVector:
        return self._vectorize(tokens.tokens)

    def embed_text(self, text: str) -> EmbeddingVector:
        return self._vectorize(_WORD.findall(text.lower()))


class RemoteProvider(EmbeddingProvider):
    """Cliente de POST {endpoint}/embeddings con memoización en proceso"""

    def __init__(self, config: EmbeddingProviderConfig, connection: Optional[EndpointConnection] = None):
        self.config = config
        self.connection = connection or EndpointConnection(
            config.endpoint,
            max_in_flight=config.max_in_flight,
            retries=config.retries,
            timeout=config.timeout,
        )
        self._cache: Dict[str, EmbeddingVector] = {}
        self._lock = threading.Lock()

    def embed_text(self, text: str) -> EmbeddingVector:
        with self._lock:
            cached = self._cache.get(text)
        if cached is not None:
            return cached
        try:
            data = self.connection.post_json("embeddings", {"model": self.config.model_name, "input": [text]})
        except EndpointError as e:
            raise ProviderUnavailable(str(e)) from e
        try:
            values = data["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError):
            raise ProviderUnavailable("embeddings response lacks data[0].embedding") from None
        vector = EmbeddingVector(np.asarray(values, dtype=np.float64))
        if not np.any(vector.values):
            raise DegenerateEmbedding("remote provider returned an all-zero vector")
        with self._lock:
            self._cache[text] = vector
        return vector

    def embed(self, program: Program) -> EmbeddingVector:
        return self.embed_text(program.source)


_PROVIDERS: Dict[Tuple, EmbeddingProvider] = {}
_PROVIDERS_LOCK = threading.Lock()


def get_provider(config: EmbeddingProviderConfig) -> EmbeddingProvider:
    """Proveedor compartido por configuración (cache en proceso)"""
    key = (config.kind, config.endpoint, config.model_name, config.dimension)
    with _PROVIDERS_LOCK:
        if key not in _PROVIDERS:
            if config.kind is ProviderKind.REMOTE:
                _PROVIDERS[key] = RemoteProvider(config)
            else:
                _PROVIDERS[key] = LocalHashedProvider(config.dimension)
        return _PROVIDERS[key]


def embed(program: Program, config: EmbeddingProviderConfig) -> EmbeddingVector:
    """
    Obtener el embedding de un programa

    Args:
        program: Programa a representar
        config: Configuración del proveedor

    Returns:
        EmbeddingVector no nulo
    """
    return get_provider(config).embed(program)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Coseno entre dos vectores, recortado a [0, 1]"""
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"cannot compare dimensions {a.dimension} and {b.dimension}")
    norm_a = float(np.linalg.norm(a.values))
    norm_b = float(np.linalg.norm(b.values))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine is undefined for a zero vector")
    value = float(np.dot(a.values, b.values)) / (norm_a * norm_b)
    return min(1.0, max(0.0, value))


def embed_all(programs: Iterable[Program], provider: EmbeddingProvider) -> List[EmbeddingVector]:
    vectors = [provider.embed(p) for p in programs]
    dimensions = {v.dimension for v in vectors}
    if len(dimensions) > 1:
        raise DimensionMismatch(f"provider returned mixed dimensions: {sorted(dimensions)}")
    return vectors
