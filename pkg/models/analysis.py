from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Tuple

import numpy as np

from models.base_model import BaseModel
from models.errors import DegenerateEmbedding, InvalidConfig


@dataclass(frozen=True)
class SubtreeBag:
    """Multiconjunto de huellas de sub-árboles del CST"""

    entries: Counter = field(default_factory=Counter)

    def __len__(self) -> int:
        return sum(self.entries.values())


@dataclass(frozen=True)
class DataflowGraph:
    """Multiconjunto de aristas (origen, destino): el valor de destino proviene de origen"""

    edges: Counter = field(default_factory=Counter)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> "DataflowGraph":
        return cls(Counter(pairs))

    def __len__(self) -> int:
        return sum(self.edges.values())


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise DegenerateEmbedding("embedding has no components")
        object.__setattr__(self, "values", values)

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])


class ProviderKind(str, Enum):
    REMOTE = "remote"
    LOCAL_HASHED = "local-hashed"


@dataclass(frozen=True)
class EmbeddingProviderConfig(BaseModel):
    """
    Configuración del proveedor de embeddings

    Remote exige endpoint y model_name; LocalHashed exige dimension >= 64.
    """

    kind: ProviderKind = ProviderKind.LOCAL_HASHED
    endpoint: Optional[str] = None
    model_name: Optional[str] = None
    dimension: int = 256
    max_in_flight: int = 4
    retries: int = 2
    timeout: float = 30.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProviderKind(self.kind))
        if self.kind is ProviderKind.REMOTE:
            if not self.endpoint or not self.model_name:
                raise InvalidConfig("remote embedding provider requires endpoint and model_name")
        elif self.dimension < 64:
            raise InvalidConfig(f"local-hashed embedding dimension must be >= 64, got {self.dimension}")
        if self.max_in_flight < 1:
            raise InvalidConfig("max_in_flight must be >= 1")
