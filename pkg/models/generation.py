from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from models.base_model import BaseModel
from models.errors import InvalidConfig
from models.program import Program

# Temperaturas del ajuste de inferencia por defecto (cinco programas)
FIVE_TEMPERATURE_PRESET: Tuple[float, ...] = (0.0, 0.2, 0.6, 0.8, 1.0)


class SeedMode(str, Enum):
    INDEPENDENT = "independent"
    FIXED_SCHEDULE = "fixed-schedule"


@dataclass(frozen=True)
class SamplingConfig(BaseModel):
    """
    Parámetros de muestreo contra un endpoint compatible con OpenAI

    Con FixedSchedule se usan las cinco temperaturas del preset y n = 5.
    """

    endpoint: str
    model: str
    n: int = 20
    temperature: float = 1.0
    max_tokens: int = 512
    parallelism: int = 4
    seed_mode: SeedMode = SeedMode.INDEPENDENT
    retries: int = 2
    backoff: float = 0.5
    timeout: float = 60.0

    def __post_init__(self):
        object.__setattr__(self, "seed_mode", SeedMode(self.seed_mode))
        if self.seed_mode is SeedMode.FIXED_SCHEDULE:
            object.__setattr__(self, "n", len(FIVE_TEMPERATURE_PRESET))
        if self.n < 1:
            raise InvalidConfig("n must be >= 1")
        if not 0.0 <= self.temperature <= 2.0:
            raise InvalidConfig(f"temperature out of [0, 2]: {self.temperature}")
        if self.parallelism < 1:
            raise InvalidConfig("parallelism must be >= 1")
        if self.max_tokens < 1:
            raise InvalidConfig("max_tokens must be >= 1")

    def temperatures(self) -> Tuple[float, ...]:
        """Temperatura de cada petición, en orden de índice de muestra"""
        if self.seed_mode is SeedMode.FIXED_SCHEDULE:
            return FIVE_TEMPERATURE_PRESET
        return tuple([self.temperature] * self.n)


@dataclass(frozen=True)
class GenerationRecord(BaseModel):
    program: Program
    raw_response: str
    token_probs: Tuple[float, ...]
    finish_reason: Optional[str]
    fenced: bool = True
