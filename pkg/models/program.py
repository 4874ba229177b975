from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from models.base_model import BaseModel
from models.errors import InvalidConfig, TooFewSamples, UnsupportedLanguage


class Language(str, Enum):
    """Lenguajes soportados por todos los análisis"""

    PYTHON = "python"
    JAVA = "java"

    @classmethod
    def parse(cls, value) -> "Language":
        """Obtener el lenguaje a partir de su etiqueta (sin distinguir mayúsculas)"""
        if isinstance(value, Language):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise UnsupportedLanguage(f"unsupported language: {value!r}") from None


@dataclass(frozen=True)
class ProgramOrigin(BaseModel):
    """Metadatos de muestreo de un programa candidato"""

    sample_index: int = 0
    temperature: Optional[float] = None
    token_probs: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.sample_index < 0:
            raise InvalidConfig("sample_index must be >= 0")
        if self.temperature is not None and not 0.0 <= self.temperature <= 2.0:
            raise InvalidConfig(f"temperature out of [0, 2]: {self.temperature}")
        if self.token_probs is not None:
            if len(self.token_probs) == 0:
                raise InvalidConfig("token_probs must be non-empty when present")
            if any(not 0.0 < p <= 1.0 for p in self.token_probs):
                raise InvalidConfig("token_probs must lie in (0, 1]")


@dataclass(frozen=True)
class Program(BaseModel):
    """Programa candidato generado para un requerimiento"""

    source: str
    language: Language
    origin: Optional[ProgramOrigin] = None
    # Verdicto externo (pasa las pruebas); no se ejecuta código aquí
    passed: Optional[bool] = None


@dataclass(frozen=True)
class TokenSequence:
    tokens: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class SampleSet(BaseModel):
    """Conjunto de N programas muestreados para un requerimiento"""

    requirement_id: str
    requirement: str
    programs: Tuple[Program, ...] = field(default_factory=tuple)

    @property
    def language(self) -> Optional[Language]:
        return self.programs[0].language if self.programs else None

    def validate_for_estimation(self) -> None:
        """Verificar N >= 2 y un único lenguaje"""
        if len(self.programs) < 2:
            raise TooFewSamples(
                f"requirement {self.requirement_id!r} has {len(self.programs)} program(s); at least 2 are needed"
            )
        languages = {p.language for p in self.programs}
        if len(languages) != 1:
            raise UnsupportedLanguage(
                f"requirement {self.requirement_id!r} mixes languages: {sorted(l.value for l in languages)}"
            )

    def truncated(self, n: int) -> "SampleSet":
        """Primeros n programas (estudio de tamaño de muestreo)"""
        return SampleSet(self.requirement_id, self.requirement, tuple(self.programs[:n]))

    @property
    def correct_count(self) -> Optional[int]:
        verdicts: List[Optional[bool]] = [p.passed for p in self.programs]
        if any(v is None for v in verdicts):
            return None
        return sum(1 for v in verdicts if v)
