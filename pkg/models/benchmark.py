import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from models.base_model import BaseModel, PathLike, read_records, write_records
from models.errors import DuplicateId, InvalidConfig, MalformedLine, TooFewSamples, UnknownLanguage, UnsupportedLanguage
from models.program import Language

logger = logging.getLogger(__name__)


class Label(str, Enum):
    PASSED = "passed"
    FAILED = "failed"


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"


BENCHMARK_FIELDS = ("id", "language", "requirement", "labels", "split")


@dataclass(frozen=True)
class BenchmarkSample(BaseModel):
    """Requerimiento con etiquetas passed/failed por modelo"""

    id: str
    language: Language
    requirement: str
    labels: Dict[str, Label] = field(default_factory=dict)
    split: Split = Split.TEST

    def label_for(self, model: str) -> Label:
        return self.labels[model]

    @classmethod
    def from_record(cls, record: Dict[str, Any], line_number: int) -> "BenchmarkSample":
        """Validar un objeto leído del archivo de benchmark"""
        for name in BENCHMARK_FIELDS:
            if name not in record:
                raise MalformedLine(f"missing field {name!r}", line_number)
        unknown = sorted(set(record) - set(BENCHMARK_FIELDS))
        if unknown:
            logger.warning("line %d: ignoring unknown field(s) %s", line_number, ", ".join(unknown))

        sample_id = record["id"]
        if not isinstance(sample_id, str) or not sample_id:
            raise MalformedLine("id must be a non-empty string", line_number)
        try:
            language = Language.parse(record["language"])
        except UnsupportedLanguage:
            raise UnknownLanguage(f"unknown language {record['language']!r}", line_number) from None
        if not isinstance(record["requirement"], str):
            raise MalformedLine("requirement must be a string", line_number)

        raw_labels = record["labels"]
        if not isinstance(raw_labels, dict):
            raise MalformedLine("labels must be an object", line_number)
        labels: Dict[str, Label] = {}
        for model, value in raw_labels.items():
            try:
                labels[str(model)] = Label(value)
            except ValueError:
                raise MalformedLine(f"label for {model!r} must be 'passed' or 'failed', got {value!r}", line_number) from None
        try:
            split = Split(record["split"])
        except ValueError:
            raise MalformedLine(f"split must be 'train' or 'test', got {record['split']!r}", line_number) from None

        return cls(sample_id, language, record["requirement"], labels, split)


def load_benchmark(path: PathLike) -> List[BenchmarkSample]:
    """
    Cargar el benchmark en formato JSON Lines

    Args:
        path: Archivo .jsonl (o .jsonl.gz)

    Returns:
        Lista de muestras validadas, en orden de archivo
    """
    samples: List[BenchmarkSample] = []
    seen: Dict[str, int] = {}
    for line_number, record in read_records(path):
        sample = BenchmarkSample.from_record(record, line_number)
        if sample.id in seen:
            raise DuplicateId(f"duplicate id {sample.id!r} (first seen on line {seen[sample.id]})", line_number)
        seen[sample.id] = line_number
        samples.append(sample)
    return samples


def save_benchmark(path: PathLike, samples: Sequence[BenchmarkSample]) -> int:
    return write_records(path, samples)


def split_benchmark(
    samples: Sequence[BenchmarkSample], ratio: float = 0.5, seed: int = 42
) -> Tuple[List[BenchmarkSample], List[BenchmarkSample]]:
    """
    Partición determinista en entrenamiento y prueba

    Baraja con la semilla y corta en floor(ratio * n).
    """
    if len(samples) < 2:
        raise TooFewSamples(f"need at least 2 samples to split, got {len(samples)}")
    if not 0.0 < ratio < 1.0:
        raise InvalidConfig(f"split ratio must be in (0, 1), got {ratio}")
    order = np.random.default_rng(seed).permutation(len(samples))
    cut = math.floor(ratio * len(samples))
    train = [samples[i] for i in order[:cut]]
    test = [samples[i] for i in order[cut:]]
    return train, test


def by_split(samples: Sequence[BenchmarkSample], split: Split) -> List[BenchmarkSample]:
    return [s for s in samples if s.split is split]
