import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from models.base_model import BaseModel, PathLike, read_records, write_records
from models.errors import InvalidConfig, MalformedLine, MissingLanguage, UnsupportedLanguage, UnknownLanguage
from models.program import Language, Program, ProgramOrigin, SampleSet

logger = logging.getLogger(__name__)

ARCHIVE_FIELDS = ("id", "model", "programs", "language", "requirement")
PROGRAM_FIELDS = ("source", "temperature", "token_probs", "passed")


@dataclass(frozen=True)
class ArchivedProgram(BaseModel):
    source: str
    temperature: Optional[float] = None
    token_probs: Optional[Tuple[float, ...]] = None
    passed: Optional[bool] = None


@dataclass(frozen=True)
class SampleArchiveEntry(BaseModel):
    """Programas muestreados para un requerimiento y un modelo (reproducción offline)"""

    id: str
    model: str
    programs: Tuple[ArchivedProgram, ...] = field(default_factory=tuple)
    language: Optional[Language] = None
    requirement: Optional[str] = None

    def to_sample_set(self, language: Optional[Language] = None, requirement: Optional[str] = None) -> SampleSet:
        """
        Construir el SampleSet del archivo

        Args:
            language: Lenguaje a usar si la entrada no lo declara
            requirement: Texto del requerimiento si la entrada no lo trae

        Raises:
            MissingLanguage: Ni la entrada ni el llamador indican el lenguaje
        """
        lang = self.language or language
        if lang is None:
            raise MissingLanguage(f"entry {self.id!r} declares no language and none was supplied")
        programs = []
        for index, archived in enumerate(self.programs):
            try:
                origin = ProgramOrigin(index, archived.temperature, archived.token_probs)
            except InvalidConfig as e:
                raise MalformedLine(f"entry {self.id!r}, program {index}: {e}") from None
            programs.append(Program(archived.source, lang, origin, archived.passed))
        return SampleSet(self.id, self.requirement or requirement or "", tuple(programs))

    @classmethod
    def from_record(cls, record: Dict[str, Any], line_number: int) -> "SampleArchiveEntry":
        for name in ("id", "model", "programs"):
            if name not in record:
                raise MalformedLine(f"missing field {name!r}", line_number)
        unknown = sorted(set(record) - set(ARCHIVE_FIELDS))
        if unknown:
            logger.warning("line %d: ignoring unknown field(s) %s", line_number, ", ".join(unknown))

        raw_programs = record["programs"]
        if not isinstance(raw_programs, list) or not raw_programs:
            raise MalformedLine("programs must be a non-empty list", line_number)
        programs = [_parse_program(item, line_number) for item in raw_programs]

        language = None
        if record.get("language") is not None:
            try:
                language = Language.parse(record["language"])
            except UnsupportedLanguage:
                raise UnknownLanguage(f"unknown language {record['language']!r}", line_number) from None

        return cls(
            id=str(record["id"]),
            model=str(record["model"]),
            programs=tuple(programs),
            language=language,
            requirement=record.get("requirement"),
        )


def _parse_program(item: Any, line_number: int) -> ArchivedProgram:
    if isinstance(item, str):
        return ArchivedProgram(item)
    if not isinstance(item, dict) or not isinstance(item.get("source"), str):
        raise MalformedLine("each program needs a string 'source'", line_number)
    probs = item.get("token_probs")
    if probs is not None:
        if not isinstance(probs, list) or not probs or any(
            not isinstance(p, (int, float)) or not 0.0 < p <= 1.0 for p in probs
        ):
            raise MalformedLine("token_probs must be a non-empty list of reals in (0, 1]", line_number)
        probs = tuple(float(p) for p in probs)
    temperature = item.get("temperature")
    if temperature is not None and (not isinstance(temperature, (int, float)) or not 0.0 <= temperature <= 2.0):
        raise MalformedLine(f"temperature must be a real in [0, 2], got {temperature!r}", line_number)
    passed = item.get("passed")
    if passed is not None and not isinstance(passed, bool):
        raise MalformedLine("passed must be a boolean", line_number)
    return ArchivedProgram(
        item["source"],
        float(temperature) if temperature is not None else None,
        probs,
        passed,
    )


def load_samples(path: PathLike) -> List[SampleArchiveEntry]:
    """Cargar un archivo de programas muestreados (JSON Lines); la unión por id la validan los llamadores"""
    return [SampleArchiveEntry.from_record(record, line_number) for line_number, record in read_records(path)]


def save_samples(path: PathLike, entries: Sequence[SampleArchiveEntry]) -> int:
    return write_records(path, entries)


def entries_for_model(entries: Sequence[SampleArchiveEntry], model: Optional[str]) -> Dict[str, SampleArchiveEntry]:
    """Indexar entradas por id para un modelo (o todas si model es None)"""
    indexed: Dict[str, SampleArchiveEntry] = {}
    for entry in entries:
        if model is None or entry.model == model:
            indexed[entry.id] = entry
    return indexed
