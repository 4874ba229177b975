import dataclasses
import enum
import gzip
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Tuple, Union

from models.errors import MalformedLine

PathLike = Union[str, Path]


class BaseModel:
    """Clase base para todos los registros serializables de la aplicación"""

    def to_dict(self) -> Dict[str, Any]:
        """Convertir el registro (dataclass) a un diccionario apto para JSON"""
        return to_jsonable(self)


def to_jsonable(value: Any) -> Any:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def open_text(path: PathLike, mode: str = "r") -> io.TextIOBase:
    """Abrir un archivo de texto UTF-8, comprimido con gzip si termina en .gz"""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def read_records(path: PathLike) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """
    Leer un archivo JSON Lines registro por registro

    Args:
        path: Ruta del archivo (plano o .gz)

    Returns:
        Iterador de tuplas (número de línea, objeto)
    """
    with open_text(path) as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedLine(f"invalid JSON ({e.msg})", line_number) from e
            if not isinstance(record, dict):
                raise MalformedLine("expected a JSON object", line_number)
            yield line_number, record


def _atomic_write(path: PathLike, payload: str) -> None:
    # Archivo temporal en el mismo directorio + rename
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=path.suffix, dir=str(path.parent))
    os.close(fd)
    try:
        with open_text(tmp_name, "w") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_records(path: PathLike, records: Iterable[Union[BaseModel, Dict[str, Any]]]) -> int:
    """
    Escribir registros como JSON Lines de forma atómica

    Returns:
        Cantidad de registros escritos
    """
    lines: List[str] = []
    for record in records:
        data = record.to_dict() if isinstance(record, BaseModel) else to_jsonable(record)
        lines.append(json.dumps(data, ensure_ascii=False, sort_keys=True))
    _atomic_write(path, "".join(line + "\n" for line in lines))
    return len(lines)


def write_json(path: PathLike, data: Any) -> None:
    """Escribir un documento JSON de forma atómica"""
    if isinstance(data, BaseModel):
        data = data.to_dict()
    _atomic_write(path, json.dumps(to_jsonable(data), indent=2, ensure_ascii=False, sort_keys=True) + "\n")


def read_json(path: PathLike) -> Any:
    with open_text(path) as handle:
        return json.load(handle)
