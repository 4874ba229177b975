import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv

from models.analysis import EmbeddingProviderConfig, ProviderKind
from models.errors import InvalidConfig
from models.generation import SamplingConfig, SeedMode

# Cargar variables de entorno (.env) sin pisar las ya definidas
load_dotenv(override=False)

ENV_PREFIX = "HONEST_"

# Configuraciones de muestreo
SAMPLING_CONFIG = {
    'endpoint': '',
    'model': '',
    'n': 20,
    'temperature': 1.0,
    'max_tokens': 512,
    'parallelism': 4,
    'preset': 'none',
}

# Configuraciones HTTP compartidas por chat completions y embeddings
HTTP_CONFIG = {
    'api_key': '',
    'retries': 2,
    'backoff': 0.5,
    'timeout': 60.0,
    'audit_log': '',
}

# Configuraciones del proveedor de embeddings
EMBEDDING_CONFIG = {
    'embedding_kind': 'local-hashed',
    'embedding_endpoint': '',
    'embedding_model': '',
    'embedding_dimension': 256,
    'embedding_max_in_flight': 4,
}

# Configuraciones del estimador
ESTIMATOR_CONFIG = {
    'workers': os.cpu_count() or 1,
    'subtree_height': 2,
    'grid_step': 0.05,
}

# Configuraciones de la compuerta
GATE_CONFIG = {
    'threshold': 0.5,
    'refusal_message': 'Sorry, I cannot solve this requirement.',
}

# Configuraciones de evaluación
EVALUATION_CONFIG = {
    'seed': 42,
    'sweep_points': 100,
    'pr_mode': 'average-precision',
    'knn_k_grid': '1,3,5,10,20',
}

# Configuraciones generales
GENERAL_CONFIG = {
    'log_level': 'WARNING',
}

DEFAULTS: Dict[str, Any] = {
    **SAMPLING_CONFIG,
    **HTTP_CONFIG,
    **EMBEDDING_CONFIG,
    **ESTIMATOR_CONFIG,
    **GATE_CONFIG,
    **EVALUATION_CONFIG,
    **GENERAL_CONFIG,
}

SECRET_KEYS = ('api_key',)
PRESETS = ('none', 'paper-five')
PR_MODES = ('average-precision', 'trapezoid')


def env_name(key: str) -> str:
    return ENV_PREFIX + key.upper()


def read_config_file(path: Optional[str]) -> Dict[str, str]:
    """Leer un archivo de configuración con líneas ``clave = valor``"""
    if not path:
        return {}
    if not os.path.isfile(path):
        raise InvalidConfig(f"config file not found: {path}")
    values = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            continue
        key = key.strip().lower()
        if key.startswith(ENV_PREFIX.lower()):
            key = key[len(ENV_PREFIX):]
        values[key] = value
    return values


def _get_config_value(
    key: str,
    default_value: Any,
    flags: Optional[Mapping[str, Any]] = None,
    file_values: Optional[Mapping[str, str]] = None,
) -> Any:
    """Obtiene un valor priorizando flags, luego variables de entorno, luego el archivo y por último el default."""
    # 1) Flags de línea de comandos
    if flags is not None and flags.get(key) not in (None, ""):
        return flags[key]

    # 2) Variables de entorno
    env_value = os.getenv(env_name(key), None)
    if env_value not in (None, ""):
        return env_value

    # 3) Archivo de configuración
    if file_values is not None and file_values.get(key) not in (None, ""):
        return file_values[key]

    return default_value


def _coerce(key: str, value: Any, default_value: Any) -> Any:
    if isinstance(value, type(default_value)) and not isinstance(default_value, bool):
        return value
    try:
        if isinstance(default_value, int):
            return int(value)
        if isinstance(default_value, float):
            return float(value)
    except (TypeError, ValueError):
        raise InvalidConfig(f"invalid value for {key}: {value!r}") from None
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    """Configuración resuelta de una ejecución (flags > entorno > archivo > defaults)"""

    endpoint: str
    model: str
    n: int
    temperature: float
    max_tokens: int
    parallelism: int
    preset: str
    retries: int
    backoff: float
    timeout: float
    embedding_kind: str
    embedding_endpoint: str
    embedding_model: str
    embedding_dimension: int
    embedding_max_in_flight: int
    workers: int
    subtree_height: int
    grid_step: float
    threshold: float
    refusal_message: str
    seed: int
    sweep_points: int
    pr_mode: str
    knn_k_grid: str
    api_key: str
    log_level: str
    audit_log: str

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise InvalidConfig(f"preset must be one of {PRESETS}, got {self.preset!r}")
        if self.pr_mode not in PR_MODES:
            raise InvalidConfig(f"pr_mode must be one of {PR_MODES}, got {self.pr_mode!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise InvalidConfig(f"threshold must be in [0, 1], got {self.threshold}")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")
        if self.sweep_points < 2:
            raise InvalidConfig("sweep_points must be >= 2")

    def sampling_config(self) -> SamplingConfig:
        if not self.endpoint or not self.model:
            raise InvalidConfig(f"sampling requires an endpoint ({env_name('endpoint')}) and a model")
        return SamplingConfig(
            endpoint=self.endpoint,
            model=self.model,
            n=self.n,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
            parallelism=self.parallelism,
            seed_mode=SeedMode.FIXED_SCHEDULE if self.preset == 'paper-five' else SeedMode.INDEPENDENT,
            retries=self.retries,
            backoff=self.backoff,
            timeout=self.timeout,
        )

    def provider_config(self) -> EmbeddingProviderConfig:
        try:
            kind = ProviderKind(self.embedding_kind)
        except ValueError:
            raise InvalidConfig(f"unknown embedding kind {self.embedding_kind!r}") from None
        return EmbeddingProviderConfig(
            kind=kind,
            endpoint=self.embedding_endpoint or self.endpoint or None,
            model_name=self.embedding_model or None,
            dimension=self.embedding_dimension,
            max_in_flight=self.embedding_max_in_flight,
            retries=self.retries,
            timeout=self.timeout,
        )

    def k_grid(self):
        try:
            return tuple(int(k) for k in self.knn_k_grid.split(',') if k.strip())
        except ValueError:
            raise InvalidConfig(f"invalid k grid {self.knn_k_grid!r}") from None

    def to_public_dict(self) -> Dict[str, Any]:
        """Configuración para --print-config, con secretos enmascarados"""
        data = asdict(self)
        for key in SECRET_KEYS:
            if data.get(key):
                data[key] = '***'
        return data


def resolve_run_config(flags: Optional[Mapping[str, Any]] = None, config_path: Optional[str] = None) -> RunConfig:
    """
    Resolver la configuración completa antes de cualquier I/O de red

    Args:
        flags: Valores provenientes de la línea de comandos (None = no indicado)
        config_path: Archivo ``clave = valor`` opcional

    Returns:
        RunConfig con todos los campos resueltos
    """
    file_values = read_config_file(config_path)
    resolved = {}
    for f in fields(RunConfig):
        default_value = DEFAULTS[f.name]
        raw = _get_config_value(f.name, default_value, flags, file_values)
        resolved[f.name] = _coerce(f.name, raw, default_value)
    return RunConfig(**resolved)
