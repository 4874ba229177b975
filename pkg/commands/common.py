"""Argumentos y carga de datos compartidos por los subcomandos"""

import argparse
import logging
import sys
from typing import List, Optional, Tuple

from components.confidence import load_weights
from components.llm_client import LLMClient
from components.pipeline import JoinedSample, MethodScorer, join_samples, resolve_model
from config.settings import RunConfig
from models.base_model import PathLike, _atomic_write
from models.benchmark import BenchmarkSample, Split, by_split, load_benchmark
from models.sample_archive import load_samples

logger = logging.getLogger(__name__)

SPLIT_CHOICES = ("train", "test", "all")


def add_data_arguments(parser: argparse.ArgumentParser, default_split: str = "test") -> None:
    parser.add_argument("--benchmark", required=True, help="benchmark JSON Lines (.jsonl o .jsonl.gz)")
    parser.add_argument("--samples", required=True, help="archivo de programas muestreados")
    parser.add_argument("--split", choices=SPLIT_CHOICES, default=default_split)


def add_weights_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--weights", help="pesos ajustados (JSON); sin archivo se usan 0.25 x 4")


def parse_list(value: Optional[str]) -> List[str]:
    """Lista separada por comas; admite flags repetidos ya concatenados"""
    if not value:
        return []
    return [item.strip() for item in value.split(",") if item.strip()]


def select_split(samples: List[BenchmarkSample], split: str) -> List[BenchmarkSample]:
    if split == "all":
        return list(samples)
    return by_split(samples, Split(split))


def load_joined(args, config: RunConfig) -> Tuple[List[BenchmarkSample], List[JoinedSample], str]:
    """
    Cargar benchmark y archivo, y unirlos para el modelo configurado

    Returns:
        (benchmark completo, muestras unidas del split pedido, modelo)
    """
    benchmark = load_benchmark(args.benchmark)
    entries = load_samples(args.samples)
    model = resolve_model(entries, config.model or None)
    # La unión se valida contra el benchmark completo; el split se aplica después
    wanted = {s.id for s in select_split(benchmark, args.split)}
    joined = [j for j in join_samples(benchmark, entries, model) if j.id in wanted]
    logger.info("joined %d sample(s) for model %s on split %s", len(joined), model, args.split)
    return benchmark, joined, model


def make_client(config: RunConfig) -> LLMClient:
    return LLMClient(config.sampling_config(), api_key=config.api_key or None, audit_path=config.audit_log or None)


def build_scorer(
    config: RunConfig,
    weights_path: Optional[str] = None,
    k: Optional[int] = None,
    online: bool = False,
) -> MethodScorer:
    """MethodScorer desde la configuración; el cliente LLM solo se crea si hace falta"""
    return MethodScorer(
        weights=load_weights(weights_path),
        provider=config.provider_config(),
        workers=config.workers,
        client=make_client(config) if online else None,
        k=k,
        k_grid=config.k_grid(),
        subtree_height=config.subtree_height,
    )


def emit(text: str, path: Optional[PathLike] = None) -> None:
    """Escribir en un archivo (atómico) o en stdout"""
    if not text.endswith("\n"):
        text += "\n"
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)
