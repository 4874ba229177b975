"""Muestrear N programas por requerimiento y guardarlos como archivo de muestras"""

import argparse
import logging
from typing import List, Tuple

from commands.common import make_client
from config.settings import RunConfig
from models.benchmark import load_benchmark
from models.errors import InvalidConfig
from models.generation import GenerationRecord
from models.program import Language
from models.sample_archive import ArchivedProgram, SampleArchiveEntry, save_samples

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("sample", help="muestrear programas de un LLM")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--requirement", help="texto de un requerimiento")
    source.add_argument("--benchmark", help="muestrear todos los requerimientos de un benchmark")
    parser.add_argument("--language", default="python", help="lenguaje para --requirement")
    parser.add_argument("--id", default="requirement", help="id para --requirement")
    parser.add_argument("--out", required=True, help="archivo de muestras a escribir")
    parser.add_argument("--n", type=int, help="programas por requerimiento (default 20)")
    parser.add_argument("--temperature", type=float)
    parser.add_argument("--max-tokens", dest="max_tokens", type=int)
    parser.add_argument("--parallelism", type=int)
    parser.add_argument("--preset", choices=("none", "paper-five"))
    return parser


def _entry(requirement_id: str, model: str, language: Language, requirement: str,
           records: List[GenerationRecord]) -> SampleArchiveEntry:
    programs = tuple(
        ArchivedProgram(
            record.program.source,
            record.program.origin.temperature,
            record.token_probs or None,
        )
        for record in records
    )
    return SampleArchiveEntry(requirement_id, model, programs, language, requirement)


def run(args, config: RunConfig) -> int:
    sampling = config.sampling_config()
    if args.requirement is not None:
        jobs: List[Tuple[str, Language, str]] = [(args.id, Language.parse(args.language), args.requirement)]
    else:
        jobs = [(s.id, s.language, s.requirement) for s in load_benchmark(args.benchmark)]
    if not jobs:
        raise InvalidConfig("nothing to sample")

    client = make_client(config)
    entries = []
    try:
        for requirement_id, language, requirement in jobs:
            _, records = client.sample(requirement, language, requirement_id)
            logger.info("sampled %d program(s) for %s", len(records), requirement_id)
            entries.append(_entry(requirement_id, sampling.model, language, requirement, records))
    finally:
        client.close()

    written = save_samples(args.out, entries)
    print(f"{written} entr{'y' if written == 1 else 'ies'} written to {args.out}")
    return 0
