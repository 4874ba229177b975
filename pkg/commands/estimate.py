"""Estimar la confianza de cada entrada de un archivo de muestras"""

import json
import logging

from commands.common import add_weights_argument, emit
from components.confidence import ConfidenceEstimator, load_weights
from config.settings import RunConfig
from models.base_model import to_jsonable
from models.benchmark import load_benchmark
from models.sample_archive import entries_for_model, load_samples

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("estimate", help="calcular la confianza de los programas muestreados")
    parser.add_argument("--samples", required=True, help="archivo de muestras")
    add_weights_argument(parser)
    parser.add_argument("--benchmark", help="benchmark para completar lenguaje y requerimiento")
    parser.add_argument("--out", help="reportes JSON Lines (por defecto stdout)")
    return parser


def run(args, config: RunConfig) -> int:
    weights = load_weights(args.weights)
    entries = load_samples(args.samples)
    if config.model:
        entries = list(entries_for_model(entries, config.model).values())
    known = {s.id: s for s in load_benchmark(args.benchmark)} if args.benchmark else {}

    estimator = ConfidenceEstimator(weights, config.provider_config(), config.workers, config.subtree_height)
    lines = []
    for entry in entries:
        sample = known.get(entry.id)
        samples = entry.to_sample_set(
            sample.language if sample else None,
            sample.requirement if sample else None,
        )
        report = estimator.estimate(samples)
        logger.info("%s (%s): confidence %.4f", entry.id, entry.model, report.confidence)
        document = report.to_dict()
        document["model"] = entry.model
        document["weights"] = to_jsonable(weights)
        lines.append(json.dumps(document, sort_keys=True, ensure_ascii=False))
    emit("\n".join(lines), args.out)
    return 0
