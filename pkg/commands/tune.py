"""Ajustar los pesos de la similitud híbrida sobre el split de entrenamiento"""

import logging

from commands.common import add_data_arguments, build_scorer, emit, load_joined
from components.confidence import save_weights, tune_weights_from_modalities
from config.settings import RunConfig
from models.errors import InvalidConfig
from utils.formatters import to_json_text

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("tune", help="búsqueda en grilla de alpha, beta, gamma y delta")
    add_data_arguments(parser, default_split="train")
    parser.add_argument("--grid-step", dest="grid_step", type=float, help="paso de la grilla (default 0.05)")
    parser.add_argument("--out", help="archivo de pesos JSON (por defecto stdout)")
    return parser


def run(args, config: RunConfig) -> int:
    _, joined, model = load_joined(args, config)
    if not joined:
        raise InvalidConfig(f"no benchmark sample on split {args.split!r} joins the archive")
    scorer = build_scorer(config)
    means = scorer.modality_means(joined)
    result = tune_weights_from_modalities(means, [j.label for j in joined], config.grid_step)
    logger.info("tuned weights for %s on %d sample(s)", model, len(joined))
    if args.out:
        save_weights(args.out, result)
        print(f"weights written to {args.out} (train AUROC {result.train_auroc:.4f})")
    else:
        emit(to_json_text(result.to_weights_document()))
    return 0
