"""Comparar variantes del estimador y tamaños de muestreo"""

import logging
from typing import Any, Dict

from commands.common import add_data_arguments, add_weights_argument, build_scorer, emit, load_joined, parse_list
from components.estimator_variants import HYBRID, available_variants
from components.pipeline import summarize
from config.settings import RunConfig
from models.errors import InvalidConfig
from utils.formatters import crear_dataframe_metricas, export_excel, render_table, to_json_text

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("ablation", help="AUROC y AUCPR por variante de estimador")
    add_data_arguments(parser)
    add_weights_argument(parser)
    parser.add_argument(
        "--variants",
        help=f"variantes separadas por comas (default todas): {', '.join(available_variants())}",
    )
    parser.add_argument("--sample-sizes", help="tamaños N separados por comas, p. ej. 2,5,10,20")
    parser.add_argument("--pr-mode", dest="pr_mode", choices=("average-precision", "trapezoid"))
    parser.add_argument("--xlsx", help="exportar las tablas a Excel")
    parser.add_argument("--json", help="reporte completo en JSON")
    return parser


def _sizes(value) -> list:
    try:
        sizes = [int(v) for v in parse_list(value)]
    except ValueError:
        raise InvalidConfig(f"invalid sample sizes {value!r}") from None
    if any(n < 2 for n in sizes):
        raise InvalidConfig("every sample size must be >= 2")
    return sizes


def run(args, config: RunConfig) -> int:
    variants = parse_list(args.variants) or available_variants()
    sizes = _sizes(args.sample_sizes)
    _, joined, model = load_joined(args, config)
    if not joined:
        raise InvalidConfig(f"no benchmark sample on split {args.split!r} joins the archive")
    scorer = build_scorer(config, args.weights)

    variant_summaries: Dict[str, Dict[str, Any]] = {}
    for variant, scored in scorer.score_variants(variants, joined).items():
        variant_summaries[variant] = summarize(scored, config.pr_mode)
    sheets = {"variants": crear_dataframe_metricas(variant_summaries, key="Variant")}
    print(render_table(sheets["variants"]))

    size_summaries: Dict[str, Dict[str, Any]] = {}
    for n in sizes:
        scored = scorer.score_variants([HYBRID], joined, limit=n)[HYBRID]
        size_summaries[str(n)] = summarize(scored, config.pr_mode)
        logger.info("N=%d: AUROC %.4f", n, size_summaries[str(n)]["auroc"])
    if size_summaries:
        sheets["sample_sizes"] = crear_dataframe_metricas(size_summaries, key="N")
        print()
        print(render_table(sheets["sample_sizes"]))

    if args.xlsx:
        export_excel(sheets, args.xlsx)
    if args.json:
        emit(to_json_text({"model": model, "split": args.split, "variants": variant_summaries,
                           "sample_sizes": size_summaries}), args.json)
    return 0
