"""Evaluar métodos de estimación de confianza sobre un benchmark etiquetado"""

import logging
from typing import Any, Dict

from commands.common import add_data_arguments, add_weights_argument, build_scorer, emit, load_joined, parse_list
from components.pipeline import ALL_METHODS, HONEST, ONLINE_METHODS, summarize
from config.settings import RunConfig
from models.benchmark import Split, by_split
from models.errors import InvalidConfig
from utils.calculators import confusion
from utils.formatters import crear_dataframe_metricas, export_curves, export_excel, render_table, to_json_text

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("evaluate", help="AUROC y AUCPR por método")
    add_data_arguments(parser)
    add_weights_argument(parser)
    parser.add_argument(
        "--method",
        action="append",
        help=f"método (repetible o separado por comas): {', '.join(ALL_METHODS)}",
    )
    parser.add_argument("--k", type=int, help="k fijo para K-NNS; sin valor se ajusta en train")
    parser.add_argument("--pr-mode", dest="pr_mode", choices=("average-precision", "trapezoid"))
    parser.add_argument("--threshold", type=float, help="umbral para la matriz de confusión")
    parser.add_argument("--sweep-points", dest="sweep_points", type=int)
    parser.add_argument("--curves-dir", help="directorio para las curvas ROC, PR y barrido (CSV)")
    parser.add_argument("--xlsx", help="exportar la tabla de métricas a Excel")
    parser.add_argument("--json", help="reporte completo en JSON")
    return parser


def run(args, config: RunConfig) -> int:
    methods = [m for value in (args.method or [HONEST]) for m in parse_list(value)]
    unknown = [m for m in methods if m not in ALL_METHODS]
    if unknown:
        raise InvalidConfig(f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(ALL_METHODS)}")

    benchmark, joined, model = load_joined(args, config)
    if not joined:
        raise InvalidConfig(f"no benchmark sample on split {args.split!r} joins the archive")
    train = by_split(benchmark, Split.TRAIN)
    scorer = build_scorer(
        config,
        args.weights,
        k=args.k,
        online=any(m in ONLINE_METHODS for m in methods),
    )

    with_curves = bool(args.curves_dir)
    summaries: Dict[str, Dict[str, Any]] = {}
    try:
        for method in methods:
            scored, extras = scorer.score(method, joined, train)
            summary = summarize(scored, config.pr_mode, config.sweep_points, with_curves)
            summary.update(extras)
            summary["confusion"] = confusion(scored, config.threshold)
            if with_curves:
                export_curves(summary.pop("curves"), args.curves_dir, f"{model}_{method}")
            summaries[method] = summary
            logger.info("%s: AUROC %.4f, AUCPR %.4f", method, summary["auroc"], summary["aucpr"])
    finally:
        if scorer.client is not None:
            scorer.client.close()

    table = crear_dataframe_metricas(summaries)
    print(render_table(table))
    if args.xlsx:
        export_excel({"metrics": table}, args.xlsx)
    if args.json:
        report = {
            "model": model,
            "split": args.split,
            "seed": config.seed,
            "threshold": config.threshold,
            "methods": summaries,
        }
        emit(to_json_text(report), args.json)
    return 0
