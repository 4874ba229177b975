"""AvgSim promedio de requerimientos passed frente a failed"""

from commands.common import add_data_arguments, add_weights_argument, build_scorer, load_joined
from components.pipeline import motivation_table
from config.settings import RunConfig
from models.errors import InvalidConfig
from utils.formatters import crear_dataframe_motivacion, render_table


def add_parser(subparsers):
    parser = subparsers.add_parser("motivate", help="comparar la similitud de passed y failed por modalidad")
    add_data_arguments(parser, default_split="all")
    add_weights_argument(parser)
    return parser


def run(args, config: RunConfig) -> int:
    _, joined, _ = load_joined(args, config)
    if not joined:
        raise InvalidConfig(f"no benchmark sample on split {args.split!r} joins the archive")
    scorer = build_scorer(config, args.weights)
    table = motivation_table(scorer.modality_means(joined), [j.label for j in joined], scorer.weights)
    print(render_table(crear_dataframe_motivacion(table)))
    return 0
