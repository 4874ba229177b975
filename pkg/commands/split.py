"""Partir un benchmark en entrenamiento y prueba con semilla fija"""

import dataclasses

from config.settings import RunConfig
from models.benchmark import Split, load_benchmark, save_benchmark, split_benchmark


def add_parser(subparsers):
    parser = subparsers.add_parser("split", help="asignar train/test a un benchmark")
    parser.add_argument("--benchmark", required=True)
    parser.add_argument("--ratio", type=float, default=0.5, help="fracción de entrenamiento (default 0.5)")
    parser.add_argument("--out", required=True)
    return parser


def run(args, config: RunConfig) -> int:
    samples = load_benchmark(args.benchmark)
    train, test = split_benchmark(samples, args.ratio, config.seed)
    assigned = {s.id: Split.TRAIN for s in train}
    assigned.update({s.id: Split.TEST for s in test})
    # Se conserva el orden original del archivo
    written = save_benchmark(args.out, [dataclasses.replace(s, split=assigned[s.id]) for s in samples])
    print(f"{written} sample(s) written to {args.out}: {len(train)} train, {len(test)} test (seed {config.seed})")
    return 0
