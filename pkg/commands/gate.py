"""Mostrar o rechazar cada requerimiento según su reporte de confianza"""

import json

from components.gate import decide
from config.settings import RunConfig
from models.base_model import read_records
from models.benchmark import load_benchmark
from models.errors import IdMismatch
from models.sample_archive import load_samples
from models.similarity import ConfidenceReport


def add_parser(subparsers):
    parser = subparsers.add_parser("gate", help="decidir Show o Refuse por umbral")
    parser.add_argument("--report", required=True, help="reportes de confianza (JSON Lines)")
    parser.add_argument("--samples", required=True, help="archivo de muestras con los programas")
    parser.add_argument("--benchmark", help="benchmark para completar el lenguaje de las entradas")
    parser.add_argument("--threshold", type=float, help="umbral T; se muestra solo si confidence > T")
    parser.add_argument("--top", type=int, help="mostrar solo los primeros K programas")
    parser.add_argument("--refusal-message", dest="refusal_message")
    return parser


def run(args, config: RunConfig) -> int:
    known = {s.id: s.language for s in load_benchmark(args.benchmark)} if args.benchmark else {}
    archive = {}
    for entry in load_samples(args.samples):
        if not config.model or entry.model == config.model:
            archive[(entry.id, entry.model)] = entry

    for line_number, record in read_records(args.report):
        report = ConfidenceReport.from_dict(record)
        model = record.get("model")
        entry = archive.get((report.requirement_id, model))
        if entry is None:
            matches = [e for (rid, _), e in archive.items() if rid == report.requirement_id]
            if len(matches) != 1:
                raise IdMismatch(f"line {line_number}: no archive entry for {report.requirement_id!r}")
            entry = matches[0]
        samples = entry.to_sample_set(known.get(entry.id))
        decision = decide(report, samples, config.threshold, config.refusal_message, args.top)
        print(json.dumps(decision.to_dict(), sort_keys=True, ensure_ascii=False))
    return 0
