import argparse
import json
import logging
import sys
import traceback
from typing import List, Optional

from commands import COMMANDS
from config.log import configure_logging
from config.settings import resolve_run_config
from models.errors import GateError

logger = logging.getLogger("honest_gate")


# Manejo de errores global para lo que no es GateError
def handle_exception(exc_type, exc_value, exc_traceback):
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
        return
    sys.stderr.write(f"Error no manejado: {exc_value}\n")
    sys.stderr.write("".join(traceback.format_exception(exc_type, exc_value, exc_traceback)))


sys.excepthook = handle_exception


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="honest-gate",
        description="Estimar si un LLM resuelve un requerimiento de código y rechazar cuando no",
    )
    parser.add_argument("--config", help="archivo de configuración con líneas clave = valor")
    parser.add_argument("--print-config", action="store_true", help="imprimir la configuración resuelta y salir")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING o ERROR")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int, help="hilos del análisis por programa")
    parser.add_argument("--endpoint", help="URL base del endpoint compatible con OpenAI")
    parser.add_argument("--model", help="modelo a muestrear o a evaluar")
    parser.add_argument("--audit-log", dest="audit_log", help="registrar peticiones y respuestas (JSON Lines)")
    parser.add_argument("--subtree-height", dest="subtree_height", type=int)

    embedding = parser.add_argument_group("embeddings")
    embedding.add_argument("--embedding-kind", dest="embedding_kind", choices=("local-hashed", "remote"))
    embedding.add_argument("--embedding-endpoint", dest="embedding_endpoint")
    embedding.add_argument("--embedding-model", dest="embedding_model")
    embedding.add_argument("--embedding-dimension", dest="embedding_dimension", type=int)

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for module in COMMANDS.values():
        module.add_parser(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_run_config(vars(args), args.config)
        configure_logging(config.log_level)
        if args.print_config:
            print(json.dumps(config.to_public_dict(), indent=2, sort_keys=True))
            return 0
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        logger.debug("running %s with seed %d", args.command, config.seed)
        return COMMANDS[args.command].run(args, config)
    except GateError as e:
        sys.stderr.write(f"{type(e).__name__}: {e}\n")
        return e.exit_code
    except FileNotFoundError as e:
        sys.stderr.write(f"FileNotFoundError: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
