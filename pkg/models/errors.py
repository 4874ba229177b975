"""Jerarquía de errores de la aplicación.

Cada error lleva un ``exit_code`` estable que ``app.py`` devuelve al sistema:
2 uso/precondición, 3 red, 4 funcionalidad no soportada.
"""

from typing import Optional


class GateError(Exception):
    """Error base de la aplicación"""

    exit_code = 2


# Precondiciones y datos (exit 2)

class InvalidConfig(GateError):
    pass


class UnsupportedLanguage(GateError):
    pass


class MissingLanguage(GateError):
    """Ni la entrada del archivo ni el benchmark declaran el lenguaje"""


class CatastrophicParseFailure(GateError):
    pass


class DimensionMismatch(GateError):
    pass


class ZeroVector(GateError):
    pass


class DegenerateEmbedding(GateError):
    pass


class ComponentOutOfRange(GateError):
    pass


class InvalidWeights(GateError):
    pass


class TooFewSamples(GateError):
    pass


class DegenerateLabels(GateError):
    pass


class IdMismatch(GateError):
    pass


class EmptyInput(GateError):
    pass


class MissingLogprobs(GateError):
    pass


class EmptyCorpus(GateError):
    pass


class UnknownDocument(GateError):
    pass


class MalformedLine(GateError):
    """Línea inválida en un archivo JSON Lines"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DuplicateId(MalformedLine):
    pass


class UnknownLanguage(MalformedLine):
    pass


class JoinError(GateError):
    pass


class SingleClass(GateError):
    pass


class NoPositives(GateError):
    pass


class MissingProgramCounts(GateError):
    pass


class EmptyCompletion(GateError):
    pass


class TooFewUsable(GateError):
    pass


# Red (exit 3)

class NetworkError(GateError):
    exit_code = 3


class ProviderUnavailable(NetworkError):
    pass


class EndpointError(NetworkError):
    pass


class LogprobsUnavailable(NetworkError):
    pass


# No soportado (exit 4)

class UnimplementedBaseline(GateError):
    exit_code = 4
