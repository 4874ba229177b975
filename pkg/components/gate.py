from typing import Optional

from models.decision import DEFAULT_REFUSAL_MESSAGE, GateDecision, Verdict
from models.errors import IdMismatch, InvalidConfig
from models.program import SampleSet
from models.similarity import ConfidenceReport


def decide(
    report: ConfidenceReport,
    samples: SampleSet,
    threshold: float,
    message: str = DEFAULT_REFUSAL_MESSAGE,
    top: Optional[int] = None,
) -> GateDecision:
    """
    Mostrar los programas o rechazar el requerimiento

    Args:
        report: Confianza estimada para el requerimiento
        samples: Programas muestreados del mismo requerimiento
        threshold: Umbral T en [0, 1]; se muestra solo si confidence > T
        message: Mensaje de rechazo
        top: Si se indica, mostrar solo los primeros K programas

    Returns:
        GateDecision
    """
    if report.requirement_id != samples.requirement_id:
        raise IdMismatch(
            f"report is for {report.requirement_id!r} but samples are for {samples.requirement_id!r}"
        )
    if not 0.0 <= threshold <= 1.0:
        raise InvalidConfig(f"threshold {threshold} outside [0, 1]")
    if top is not None and top < 1:
        raise InvalidConfig(f"top must be >= 1, got {top}")
    if not message:
        raise InvalidConfig("refusal message must be non-empty")

    if report.confidence > threshold:
        programs = samples.programs if top is None else samples.programs[:top]
        return GateDecision(report.requirement_id, Verdict.SHOW, report.confidence, threshold, tuple(programs))
    return GateDecision(report.requirement_id, Verdict.REFUSE, report.confidence, threshold, (), message)
