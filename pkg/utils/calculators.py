import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata
from sklearn.metrics import auc as trapezoid_area

from models.errors import EmptyInput, InvalidConfig, MissingProgramCounts, NoPositives, SingleClass
from models.evaluation import ConfusionResult, EvalCurves, ScoredSample, SweepPoint

PR_MODES = ("average-precision", "trapezoid")


def _arrays(scored: Sequence[ScoredSample]) -> Tuple[np.ndarray, np.ndarray]:
    scores = np.asarray([s.score for s in scored], dtype=np.float64)
    positives = np.asarray([s.positive for s in scored], dtype=bool)
    return scores, positives


def auroc_from_arrays(scores: np.ndarray, positives: np.ndarray) -> np.ndarray:
    """
    AUROC por estadístico de Mann-Whitney con rangos medios

    Args:
        scores: Arreglo (n,) o (n, g): g columnas de puntajes se evalúan a la vez
        positives: Arreglo booleano (n,)

    Returns:
        AUROC escalar o arreglo (g,)
    """
    positives = np.asarray(positives, dtype=bool)
    n_pos = int(positives.sum())
    n_neg = int(positives.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUROC needs at least one passed and one failed label")
    ranks = rankdata(scores, axis=0)
    rank_sum = ranks[positives].sum(axis=0)
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def auroc(scored: Sequence[ScoredSample]) -> float:
    """Área bajo la curva ROC; empates entre passed y failed cuentan 0.5"""
    scores, positives = _arrays(scored)
    return float(auroc_from_arrays(scores, positives))


def _threshold_counts(scores: np.ndarray, positives: np.ndarray):
    # Conteos acumulados de TP/FP en cada umbral distinto (orden descendente)
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = positives[order]
    tps = np.cumsum(sorted_pos)
    fps = np.cumsum(~sorted_pos)
    last_of_group = np.r_[np.diff(sorted_scores) != 0, True]
    return sorted_scores[last_of_group], tps[last_of_group], fps[last_of_group]


def pr_curve(scored: Sequence[ScoredSample]) -> List[Tuple[float, float]]:
    """Puntos (recall, precision) por umbral distinto, de mayor a menor puntaje"""
    scores, positives = _arrays(scored)
    n_pos = int(positives.sum())
    if n_pos == 0:
        raise NoPositives("precision-recall needs at least one passed label")
    _, tps, fps = _threshold_counts(scores, positives)
    return [(float(tp / n_pos), float(tp / (tp + fp))) for tp, fp in zip(tps, fps)]


def roc_curve(scored: Sequence[ScoredSample]) -> List[Tuple[float, float]]:
    """Puntos (FPR, TPR) por umbral distinto, comenzando en (0, 0)"""
    scores, positives = _arrays(scored)
    n_pos = int(positives.sum())
    n_neg = int(positives.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs at least one passed and one failed label")
    _, tps, fps = _threshold_counts(scores, positives)
    return [(0.0, 0.0)] + [(float(fp / n_neg), float(tp / n_pos)) for tp, fp in zip(tps, fps)]


def aucpr(scored: Sequence[ScoredSample], mode: str = "average-precision") -> float:
    """
    Área bajo la curva precision-recall

    Args:
        scored: Muestras puntuadas
        mode: "average-precision" (escalones; puntajes empatados forman un solo umbral)
              o "trapezoid" (interpolación lineal desde (0, 1))

    Returns:
        AUCPR en [0, 1]
    """
    if mode not in PR_MODES:
        raise InvalidConfig(f"pr mode must be one of {PR_MODES}, got {mode!r}")
    points = pr_curve(scored)
    if mode == "trapezoid":
        recalls = [0.0] + [r for r, _ in points]
        precisions = [1.0] + [p for _, p in points]
        return float(trapezoid_area(recalls, precisions))
    area = 0.0
    previous_recall = 0.0
    for recall, precision in points:
        area += (recall - previous_recall) * precision
        previous_recall = recall
    return float(area)


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else math.nan


def confusion(scored: Sequence[ScoredSample], threshold: float) -> ConfusionResult:
    """Matriz de confusión: se predice passed si score > threshold"""
    if not scored:
        raise EmptyInput("confusion needs at least one scored sample")
    tp = fp = tn = fn = 0
    for sample in scored:
        predicted = sample.score > threshold
        if predicted and sample.positive:
            tp += 1
        elif predicted:
            fp += 1
        elif sample.positive:
            fn += 1
        else:
            tn += 1
    tpr = _ratio(tp, tp + fn)
    return ConfusionResult(
        tp=tp, fp=fp, tn=tn, fn=fn,
        tpr=tpr,
        fpr=_ratio(fp, fp + tn),
        precision=_ratio(tp, tp + fp),
        recall=tpr,
    )


def indiscriminate_totals(scored: Sequence[ScoredSample]) -> Tuple[int, int]:
    """(correctos, erróneos) al mostrar todos los programas sin filtrar"""
    _require_counts(scored)
    correct = sum(s.programs_correct for s in scored)
    total = sum(s.programs_total for s in scored)
    return correct, total - correct


def _require_counts(scored: Sequence[ScoredSample]) -> None:
    missing = [s.id for s in scored if s.programs_correct is None or s.programs_total is None]
    if missing:
        raise MissingProgramCounts(f"{len(missing)} sample(s) lack program counts, e.g. {missing[0]!r}")


def threshold_sweep(scored: Sequence[ScoredSample], points: int = 100) -> List[SweepPoint]:
    """
    Barrido de umbrales equiespaciados sobre el rango de puntajes

    En cada umbral t se suman los programas correctos y erróneos de las muestras
    con score > t. El primer umbral se ubica justo debajo del mínimo para que el
    primer punto coincida con mostrar todo.
    """
    if not scored:
        raise EmptyInput("threshold sweep needs at least one scored sample")
    if points < 2:
        raise InvalidConfig("threshold sweep needs at least 2 points")
    _require_counts(scored)
    scores = np.asarray([s.score for s in scored], dtype=np.float64)
    correct = np.asarray([s.programs_correct for s in scored], dtype=np.int64)
    erroneous = np.asarray([s.programs_total - s.programs_correct for s in scored], dtype=np.int64)

    thresholds = np.linspace(scores.min(), scores.max(), points)
    thresholds[0] = np.nextafter(scores.min(), -np.inf)
    sweep = []
    for t in thresholds:
        shown = scores > t
        sweep.append(SweepPoint(float(t), int(correct[shown].sum()), int(erroneous[shown].sum())))
    return sweep


def build_curves(scored: Sequence[ScoredSample], sweep_points: int = 100) -> EvalCurves:
    """Curvas ROC, PR y barrido (este último solo si hay conteos de programas)"""
    has_counts = all(s.programs_correct is not None and s.programs_total is not None for s in scored)
    return EvalCurves(
        roc=roc_curve(scored),
        pr=pr_curve(scored),
        sweep=threshold_sweep(scored, sweep_points) if has_counts else [],
        indiscriminate=indiscriminate_totals(scored) if has_counts else None,
    )
