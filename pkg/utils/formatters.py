import json
import math
from pathlib import Path
from typing import Any, List, Mapping, Sequence

import pandas as pd

from models.base_model import PathLike, to_jsonable
from models.evaluation import EvalCurves, SweepPoint


def formatear_metrica(value: Any, decimals: int = 4) -> str:
    """Número con decimales fijos; NaN y None como 'n/a'"""
    if value is None:
        return "n/a"
    if isinstance(value, float):
        if math.isnan(value):
            return "n/a"
        return f"{value:.{decimals}f}"
    return str(value)


def _json_safe(value: Any) -> Any:
    value = to_jsonable(value)
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def to_json_text(data: Any) -> str:
    """JSON con claves ordenadas; NaN se emite como null"""
    return json.dumps(_json_safe(data), indent=2, sort_keys=True, ensure_ascii=False)


def crear_dataframe_metricas(summaries: Mapping[str, Mapping[str, Any]], key: str = "Method") -> pd.DataFrame:
    """
    Crear DataFrame de métricas por método (o variante)

    Args:
        summaries: Resumen por nombre, con claves samples, passed, auroc, aucpr
        key: Título de la columna de nombres

    Returns:
        DataFrame con una fila por nombre, en orden de inserción
    """
    if not summaries:
        return pd.DataFrame()
    rows = []
    for name, summary in summaries.items():
        row = {key: name}
        row["Samples"] = summary.get("samples")
        row["Passed"] = summary.get("passed")
        row["AUROC"] = summary.get("auroc")
        row["AUCPR"] = summary.get("aucpr")
        if "k" in summary:
            row["k"] = summary["k"]
        rows.append(row)
    return pd.DataFrame(rows)


def crear_dataframe_motivacion(table: Mapping[str, Mapping[str, float]]) -> pd.DataFrame:
    """AvgSim promedio de passed y failed por modalidad"""
    rows = [
        {"Modality": name, "Passed": values["passed"], "Failed": values["failed"], "Gap": values["passed"] - values["failed"]}
        for name, values in table.items()
    ]
    return pd.DataFrame(rows)


def crear_dataframe_barrido(sweep: Sequence[SweepPoint]) -> pd.DataFrame:
    return pd.DataFrame(
        [(p.threshold, p.shown_correct, p.shown_erroneous) for p in sweep],
        columns=["threshold", "shown_correct", "shown_erroneous"],
    )


def render_table(df: pd.DataFrame, decimals: int = 4) -> str:
    """Tabla de texto alineada para la terminal"""
    if df.empty:
        return "(no rows)"
    formatted = df.copy()
    for column in formatted.columns:
        if pd.api.types.is_float_dtype(formatted[column]):
            formatted[column] = formatted[column].apply(lambda x: formatear_metrica(x, decimals))
    return formatted.to_string(index=False)


def export_curves(curves: EvalCurves, directory: PathLike, prefix: str) -> List[Path]:
    """
    Exportar curvas ROC, PR y barrido como CSV de puntos

    Returns:
        Rutas escritas
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    frames = {
        "roc": pd.DataFrame(curves.roc, columns=["fpr", "tpr"]),
        "pr": pd.DataFrame(curves.pr, columns=["recall", "precision"]),
    }
    if curves.sweep:
        frames["sweep"] = crear_dataframe_barrido(curves.sweep)
    written = []
    for name, df in frames.items():
        path = directory / f"{prefix}_{name}.csv"
        df.to_csv(path, index=False)
        written.append(path)
    return written


def export_excel(sheets: Mapping[str, pd.DataFrame], path: PathLike) -> None:
    """Exportar varias tablas a un libro XLSX, una hoja por tabla"""
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        for name, df in sheets.items():
            # Excel limita los nombres de hoja a 31 caracteres
            df.to_excel(writer, index=False, sheet_name=name[:31])
