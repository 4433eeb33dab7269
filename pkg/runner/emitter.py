"""
Trace Emitter

Writes per-stage traces, stage spectra and run reports.

Files (under <out>/<scenario>/):
- trace.csv   stage, frobenius_delta, distance_to_final, norm
- eigs.csv    stage, index, re, im
- trace.json  the same rows when the JSON format is requested
- report.json the RunReport

Numbers are written in scientific notation with 17 significant digits so
repeated runs produce identical files.
"""
import csv
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import ParamOutOfRangeError
from core.numerics import frobenius
from models.operators import as_matrix
from schemas.reports import ConvergenceReport, RunReport

logger = logging.getLogger(__name__)

NUMBER_FORMAT = "%.16e"
TRACE_COLUMNS = ("stage", "frobenius_delta", "distance_to_final", "norm")
EIGS_COLUMNS = ("stage", "index", "re", "im")


class TraceRow(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    stage: int
    frobenius_delta: float
    distance_to_final: float
    norm: float


class EigenRow(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    stage: int
    index: int
    re: float
    im: float


class TraceDocument(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    rows: list[TraceRow]
    eigenvalues: list[EigenRow]


def _fmt(value: float) -> str:
    return NUMBER_FORMAT % value


def trace_rows(report: ConvergenceReport, labels: Optional[Sequence[int]] = None) -> list[TraceRow]:
    """
    One row per stored stage

    The delta of stage 0 is nan; `labels` replaces the stage index (Cesaro
    traces are labelled by their averaging length).
    """
    stages = [as_matrix(m) for m in report.trajectory]
    if not stages:
        raise ParamOutOfRangeError("report has no stages to emit")
    labels = list(labels) if labels is not None else list(range(len(stages)))
    final = stages[-1]
    rows = []
    for index, matrix in enumerate(stages):
        delta = report.residual_history[index - 1] if 0 < index <= len(report.residual_history) else float("nan")
        with np.errstate(invalid="ignore", over="ignore"):
            distance = frobenius(matrix - final)
            norm = frobenius(matrix)
        rows.append(TraceRow(stage=labels[index], frobenius_delta=delta, distance_to_final=distance, norm=norm))
    return rows


def eigen_rows(report: ConvergenceReport, labels: Optional[Sequence[int]] = None) -> list[EigenRow]:
    """Sorted eigenvalues of every finite stage"""
    stages = [as_matrix(m) for m in report.trajectory]
    labels = list(labels) if labels is not None else list(range(len(stages)))
    rows = []
    for index, matrix in enumerate(stages):
        if not np.all(np.isfinite(matrix)):
            continue
        for k, value in enumerate(np.sort_complex(np.linalg.eigvals(matrix))):
            rows.append(EigenRow(stage=labels[index], index=k, re=float(value.real), im=float(value.imag)))
    return rows


def emit_trace(
    report: ConvergenceReport,
    path: Union[str, Path],
    labels: Optional[Sequence[int]] = None,
) -> Path:
    """
    Write the trace CSV for a report

    Raises:
        OSError: the file cannot be written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in trace_rows(report, labels):
            writer.writerow([row.stage, _fmt(row.frobenius_delta), _fmt(row.distance_to_final), _fmt(row.norm)])
    logger.debug("trace written to %s", path)
    return path


def emit_eigs(report: ConvergenceReport, path: Union[str, Path], labels: Optional[Sequence[int]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(EIGS_COLUMNS)
        for row in eigen_rows(report, labels):
            writer.writerow([row.stage, row.index, _fmt(row.re), _fmt(row.im)])
    return path


def emit_trace_json(report: ConvergenceReport, path: Union[str, Path], labels: Optional[Sequence[int]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = TraceDocument(rows=trace_rows(report, labels), eigenvalues=eigen_rows(report, labels))
    path.write_text(document.model_dump_json(indent=2), encoding="utf-8")
    return path


def emit_report(run: RunReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(run.model_dump_json(indent=2, by_alias=True), encoding="utf-8")
    return path
