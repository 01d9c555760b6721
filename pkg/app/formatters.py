# app/formatters.py
"""
Output Formatters

Turn coefficients, matrices and reports into the CLI's JSON / CSV output.

Output rules:
1. Determinism - identical input gives byte-identical output
2. Exactness - exact values as "p/q" strings next to float approximations
3. Precision - floats at a fixed number of significant digits
"""

import io
import json
from typing import Any, Dict, List

import pandas as pd
from pydantic import BaseModel

from app.config import get_settings
from app.exact import SignedSqrtRational, fraction_str, ssr_to_float
from app.prob import BistochasticMatrix
from app.schemas import (
    CoefficientRecord,
    EquivalenceReport,
    InequalityReport,
    OrthogonalityReport,
    SweepReport,
)


def float_format() -> str:
    return f"%.{get_settings().float_digits}g"


def format_float(value: float) -> str:
    return float_format() % value


def coefficient_record(kind: str, label: str, value: SignedSqrtRational) -> CoefficientRecord:
    return CoefficientRecord(
        kind=kind,
        label=label,
        sign=value.sign,
        radicand=value.radicand,
        exact=value.to_string(),
        value=ssr_to_float(value),
    )


# =============================================================================
# JSON
# =============================================================================

def render_json(payload: Any) -> str:
    """One top-level object, keys in model field order"""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def matrix_payload(matrix: BistochasticMatrix) -> Dict[str, Any]:
    return {
        "j1": str(matrix.j1),
        "j2": str(matrix.j2),
        "N": matrix.N,
        "rows": [f"{m1}:{m2}" for (m1, m2), _ in matrix.to_rows()],
        "columns": [f"{j}:{m}" for j, m in matrix.col_index],
        "entries": [[fraction_str(p) for p in row] for _, row in matrix.to_rows()],
    }


# =============================================================================
# CSV
# =============================================================================

def _to_csv(frame: pd.DataFrame, index: bool = False) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=index, float_format=float_format(), lineterminator="\n")
    return buffer.getvalue()


def render_coefficient_csv(record: CoefficientRecord) -> str:
    frame = pd.DataFrame([{
        "label": record.label,
        "sign": record.sign,
        "radicand": fraction_str(record.radicand),
        "exact": record.exact,
        "value": record.value,
    }])
    return _to_csv(frame)


def render_matrix_csv(matrix: BistochasticMatrix) -> str:
    """Header of "j:m" labels, leading "m1:m2" labels, entries as "p/q" """
    frame = pd.DataFrame(
        [[fraction_str(p) for p in row] for _, row in matrix.to_rows()],
        index=pd.Index([f"{m1}:{m2}" for (m1, m2), _ in matrix.to_rows()], name="m1:m2"),
        columns=[f"{j}:{m}" for j, m in matrix.col_index],
    )
    return _to_csv(frame, index=True)


def render_sweep_csv(report: SweepReport) -> str:
    frame = pd.DataFrame(
        [(row.q, row.tsallis_information) for row in report.rows],
        columns=["q", "I_q"],
    )
    return _to_csv(frame)


def render_inequality_csv(report: InequalityReport) -> str:
    records: List[Dict[str, Any]] = []
    for column in report.columns:
        record = {
            "j": str(column.j),
            "m": str(column.m),
            "I": column.mutual_information,
            "subadditivity_margin": column.subadditivity_margin,
            "araki_lieb_margin": column.araki_lieb_margin,
        }
        for margin in column.tsallis_margins:
            record[f"tsallis_q={format_float(margin.q)}"] = margin.margin
        records.append(record)
    return _to_csv(pd.DataFrame(records))


def render_orthogonality_csv(report: OrthogonalityReport) -> str:
    frame = pd.DataFrame([{
        "j1": str(report.j1),
        "j2": str(report.j2),
        "passed": report.passed,
        "checked": report.checked,
        "worst_residual": fraction_str(report.worst_residual),
        "violations": len(report.violations),
    }])
    return _to_csv(frame)


def render_equivalence_csv(report: EquivalenceReport) -> str:
    rows: List[Dict[str, Any]] = [
        {"label": m.label, "status": "mismatch", "direct": m.direct, "via_hahn": m.via_hahn}
        for m in report.mismatches
    ]
    rows.extend({"label": label, "status": "skipped", "direct": "", "via_hahn": ""} for label in report.skipped)
    frame = pd.DataFrame(rows, columns=["label", "status", "direct", "via_hahn"])
    summary = (
        f"# checked={report.checked} matched={report.matched} flipped={report.flipped} "
        f"skipped={len(report.skipped)} hahn_orthogonality={report.hahn_orthogonality} "
        f"passed={report.passed}\n"
    )
    return summary + _to_csv(frame)
