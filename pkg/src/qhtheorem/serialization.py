"""File formats: channel interchange documents and run records.

Channel document (JSON)::

    {
      "schema": "qhtheorem.channel/1",
      "dim": 2,
      "kraus": [ [[[re, im], [re, im]], [[re, im], [re, im]]], ... ]
    }

Matrices are row-major nested arrays; each complex entry is ``[re, im]``.
The ``schema`` key is optional on input.
"""
from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from . import __version__
from .channels import QuantumChannel
from .scenarios import ExperimentReport, ExpansionResult

CHANNEL_SCHEMA = "qhtheorem.channel/1"
RECORD_SCHEMA = "qhtheorem.record/1"


class ChannelFileError(ValueError):
    """Channel document failed to parse; ``where`` locates the problem."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


def encode_matrix(m: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_entry(value, where: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise ChannelFileError(where, f"expected a [re, im] pair of numbers, got {json.dumps(value)}")
    if not all(math.isfinite(v) for v in value):
        raise ChannelFileError(where, "entry is not finite")
    return complex(value[0], value[1])


def decode_matrix(rows, dim: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ChannelFileError(where, f"expected {dim} rows")
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ChannelFileError(f"{where}[{i}]", f"expected {dim} entries (matrices must be square, dim {dim})")
        for j, value in enumerate(row):
            out[i, j] = _decode_entry(value, f"{where}[{i}][{j}]")
    return out


def dump_channel(channel: QuantumChannel) -> str:
    doc = {"schema": CHANNEL_SCHEMA, "dim": channel.dim,
           "kraus": [encode_matrix(k) for k in channel.kraus_ops]}
    return json.dumps(doc, indent=1)


def load_channel(text: str) -> QuantumChannel:
    """Parse a channel document. Trace preservation is *not* enforced here."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    if not isinstance(doc, dict):
        raise ChannelFileError("document", "top level must be an object")
    schema = doc.get("schema", CHANNEL_SCHEMA)
    if schema != CHANNEL_SCHEMA:
        raise ChannelFileError("schema", f"unsupported schema {schema!r}, expected {CHANNEL_SCHEMA!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ChannelFileError("dim", f"expected a positive integer, got {json.dumps(dim)}")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise ChannelFileError("kraus", "expected a non-empty array of matrices")
    ops = [decode_matrix(k, dim, f"kraus[{n}]") for n, k in enumerate(kraus)]
    return QuantumChannel(tuple(ops))


# ---------------------------------------------------------------------------
# run records
# ---------------------------------------------------------------------------

def _flatten_matrix(prefix: str, m: np.ndarray) -> Dict[str, float]:
    out = {}
    for (i, j), z in np.ndenumerate(np.asarray(m)):
        out[f"{prefix}_{i}{j}_re"] = float(z.real)
        out[f"{prefix}_{i}{j}_im"] = float(z.imag)
    return out


def report_record(report: ExperimentReport, expansion: Optional[ExpansionResult] = None,
                  timestamp: Optional[str] = None) -> Dict[str, Any]:
    """Flatten a report (and optional expansion) into one self-describing row."""
    rec: Dict[str, Any] = {
        "schema": RECORD_SCHEMA,
        "tool_version": __version__,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
        "scenario_id": report.scenario_id,
        "label": report.label,
        "sys_dim": report.sys_dim,
        "res_dim": report.res_dim,
        "p0": report.params.p0,
        "q0": report.params.q0,
        "eps": report.params.eps,
        "s_initial": report.s_initial,
        "s_final": report.s_final,
        "delta_s": report.delta_s,
        "unital": report.is_unital,
        "max_abs_defect_direct": report.unitality_direct.max_abs_defect,
        "max_abs_defect_commutator": report.unitality_commutator.max_abs_defect,
    }
    rec.update(_flatten_matrix("initial", report.initial_state.matrix))
    rec.update(_flatten_matrix("final", report.final_state.matrix))
    rec.update(_flatten_matrix("joint_final", report.joint_final.matrix))
    rec.update(_flatten_matrix("defect", report.unitality_direct.defect_matrix))
    for key in ("c1", "c2", "exact_diff", "expansion_diff", "residual"):
        rec[key] = getattr(expansion, key) if expansion is not None else None
    return rec


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_records(records: Iterable[Dict[str, Any]], fmt: str) -> str:
    """Render records as CSV (header + one row each) or JSON (array of objects)."""
    records = list(records)
    if fmt == "json":
        return json.dumps(records, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    fields: List[str] = []
    for rec in records:
        fields.extend(k for k in rec if k not in fields)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for rec in records:
        writer.writerow([_cell(rec.get(k)) for k in fields])
    return buf.getvalue()
