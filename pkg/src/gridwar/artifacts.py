"""On-disk artifact formats: genomes, behavior models, replays, reports.

JSON artifacts carry a "format" field and round-trip byte-exactly;
replays are JSON lines; reports are CSV.  Writes go through a temp file
plus rename so a killed run never leaves a half-written artifact behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .modeling import ExtendedAnswerMatrix
from .strategy import AnswerMatrix, validate_matrix

GENOME_FORMAT = "answer-matrix-v1"
MODEL_FORMAT = "extended-answer-matrix-v1"


class ArtifactError(ValueError):
    pass


class MalformedArtifact(ArtifactError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def atomic_write(path: str | Path, data: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


def save_genome(path: str | Path, matrix: AnswerMatrix) -> None:
    atomic_write(path, _canonical({"format": GENOME_FORMAT, "actions": matrix.as_ints()}))


def load_genome(path: str | Path) -> AnswerMatrix:
    payload = _load_json(path)
    if payload.get("format") != GENOME_FORMAT:
        raise ArtifactError(f"{path}: expected format {GENOME_FORMAT!r}, got {payload.get('format')!r}")
    try:
        return validate_matrix(payload.get("actions", []))
    except ValueError as exc:
        raise ArtifactError(f"{path}: {exc}") from exc


def save_model(path: str | Path, model: ExtendedAnswerMatrix) -> None:
    atomic_write(path, _canonical({"format": MODEL_FORMAT, "counts": model.counts}))


def load_model(path: str | Path) -> ExtendedAnswerMatrix:
    payload = _load_json(path)
    if payload.get("format") != MODEL_FORMAT:
        raise ArtifactError(f"{path}: expected format {MODEL_FORMAT!r}, got {payload.get('format')!r}")
    try:
        return ExtendedAnswerMatrix(payload.get("counts"))
    except (TypeError, ValueError) as exc:
        raise ArtifactError(f"{path}: {exc}") from exc


def _load_json(path: str | Path) -> dict:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"{path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ArtifactError(f"{path}: expected a JSON object")
    return payload


def load_replay(path: str | Path) -> list[dict]:
    """Parse a JSONL replay; raises MalformedArtifact with the 1-based
    line number of the first bad line."""
    turns = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                turn = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedArtifact(f"{path}:{line_no}: {exc}", line=line_no) from exc
            if not isinstance(turn, dict) or "turn" not in turn or "events" not in turn:
                raise MalformedArtifact(
                    f"{path}:{line_no}: replay lines need 'turn' and 'events'", line=line_no
                )
            turns.append(turn)
    return turns


REPORT_COLUMNS = [
    "map", "algorithm", "games", "vp_win", "hp_win", "draws",
    "avg_hp_death", "avg_vp_death", "avg_mov", "avg_time_s",
]


def report_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in REPORT_COLUMNS})
    return buf.getvalue()


def save_report(path: str | Path, rows: list[dict]) -> None:
    atomic_write(path, report_to_csv(rows))


def load_report(path: str | Path) -> list[dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactError(f"{path}: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != REPORT_COLUMNS:
        raise ArtifactError(f"{path}: unexpected report columns {reader.fieldnames}")
    return list(reader)


def save_jsonl(path: str | Path, records: list[dict]) -> None:
    atomic_write(path, "".join(
        json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in records
    ))


# kind-dispatched variants for callers that treat artifacts uniformly
_SAVERS = {"genome": save_genome, "model": save_model,
           "replay": save_jsonl, "report": save_report}
_LOADERS = {"genome": load_genome, "model": load_model,
            "replay": load_replay, "report": load_report}


def save_artifact(kind: str, path: str | Path, value) -> None:
    if kind not in _SAVERS:
        raise ArtifactError(f"unknown artifact kind {kind!r}")
    _SAVERS[kind](path, value)


def load_artifact(kind: str, path: str | Path):
    if kind not in _LOADERS:
        raise ArtifactError(f"unknown artifact kind {kind!r}")
    return _LOADERS[kind](path)


def load_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise MalformedArtifact(f"{path}:{line_no}: {exc}", line=line_no) from exc
    return records
