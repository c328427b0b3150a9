"""Text formats: operator files, config files, CSV tables, metadata sidecars.

Operator files are plain text: the first line holds the dimension d, then d
lines each hold d whitespace-separated complex entries written as "a+bi"
(for example ``1+0i``, ``-0.5-2i``, ``0+1i``). Config files are simple
``key = value`` lines; ``#`` starts a comment, blank lines are ignored, and
list values use commas.
"""

from __future__ import annotations

import csv
import json
import re
import time
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .operators import HermitianOperator

_BARE_I = re.compile(r"(^|[+\-])i$")


def parse_complex(token: str, where: str = "") -> complex:
    """Parse one "a+bi" token; accepts bare reals and bare imaginaries."""
    s = token.strip().replace(" ", "")
    s = _BARE_I.sub(r"\g<1>1i", s)
    s = s.replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise ValidationError(f"cannot parse complex entry {token!r}{where}") from exc


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def load_operator_file(path) -> HermitianOperator:
    """Read a Hermitian operator from a text file, validating as it goes."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read operator file {path}: {exc}") from exc
    rows = [(idx + 1, ln.strip()) for idx, ln in enumerate(lines)]
    rows = [(no, ln) for no, ln in rows if ln and not ln.startswith("#")]
    if not rows:
        raise ValidationError(f"operator file {path} is empty")
    first_no, first = rows[0]
    try:
        dim = int(first)
    except ValueError as exc:
        raise ValidationError(
            f"{path}:{first_no}: expected the dimension, got {first!r}"
        ) from exc
    if dim < 1:
        raise ValidationError(f"{path}:{first_no}: dimension must be >= 1, got {dim}")
    if len(rows) - 1 != dim:
        raise ValidationError(
            f"{path}: expected {dim} matrix rows after the header, found {len(rows) - 1}"
        )
    matrix = np.zeros((dim, dim), dtype=complex)
    for r, (no, ln) in enumerate(rows[1:]):
        tokens = ln.split()
        if len(tokens) != dim:
            raise ValidationError(
                f"{path}:{no}: row has {len(tokens)} entries, expected {dim}"
            )
        for c, tok in enumerate(tokens):
            matrix[r, c] = parse_complex(tok, where=f" at {path}:{no}")
    try:
        return HermitianOperator(matrix)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def save_operator_file(path, op: HermitianOperator) -> None:
    path = Path(path)
    lines = [str(op.dim)]
    for row in op.matrix:
        lines.append(" ".join(format_complex(z) for z in row))
    path.write_text("\n".join(lines) + "\n")


def parse_config_file(path) -> dict[str, str]:
    """Read ``key = value`` pairs; later occurrences of a key win."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    out: dict[str, str] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{no}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def format_cell(value) -> str:
    """Full round-trip precision for floats; blanks for missing values."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path, header: list[str], rows: list[list]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def write_metadata(out_path, experiment: str, config: dict, seed: int, version: str) -> Path:
    """JSON sidecar next to the CSV; the timestamp lives only here."""
    meta_path = Path(str(out_path) + ".meta.json")
    payload = {
        "experiment": experiment,
        "config": {k: config[k] for k in sorted(config)},
        "seed": seed,
        "version": version,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    meta_path.write_text(json.dumps(payload, indent=2, default=str) + "\n")
    return meta_path
