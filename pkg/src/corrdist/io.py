"""File formats: joint-table CSV, state JSON, hidden-variable model JSON, data CSV."""

import json

import numpy as np

from .bell import SETTINGS, LhvModel
from .errors import ValidationError
from .prob_core import as_joint_table
from .qubit_core import as_state


def format_sig(value, digits=9):
    """Decimal text with ``digits`` significant digits; NaN/None become empty."""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return f"{float(value):.{digits}g}"


def read_table_csv(path):
    """Joint table from CSV: one table row per line, '#' comments allowed."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(cell) for cell in line.split(",")])
            except ValueError as exc:
                raise ValidationError(f"{path}: {exc}") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValidationError(f"{path}: rows must be non-empty and of equal length")
    return as_joint_table(rows)


def write_table_csv(path, table):
    table = as_joint_table(table)
    with open(path, "w", newline="\n") as fh:
        for row in table:
            fh.write(",".join(format_sig(x, 17) for x in row) + "\n")


def state_to_json(rho):
    """Serialize a state as ``{"re": 4x4, "im": 4x4}`` with 17 significant digits."""
    rho = np.asarray(rho, dtype=complex)

    def grid(m):
        return "[" + ", ".join(
            "[" + ", ".join(f"{x:.17g}" for x in row) + "]" for row in m
        ) + "]"

    return '{"re": ' + grid(rho.real) + ', "im": ' + grid(rho.imag) + "}\n"


def state_from_json(text):
    try:
        obj = json.loads(text)
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise ValidationError(f"malformed state JSON: {exc}") from None
    if re.shape != (4, 4) or im.shape != (4, 4):
        raise ValidationError("state JSON must hold 4x4 're' and 'im' arrays")
    return as_state(re + 1j * im)


def write_state_json(path, rho):
    with open(path, "w", newline="\n") as fh:
        fh.write(state_to_json(rho))


def read_state_json(path):
    with open(path) as fh:
        return state_from_json(fh.read())


def model_to_dict(model):
    return {
        "lambda_weights": model.lambda_weights.tolist(),
        "conditionals": {k: model.conditionals[k].tolist() for k in SETTINGS},
    }


def model_from_dict(obj):
    try:
        return LhvModel(
            np.array(obj["lambda_weights"], dtype=float),
            {k: np.array(obj["conditionals"][k], dtype=float) for k in SETTINGS},
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed model JSON: missing {exc}") from None


def read_model_json(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except ValueError as exc:
            raise ValidationError(f"{path}: {exc}") from None
    return model_from_dict(obj)


def write_model_json(path, model):
    with open(path, "w", newline="\n") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def write_data_csv(path, header, rows, comments=()):
    """Numeric CSV: one header line, optional '#' comments, 9 significant digits."""
    with open(path, "w", newline="\n") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_sig(x) for x in row) + "\n")
