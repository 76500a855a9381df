"""Versioned text file formats.

JSON documents carry a top-level ``"schema"`` key.  Delimited-text files start
with ``# schema: <name>`` followed by optional ``# meta: <json>`` lines.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classifier import ClassifierModel
from .datagen import LabeledExample
from .dynamics import HamiltonianSpec, TransferMatrix
from .errors import SchemaError
from .gellmann import GeneratorBasis
from .states import DensityMatrix, ProbabilityVector

GGMMB = "ggmmb-v1"
PVEC = "pvec-v1"
RHO = "rho-v1"
HAMILTONIAN = "hamiltonian-v1"
TMAT = "tmat-v1"
WITNESS = "witness-v1"
MODEL = "model-v1"
DATASET = "dataset-v1"


def _pairs(m: np.ndarray) -> list:
    """Complex matrix as rows of [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _write_json(path, doc: dict):
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def _read_json(path, schema: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    found = doc.get("schema") if isinstance(doc, dict) else None
    if found != schema:
        raise SchemaError(f"{path}: expected schema {schema!r}, found {found!r}")
    return doc


def basis_to_dict(basis: GeneratorBasis) -> dict:
    return {
        "schema": GGMMB,
        "dim": basis.dim,
        "generators": [_pairs(g) for g in basis.generators],
        "eigenvalues": basis.eigenvalues.tolist(),
        "projectors": [[_pairs(p) for p in row] for row in basis.projectors],
    }


def save_basis(basis: GeneratorBasis, path=None):
    _write_json(path, basis_to_dict(basis))


def _complex(pairs) -> np.ndarray:
    a = np.asarray(pairs, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def load_basis_arrays(path) -> dict:
    doc = _read_json(path, GGMMB)
    return {
        "dim": doc["dim"],
        "generators": _complex(doc["generators"]),
        "eigenvalues": np.asarray(doc["eigenvalues"]),
        "projectors": _complex(doc["projectors"]),
    }


def save_density(rho: DensityMatrix, path=None):
    m = rho.matrix
    _write_json(path, {"schema": RHO, "dim": rho.dim, "re": m.real.tolist(), "im": m.imag.tolist()})


def load_density(path) -> DensityMatrix:
    doc = _read_json(path, RHO)
    return DensityMatrix(doc["dim"], np.asarray(doc["re"]) + 1j * np.asarray(doc["im"]))


def save_hamiltonian(h: HamiltonianSpec, path=None):
    m = h.matrix
    _write_json(path, {"schema": HAMILTONIAN, "dim": h.dim, "re": m.real.tolist(), "im": m.imag.tolist()})


def load_hamiltonian(path) -> HamiltonianSpec:
    doc = _read_json(path, HAMILTONIAN)
    return HamiltonianSpec(doc["dim"], np.asarray(doc["re"]) + 1j * np.asarray(doc["im"]))


def save_pvec(p: ProbabilityVector, path=None):
    _write_json(path, {"schema": PVEC, "dim": p.dim, "tuples": p.tuples.tolist()})


def load_pvec(path) -> ProbabilityVector:
    doc = _read_json(path, PVEC)
    return ProbabilityVector(doc["dim"], doc["tuples"])


def save_tmat(tm: TransferMatrix, path=None):
    _write_json(path, {"schema": TMAT, "dim": tm.dim, "rows": tm.entries.tolist()})


def load_tmat(path) -> TransferMatrix:
    doc = _read_json(path, TMAT)
    return TransferMatrix(doc["dim"], doc["rows"])


def save_witness(doc: dict, path=None):
    _write_json(path, {"schema": WITNESS, **doc})


def load_witness(path) -> dict:
    return _read_json(path, WITNESS)


def save_model(model: ClassifierModel, path=None):
    _write_json(
        path,
        {
            "schema": MODEL,
            "dim": model.dim,
            "features": model.features,
            "weights": model.weights.tolist(),
            "bias": model.bias,
            "metadata": model.metadata,
        },
    )


def load_model(path) -> ClassifierModel:
    doc = _read_json(path, MODEL)
    return ClassifierModel(doc["dim"], doc["weights"], doc["bias"], doc.get("features", "linear"), doc["metadata"])


def write_table(path, schema: str, header: list[str], rows, meta: dict | None = None, fmt: str = "%.10g"):
    """Comma-separated rows preceded by schema/meta comment lines."""
    lines = [f"# schema: {schema}"]
    if meta is not None:
        lines.append("# meta: " + json.dumps(meta, sort_keys=True))
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt % v if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def save_dataset(examples: list[LabeledExample], meta: dict, path=None):
    """One example per row: label, dim, flattened vector, gamma (lossless floats)."""
    if not examples:
        raise ValueError("refusing to write an empty dataset")
    size = examples[0].vector.flat.size
    header = ["label", "dim"] + [f"p{i}" for i in range(size)] + ["gamma"]
    rows = ([e.label, e.vector.dim, *map(float, e.vector.flat), float(e.gamma)] for e in examples)
    write_table(path, DATASET, header, rows, meta, fmt="%.17g")


def load_dataset(path) -> tuple[list[LabeledExample], dict]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != f"# schema: {DATASET}":
        raise SchemaError(f"{path}: expected '# schema: {DATASET}' header")
    meta = {}
    body = []
    for line in lines[1:]:
        if line.startswith("# meta: "):
            meta = json.loads(line[len("# meta: "):])
        elif line and not line.startswith("#"):
            body.append(line)
    examples = []
    for line in body[1:]:
        fields = line.split(",")
        label, dim = int(fields[0]), int(fields[1])
        examples.append(LabeledExample(ProbabilityVector(dim, [float(v) for v in fields[2:-1]]), label, float(fields[-1])))
    return examples, meta
