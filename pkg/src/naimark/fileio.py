"""Structured-text (JSON) files for operators, states, counts and reports.

Every document carries ``"kind"`` and ``"version"``. Complex numbers are
``[re, im]`` pairs; floats are written with 17 significant digits so a
parse/serialize round trip reproduces them bit for bit. Serialization is
canonical (fixed key order, fixed layout), which makes files diffable.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOL
from .errors import FormatError
from .linalg import hermitian_defect

VERSION = 1


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite number {x}")
    if x == 0.0 and math.copysign(1.0, x) < 0:
        return "-0.0"
    return format(x, ".17g")


def _depth(v):
    if isinstance(v, list):
        return 1 + max((_depth(x) for x in v), default=0)
    if isinstance(v, dict):
        return 99
    return 0


def _dump(v, indent):
    pad = "  " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_dump(x, indent + 1)}' for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list):
        if _depth(v) <= 2:
            return "[" + ", ".join(_dump(x, indent) for x in v) + "]"
        items = [pad + "  " + _dump(x, indent + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if v is None:
        return "null"
    return _num(v)


def dumps(doc):
    return _dump(to_plain(doc), 0) + "\n"


def to_plain(v):
    """Convert numpy values, complex numbers and tuples to JSON-ready types."""
    if isinstance(v, dict):
        return {str(k): to_plain(x) for k, x in v.items()}
    if isinstance(v, np.ndarray):
        if np.iscomplexobj(v):
            return to_plain(np.stack([v.real, v.imag], axis=-1))
        return to_plain(v.tolist())
    if isinstance(v, (list, tuple)):
        return [to_plain(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.generic):
        return v.item()
    return v


def matrix_to_pairs(M):
    M = np.asarray(M, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


# -- parsing -----------------------------------------------------------------


def _load(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FormatError(f"{path}: no such file") from None
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not UTF-8 text ({exc})") from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed document: {exc}") from None


def _expect(cond, where, msg):
    if not cond:
        raise FormatError(f"{where}: {msg}")


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _header(doc, kind, where):
    _expect(isinstance(doc, dict), where, "top level must be an object")
    _expect(doc.get("kind") == kind, f"{where}.kind", f"expected {kind!r}, got {doc.get('kind')!r}")
    _expect(doc.get("version") == VERSION, f"{where}.version", f"expected {VERSION}, got {doc.get('version')!r}")


def _parse_matrix(raw, dim, where):
    _expect(isinstance(raw, list) and len(raw) == dim, where, f"expected {dim} rows")
    M = np.zeros((dim, dim), dtype=np.complex128)
    for r, row in enumerate(raw):
        _expect(isinstance(row, list) and len(row) == dim, f"{where}[{r}]", f"expected {dim} entries")
        for c, z in enumerate(row):
            at = f"{where}[{r}][{c}]"
            _expect(isinstance(z, list) and len(z) == 2, at, "expected an [re, im] pair")
            for part, x in zip(("re", "im"), z):
                _expect(_is_number(x), f"{at}.{part}", f"expected a number, got {x!r}")
            M[r, c] = complex(float(z[0]), float(z[1]))
    return M


@dataclass
class OperatorFile:
    dim: int
    names: list
    operators: list
    metadata: dict = field(default_factory=dict)
    kind: str = "operators"

    def to_doc(self):
        doc = {
            "kind": self.kind,
            "version": VERSION,
            "dim": int(self.dim),
            "operators": [
                {"name": n, "matrix": matrix_to_pairs(M)} for n, M in zip(self.names, self.operators)
            ],
        }
        if self.metadata:
            doc["metadata"] = dict(self.metadata)
        return doc

    def dumps(self):
        return dumps(self.to_doc())


def operator_file_from_doc(doc, where="$", kind="operators", hermitian_tol=DEFAULT_TOL.hermitian):
    _header(doc, kind, where)
    dim = doc.get("dim")
    _expect(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1, f"{where}.dim", "expected a positive integer")
    ops = doc.get("operators")
    _expect(isinstance(ops, list) and ops, f"{where}.operators", "expected a non-empty list")
    names, mats = [], []
    for i, entry in enumerate(ops):
        at = f"{where}.operators[{i}]"
        _expect(isinstance(entry, dict), at, "expected an object")
        name = entry.get("name")
        _expect(isinstance(name, str), f"{at}.name", "expected a string")
        M = _parse_matrix(entry.get("matrix"), dim, f"{at}.matrix")
        defect = hermitian_defect(M)
        _expect(
            defect <= hermitian_tol, at,
            f"operator {name!r} is not Hermitian (max asymmetry {defect:.3e} > {hermitian_tol:.1e})",
        )
        names.append(name)
        mats.append(M)
    meta = doc.get("metadata", {})
    _expect(isinstance(meta, dict), f"{where}.metadata", "expected an object")
    return OperatorFile(dim, names, mats, meta, kind)


def read_operator_file(path, kind="operators", hermitian_tol=DEFAULT_TOL.hermitian):
    doc, _ = _load(path)
    return operator_file_from_doc(doc, str(path), kind, hermitian_tol)


def parse_operator_file(path, hermitian_tol=DEFAULT_TOL.hermitian):
    """Observables stored in an operator file, in file order."""
    return read_operator_file(path, "operators", hermitian_tol).operators


def write_operator_file(path, operators, names=None, description=None, kind="operators"):
    operators = [np.asarray(M, dtype=np.complex128) for M in operators]
    names = names or [f"B{i}" for i in range(len(operators))]
    meta = {"description": description} if description else {}
    f = OperatorFile(operators[0].shape[0], list(names), operators, meta, kind)
    Path(path).write_text(f.dumps(), encoding="utf-8")
    return f


def read_state_file(path):
    f = read_operator_file(path, "state")
    _expect(len(f.operators) == 1, f"{path}.operators", "a state file holds exactly one operator")
    return f.operators[0]


def write_state_file(path, rho, description=None):
    return write_operator_file(path, [rho], ["rho"], description, kind="state")


def counts_doc(counts, n, seed, metadata=None):
    doc = {"kind": "counts", "version": VERSION, "k": len(counts), "n": int(n),
           "seed": None if seed is None else int(seed), "counts": [int(c) for c in counts]}
    if metadata:
        doc["metadata"] = metadata
    return doc


def read_counts_file(path):
    doc, _ = _load(path)
    where = str(path)
    _header(doc, "counts", where)
    counts = doc.get("counts")
    _expect(isinstance(counts, list) and counts, f"{where}.counts", "expected a non-empty list")
    for i, c in enumerate(counts):
        _expect(isinstance(c, int) and not isinstance(c, bool) and c >= 0,
                f"{where}.counts[{i}]", f"expected a non-negative integer, got {c!r}")
    _expect(doc.get("k") == len(counts), f"{where}.k", "does not match the length of counts")
    _expect(doc.get("n") == sum(counts), f"{where}.n", "does not match the sum of counts")
    return np.array(counts, dtype=np.int64), doc


def digest_files(paths):
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return "sha256:" + h.hexdigest()


def report_doc(report, inputs_digest, tolerances, tool_version):
    return {
        "kind": "report",
        "version": VERSION,
        "check": report.check,
        "inputs_digest": inputs_digest,
        "verdict": "PASS" if report.passed else "FAIL",
        "tool_version": tool_version,
        "tolerances": tolerances,
        "checks": [c.as_dict() for c in report.checks],
        "data": to_plain(report.data),
    }


def write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")
