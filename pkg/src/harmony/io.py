"""State files (JSON with explicit [re, im] pairs) and CSV reports."""

import csv
import datetime as _dt
import io as _io
import json
from typing import Iterable, Optional, TextIO

import numpy as np

from .errors import HarmonyError
from .states import DensityMatrix

FORMAT_VERSION = "1.0"


class StateFileError(HarmonyError, ValueError):
    """Malformed state file; the message names the offending line or field."""


def _num(x) -> str:
    # repr of a float is the shortest string that parses back to the same double
    return repr(float(x))


def dumps_state(mat, label: Optional[str] = None) -> str:
    mat = np.asarray(mat, dtype=complex)
    dim = mat.shape[0]
    n_qubits = dim.bit_length() - 1
    rows = []
    for row in mat:
        pairs = ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row)
        rows.append(f"    [{pairs}]")
    head = [f'  "format_version": "{FORMAT_VERSION}"', f'  "n_qubits": {n_qubits}']
    if label is not None:
        head.append(f'  "label": {json.dumps(label)}')
    return "{\n" + ",\n".join(head) + ',\n  "matrix": [\n' + ",\n".join(rows) + "\n  ]\n}\n"


def write_state(path, rho, label: Optional[str] = None):
    mat = rho.mat if isinstance(rho, DensityMatrix) else rho
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_state(mat, label))


def parse_state_matrix(text: str):
    """Parse state-file text into ``(matrix, n_qubits, label)`` without validating physics."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise StateFileError("top level: expected a JSON object")
    for key in ("format_version", "n_qubits", "matrix"):
        if key not in doc:
            raise StateFileError(f"field '{key}': missing")
    if not isinstance(doc["format_version"], str):
        raise StateFileError("field 'format_version': expected a string")
    if doc["format_version"].split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise StateFileError(f"field 'format_version': unsupported version {doc['format_version']!r}")
    n = doc["n_qubits"]
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= 3:
        raise StateFileError("field 'n_qubits': expected an integer in 1..3")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise StateFileError("field 'label': expected a string")
    dim = 2 ** n
    rows = doc["matrix"]
    if not isinstance(rows, list) or len(rows) != dim:
        raise StateFileError(f"field 'matrix': expected {dim} rows for n_qubits={n}")
    mat = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise StateFileError(f"field 'matrix[{i}]': expected {dim} entries")
        for j, pair in enumerate(row):
            ok = (isinstance(pair, list) and len(pair) == 2
                  and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair))
            if not ok:
                raise StateFileError(f"field 'matrix[{i}][{j}]': expected an [re, im] number pair")
            mat[i, j] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(mat)):
        raise StateFileError("field 'matrix': entries must be finite")
    return mat, n, label


def read_state(path, tol=None):
    """Load and validate a state file. Returns ``(DensityMatrix, label)``.

    Raises StateFileError for structural problems and InvalidState when the
    matrix is not a density matrix.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror}") from None
    mat, n, label = parse_state_matrix(text)
    kw = {} if tol is None else {"tol": tol}
    return DensityMatrix(mat, n_qubits=n, **kw), label


# --- reports ----------------------------------------------------------------

COLUMN_DOCS = {
    "label": "state label from the input file or generator",
    "sample": "Monte Carlo sample index (also its RNG stream)",
    "rank": "rank of the sampled state",
    "pivot": "qubit playing X in the three-qubit split",
    "harmony": "max{0, -disharmony}",
    "disharmony": "polynomial-route disharmony",
    "concurrence": "max{0, l1-l2-l3-l4}",
    "eof": "entanglement of formation (nats, or bits with --base2)",
    "purity_a": "tr(rho_A^2) of the first qubit",
    "lambda1": "largest square-root eigenvalue of rho*rho_tilde",
    "lambda2": "second lambda",
    "lambda3": "third lambda",
    "lambda4": "smallest lambda",
    "lambda_sum": "sum of the four lambdas",
    "route_discrepancy": "max pairwise gap among the three disharmony routes",
    "harmony_in_range": "1 if 0 <= harmony <= 1 as computed",
    "envelope_lo_excess": "C^4 - H (must be <= tol)",
    "envelope_hi_excess": "H - C(2+C)^3/27 (must be <= tol)",
    "dominance_excess": "H - C (must be <= tol)",
    "h_xy": "harmony of the XY marginal",
    "h_xz": "harmony of the XZ marginal",
    "h_x_yz": "(4 det rho_X)^2 for pure inputs",
    "residual_pure": "h_x_yz - h_xy - h_xz",
    "corollary_lhs": "h_xy^2 + h_xz^2",
    "decomposition_bound": "sampled upper bound on min sum p sqrt(H_X(YZ))",
    "proof_chain_excess": "max over XY, XZ of H - tr(rho rho_tilde)^2",
    "tangle_identity_gap": "|tr(rho_XY rho~_XY) + tr(rho_XZ rho~_XZ) - 4 det rho_X|",
    "small_lambda_max": "largest lambda3/lambda4 over both marginals",
    "trial": "verification trial index",
    "closed_form_eof": "EoF from the concurrence formula",
    "searched_eof": "best decomposition average entropy found",
    "gap": "searched_eof - closed_form_eof",
    "max_reconstruction_error": "max entrywise |sum p|phi><phi| - rho|",
    "x": "nonconvexity family parameter",
    "route": "benchmark route",
    "batch_size": "states per batch",
    "repetitions": "timed passes over the batch",
    "mean_ns": "mean wall time per state (ns)",
    "median_ns": "median wall time per state (ns)",
    "p95_ns": "95th percentile wall time per state (ns)",
    "correctness_max_discrepancy": "route disagreement on the 1% check sample",
    "polynomial_faster": "1 if the polynomial route mean beat the eigenvalue route",
    "row": "'sample' for per-sample rows, 'summary' for the final row",
    "check": "property name (summary rows)",
    "worst": "worst excess observed for the check",
    "tolerance": "tolerance the excess is compared against",
    "violations": "number of samples exceeding the tolerance",
}


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class ReportWriter:
    """CSV writer that emits '#'-prefixed metadata, column docs, then one header line.

    Only the ``# timestamp:`` line varies between identical runs.
    """

    def __init__(self, fh: TextIO, metadata: dict, timestamp: bool = True, columns=None):
        self.fh = fh
        self.fixed_columns = columns
        self.metadata = dict(metadata)
        self.timestamp = timestamp
        self._writer = None
        self._columns = None

    def _start(self, columns):
        for k, v in self.metadata.items():
            self.fh.write(f"# {k}: {v}\n")
        if self.timestamp:
            now = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
            self.fh.write(f"# timestamp: {now}\n")
        for c in columns:
            self.fh.write(f"# column {c}: {COLUMN_DOCS.get(c, '')}\n")
        self._columns = list(columns)
        self._writer = csv.writer(self.fh, lineterminator="\n")
        self._writer.writerow(self._columns)

    def write(self, row: dict):
        if self._writer is None:
            self._start(self.fixed_columns or row.keys())
        self._writer.writerow([_cell(row.get(c)) for c in self._columns])
        self.fh.flush()

    def write_all(self, rows: Iterable[dict]):
        for r in rows:
            self.write(r)


def read_report(text: str):
    """Parse a report back into ``(metadata, rows)``; cells stay strings."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# ") and ": " in line:
            k, v = line[2:].split(": ", 1)
            meta[k] = v
        elif line:
            body.append(line)
    rows = list(csv.DictReader(_io.StringIO("\n".join(body))))
    return meta, rows


def strip_timestamp(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.startswith("# timestamp:"))
