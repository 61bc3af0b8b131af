"""
JSON interchange for matrices and spectral elements, CSV for pipeline tables.

Floats are written with ``repr``, the shortest decimal string that parses
back to the same double, so a write/read cycle is bit-exact. Complex
entries are ``[re, im]`` pairs in row-major order.
"""

import csv
import hashlib
import io
import json
import math
import warnings

import numpy as np

from .ii1 import SpectralElement
from .spectral import DEFAULT_TOL, check_hermitian, is_hermitian

SCHEMA_VERSION = "1"
# drift of sum(mu) from 1: silent below, renormalized with a warning up to, error above
MU_SILENT = 1e-9
MU_RENORMALIZE = 1e-6

PIPELINE_COLUMNS = (
    "n", "delta_q", "bound_q", "d", "bound_d", "max_norm", "norm_budget", "decomposition_pass",
)


class FormatError(ValueError):
    """Malformed or unsupported interchange file."""


def _check_schema(doc, kind):
    if not isinstance(doc, dict):
        raise FormatError(f"{kind} file must hold a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise FormatError(f"unsupported {kind} schema_version {version!r}")


def matrix_to_dict(M, hermitian=None):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise FormatError(f"expected a square matrix, got shape {M.shape}")
    if hermitian is None:
        hermitian = is_hermitian(M)
    flat = M.astype(complex).ravel()
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": int(M.shape[0]),
        "hermitian": bool(hermitian),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(doc, tol=DEFAULT_TOL):
    _check_schema(doc, "matrix")
    try:
        n = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"matrix file missing field: {exc}") from exc
    if n < 1 or len(entries) != n * n:
        raise FormatError(f"expected {n * n} entries for dim {n}, got {len(entries)}")
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in entries])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix entry: {exc}") from exc
    M = arr.reshape(n, n)
    if not np.any(M.imag):
        M = M.real.copy()
    if doc.get("hermitian", False):
        check_hermitian(M, tol)
    return M


def dumps(doc):
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_matrix(path, M, hermitian=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(matrix_to_dict(M, hermitian)))


def read_matrix(path, tol=DEFAULT_TOL):
    return matrix_from_dict(_load(path), tol)


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def element_to_dict(elem):
    return {
        "schema_version": SCHEMA_VERSION,
        "atoms": [{"alpha": a, "mu": w} for a, w in elem.atoms],
    }


def element_from_dict(doc):
    _check_schema(doc, "spectral element")
    try:
        atoms = [(float(a["alpha"]), float(a["mu"])) for a in doc["atoms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad atom list: {exc}") from exc
    if not atoms:
        raise FormatError("spectral element has no atoms")
    total = math.fsum(w for _, w in atoms)
    drift = abs(total - 1.0)
    if drift > MU_RENORMALIZE:
        raise FormatError(f"weights sum to {total!r}; drift {drift:.3e} exceeds {MU_RENORMALIZE}")
    if drift > MU_SILENT:
        warnings.warn(f"renormalizing weights (sum was {total!r})", stacklevel=2)
    if drift > 0:
        atoms = [(a, w / total) for a, w in atoms]
        total = math.fsum(w for _, w in atoms)
        if abs(total - 1.0) > 1e-12:
            raise FormatError("weights cannot be renormalized to sum to 1")
    try:
        return SpectralElement.from_atoms(atoms)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def write_element(path, elem):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(element_to_dict(elem)))


def read_element(path):
    return element_from_dict(_load(path))


def pipeline_csv(reports):
    """Render pipeline rows; output depends only on the report values."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PIPELINE_COLUMNS)
    for r in reports:
        writer.writerow([
            r.n, repr(float(r.delta_q)), repr(float(r.bound_q)), repr(float(r.d_output)),
            repr(float(r.bound_d)), repr(float(r.max_norm)), repr(float(r.norm_budget)),
            "true" if r.decomposition_pass else "false",
        ])
    return buf.getvalue()


def digest(paths):
    h = hashlib.sha256()
    for p in paths:
        with open(p, "rb") as fh:
            h.update(fh.read())
    return h.hexdigest()
