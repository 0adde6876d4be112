"""Dense symmetric matrix kernel used by the Lyapunov-side numerics.

Everything here is 64-bit floating point.  The guarantees that matter
downstream: quadratic forms are exactly symmetric after construction,
pullbacks are symmetrized exactly, and eigenvalues come from a
backward-stable symmetric solver so positive-semidefiniteness checks
can quote a meaningful slack.
"""

from __future__ import annotations

import json

import numpy as np

__all__ = [
    "ASYMMETRY_TOL",
    "square_matrix",
    "QuadraticForm",
    "eval_form",
    "pullback",
    "symmetric_eigenvalues",
    "is_psd",
    "load_matrix_set",
    "save_matrix_set",
]

# relative asymmetry above this is an error, below is silently symmetrized
ASYMMETRY_TOL = 1e-12


def square_matrix(entries) -> np.ndarray:
    """Validate and return a finite square float matrix."""
    a = np.asarray(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


class QuadraticForm:
    """Symmetric matrix representing x -> x' Q x.

    Construction measures the relative asymmetry max|Q - Q'| / max|Q|;
    beyond ASYMMETRY_TOL it raises, below the matrix is replaced by its
    symmetric part.  The stored matrix is exactly symmetric.
    """

    __slots__ = ("matrix",)

    def __init__(self, entries):
        q = square_matrix(entries)
        scale = np.max(np.abs(q))
        gap = np.max(np.abs(q - q.T))
        if scale > 0 and gap > ASYMMETRY_TOL * scale:
            raise ValueError(
                f"matrix is asymmetric: relative gap {gap / scale:.3e}"
            )
        q = (q + q.T) / 2.0
        q.setflags(write=False)
        self.matrix = q

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"QuadraticForm({self.matrix.tolist()!r})"

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and np.array_equal(
            self.matrix, other.matrix
        )


def eval_form(q: QuadraticForm, x) -> float:
    """x' Q x."""
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape[0] != q.dim:
        raise ValueError(f"vector length {v.shape[0]} != form dim {q.dim}")
    return float(v @ q.matrix @ v)


def pullback(q: QuadraticForm, a) -> QuadraticForm:
    """The form x -> (Ax)' Q (Ax), i.e. the matrix A' Q A."""
    m = square_matrix(a)
    if m.shape[0] != q.dim:
        raise ValueError(f"matrix dim {m.shape[0]} != form dim {q.dim}")
    p = m.T @ q.matrix @ m
    return QuadraticForm((p + p.T) / 2.0)


def symmetric_eigenvalues(q: QuadraticForm) -> np.ndarray:
    """All eigenvalues, ascending.

    Backed by LAPACK's symmetric solver, which is backward stable: each
    returned value is exact for a matrix within O(eps)*||Q|| of Q, well
    inside the 1e-10*||Q|| accuracy this package relies on.
    """
    return np.linalg.eigvalsh(q.matrix)


def is_psd(q: QuadraticForm, slack: float = 0.0) -> bool:
    """True iff the smallest eigenvalue is >= -slack."""
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    return bool(symmetric_eigenvalues(q)[0] >= -slack)


# ---------------------------------------------------------------------------
# matrix-set files


def load_matrix_set(path) -> list[np.ndarray]:
    """Read a JSON matrix set and apply its optional scale factor.

    Format: {"dim": n, "matrices": [[row-major], ...], "scale": alpha}.
    Matrices are stored unscaled; the returned arrays are multiplied by
    alpha (default 1.0).
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return matrix_set_from_dict(data)


def matrix_set_from_dict(data: dict) -> list[np.ndarray]:
    dim = int(data["dim"])
    scale = float(data.get("scale", 1.0))
    out = []
    for flat in data["matrices"]:
        if len(flat) != dim * dim:
            raise ValueError(
                f"matrix has {len(flat)} entries, expected {dim * dim}"
            )
        a = square_matrix(np.asarray(flat, dtype=float).reshape(dim, dim))
        out.append(a * scale)
    return out


def save_matrix_set(path, matrices, scale: float | None = None) -> None:
    """Write matrices row-major as given; scale is recorded, not applied."""
    mats = [square_matrix(a) for a in matrices]
    if not mats:
        raise ValueError("matrix set needs at least one matrix")
    dim = mats[0].shape[0]
    if any(a.shape[0] != dim for a in mats):
        raise ValueError("matrices disagree on dimension")
    data: dict = {"dim": dim, "matrices": [a.reshape(-1).tolist() for a in mats]}
    if scale is not None:
        data["scale"] = float(scale)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")
