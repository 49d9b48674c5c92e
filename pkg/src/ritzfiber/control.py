"""Observability, controllability, and regularity diagnostics for single-input
single-output bordered systems, plus the unique bordering-completion solver.

A bordered extension [[B, c], [b^T, delta]] has a prescribed characteristic
polynomial exactly when the Markov parameters b^T B^{k-1} c match the series
coefficients of l - delta - target(l) / P_B(l); with delta fixed by the trace
difference, solving the first m of those equations yields the unique c
precisely when (B, b) is observable.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CompletionError, NumericalError
from .numcore import (
    DEFAULT_TOL,
    MonicPoly,
    as_complex_matrix,
    as_complex_vector,
    charpoly_from_eigs,
    eigenvalues,
    numeric_rank,
)

# relative coefficientwise bound on the completed characteristic polynomial
COMPLETION_RESIDUAL = 1e-7


@dataclass
class SISOSystem:
    """Continuous time-invariant SISO system x' = B x + c u, y = b^T x + d u."""

    b_matrix: np.ndarray
    row: np.ndarray
    col: np.ndarray
    delta: complex

    def __post_init__(self):
        self.b_matrix = as_complex_matrix(self.b_matrix)
        self.row = as_complex_vector(self.row)
        self.col = as_complex_vector(self.col)
        self.delta = complex(self.delta)
        m = self.b_matrix.shape[0]
        if len(self.row) != m or len(self.col) != m:
            raise ValueError("row and col must match the state dimension")

    def bordered(self):
        """The (m+1) x (m+1) matrix [[B, c], [b^T, delta]]."""
        m = self.b_matrix.shape[0]
        out = np.zeros((m + 1, m + 1), dtype=np.complex128)
        out[:m, :m] = self.b_matrix
        out[:m, m] = self.col
        out[m, :m] = self.row
        out[m, m] = self.delta
        return out


@dataclass
class JordanSpec:
    """Direct sum of lower Jordan blocks with pairwise distinct eigenvalues."""

    blocks: list = field(default_factory=list)

    def __post_init__(self):
        clean = []
        for d, size in self.blocks:
            size = int(size)
            if size < 1:
                raise ValueError("block sizes must be positive")
            clean.append((complex(d), size))
        values = [d for d, _ in clean]
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                if values[i] == values[j]:
                    raise ValueError("block eigenvalues must be pairwise distinct")
        self.blocks = clean

    @property
    def order(self):
        return sum(size for _, size in self.blocks)

    def to_matrix(self):
        """Assemble the block-diagonal matrix, ones on each block subdiagonal."""
        m = self.order
        out = np.zeros((m, m), dtype=np.complex128)
        pos = 0
        for d, size in self.blocks:
            for i in range(size):
                out[pos + i, pos + i] = d
                if i > 0:
                    out[pos + i, pos + i - 1] = 1.0
            pos += size
        return out

    def segment_ends(self):
        """0-based index of the last row of each block."""
        ends = []
        pos = 0
        for _, size in self.blocks:
            pos += size
            ends.append(pos - 1)
        return ends


def _krylov_rows(b_matrix, vec):
    """Rows vec^T B^{k-1}, k = 1..m, stacked as an m x m matrix."""
    m = b_matrix.shape[0]
    rows = np.zeros((m, m), dtype=np.complex128)
    v = vec.copy()
    for k in range(m):
        rows[k] = v
        v = b_matrix.T @ v
    return rows


def observable(b_matrix, b, tol=DEFAULT_TOL):
    """Kalman test: rank(b, B^T b, ..., (B^T)^{m-1} b) = m."""
    b_matrix = as_complex_matrix(b_matrix)
    b = as_complex_vector(b)
    if len(b) != b_matrix.shape[0]:
        raise ValueError("row vector length must match the matrix order")
    return numeric_rank(_krylov_rows(b_matrix, b), tol) == b_matrix.shape[0]


def controllable(b_matrix, c, tol=DEFAULT_TOL):
    """Kalman test: rank(c, B c, ..., B^{m-1} c) = m."""
    b_matrix = as_complex_matrix(b_matrix)
    c = as_complex_vector(c)
    if len(c) != b_matrix.shape[0]:
        raise ValueError("column vector length must match the matrix order")
    return numeric_rank(_krylov_rows(b_matrix.T, c), tol) == b_matrix.shape[0]


def is_regular(b_matrix, tol=DEFAULT_TOL):
    """Whether B is non-derogatory: its commutant has dimension exactly m."""
    b_matrix = as_complex_matrix(b_matrix)
    m = b_matrix.shape[0]
    ident = np.eye(m, dtype=np.complex128)
    syl = np.kron(ident, b_matrix) - np.kron(b_matrix.T, ident)
    return m * m - numeric_rank(syl, tol) == m


def markov_hankel(sys, n_rows):
    """N x N Hankel matrix of the Markov parameters b^T B^{i+j-2} c."""
    if not isinstance(sys, SISOSystem):
        raise ValueError("markov_hankel expects a SISOSystem")
    if n_rows < 1:
        raise ValueError("N must be >= 1")
    params = np.zeros(2 * n_rows - 1, dtype=np.complex128)
    v = sys.col.copy()
    for k in range(2 * n_rows - 1):
        params[k] = sys.row @ v
        v = sys.b_matrix @ v
    out = np.zeros((n_rows, n_rows), dtype=np.complex128)
    for i in range(n_rows):
        out[i] = params[i : i + n_rows]
    return out


def charpoly(b_matrix, tol=DEFAULT_TOL):
    """Characteristic polynomial det(lI - B) via the computed spectrum."""
    return charpoly_from_eigs(eigenvalues(b_matrix, tol))


def markov_parameters_from_target(p_b, target, delta, count):
    """Series coefficients g_k of l - delta - target(l) / P_B(l), k = 1..count.

    Obtained from the long-division remainder: with target = (l - delta) P_B
    + R the series equals -R / P_B, whose coefficients follow the linear
    recurrence g_k = -r_{m-k} - sum_{i<k} g_i p_{m-k+i}.
    """
    p = p_b.full()
    t = target.full()
    m = p_b.degree
    if target.degree != m + 1:
        raise ValueError(f"target degree must be {m + 1}, got {target.degree}")
    # remainder R = target - (l - delta) * P_B, degree <= m-1
    prod = np.zeros(m + 2, dtype=np.complex128)
    prod[1:] += p
    prod[:-1] -= delta * p
    rem = (t - prod)[:m]
    g = np.zeros(count, dtype=np.complex128)
    for k in range(1, count + 1):
        acc = -rem[m - k] if k <= m else 0.0 + 0.0j
        for i in range(1, k):
            idx = m - k + i
            if 0 <= idx <= m:
                acc -= g[i - 1] * p[idx]
        g[k - 1] = acc
    return g


def solve_unique_completion(b_matrix, b, target, tol=DEFAULT_TOL):
    """The unique column c giving [[B, c], [b^T, delta]] the target
    characteristic polynomial; delta is fixed by the trace difference.

    Requires (B, b) observable; the result is verified by recomputing the
    characteristic polynomial of the completed matrix coefficientwise.
    """
    b_matrix = as_complex_matrix(b_matrix)
    b = as_complex_vector(b)
    m = b_matrix.shape[0]
    if len(b) != m:
        raise ValueError("row vector length must match the matrix order")
    if not isinstance(target, MonicPoly):
        target = MonicPoly(target)
    if target.degree != m + 1:
        raise ValueError(f"target degree must be {m + 1}, got {target.degree}")
    if not observable(b_matrix, b, tol):
        raise CompletionError("no unique completion: the system is not observable")
    # trace of the bordered matrix is minus the coefficient of l^m
    delta = -target.coeffs[m] - np.trace(b_matrix)
    p_b = charpoly(b_matrix, tol)
    g = markov_parameters_from_target(p_b, target, delta, m)
    rows = _krylov_rows(b_matrix, b)
    try:
        c = np.linalg.solve(rows, g)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"observability matrix solve failed: {exc}") from None
    completed = SISOSystem(b_matrix, b, c, delta).bordered()
    achieved = charpoly(completed, tol)
    scale = max(1.0, float(np.max(np.abs(target.full()))))
    err = float(np.max(np.abs(achieved.full() - target.full())))
    if err > COMPLETION_RESIDUAL * scale:
        raise NumericalError(
            f"completion residual {err:.3e} exceeds {COMPLETION_RESIDUAL:.1e} "
            "(coefficientwise)"
        )
    return c


def jordan_observable_row(spec, row, tol=DEFAULT_TOL):
    """Observability of a row against a lower-Jordan block-diagonal matrix.

    True exactly when the row entry at the end of each Jordan segment is
    (numerically) nonzero.
    """
    if not isinstance(spec, JordanSpec):
        raise ValueError("jordan_observable_row expects a JordanSpec")
    row = as_complex_vector(row)
    if len(row) != spec.order:
        raise ValueError(f"row must have {spec.order} entries, got {len(row)}")
    top = float(np.max(np.abs(row))) if len(row) else 0.0
    thr = tol.coincide_rel * (top if top > 0.0 else 1.0)
    return all(abs(row[e]) > thr for e in spec.segment_ends())
