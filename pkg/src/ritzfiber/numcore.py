"""Self-contained complex linear-algebra and polynomial kernel.

Conventions used across the package:

* matrices are square ``numpy`` arrays of dtype complex128 ("x"),
* the canonical eigenvalue order is lexicographic on (real, imag),
* polynomial coefficient arrays are stored low degree first,
* ``||.||`` means the Frobenius norm unless stated otherwise.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import GenericityError, NumericalError

_EPS = float(np.finfo(np.float64).eps)

# documented cap on QR sweeps per eigenvalue before giving up
MAX_QR_SWEEPS = 60


@dataclass
class Tolerances:
    """Numerical thresholds used by every operation in the package.

    eig_rel      relative backward-error target of the eigensolver
    coincide_rel relative threshold below which two eigenvalues count as equal
    rank_rel     relative singular-value cutoff for rank decisions
    """

    eig_rel: float = 1e-10
    coincide_rel: float = 1e-8
    rank_rel: float = 1e-10

    def __post_init__(self):
        for name in ("eig_rel", "coincide_rel", "rank_rel"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"tolerance {name} must lie in (0, 1), got {v}")


DEFAULT_TOL = Tolerances()


def as_complex_matrix(x, square=True):
    """Validate and convert input to a finite complex128 2-D array (a copy)."""
    a = np.array(x, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def as_complex_vector(v):
    """Validate and convert input to a finite complex128 1-D array (a copy)."""
    a = np.array(v, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector entries must be finite (no NaN/Inf)")
    return a


def leading_submatrix(x, m):
    """Leading principal submatrix x(1:m, 1:m), returned as a copy."""
    x = as_complex_matrix(x)
    n = x.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"submatrix order m={m} out of range 1..{n}")
    return x[:m, :m].copy()


def canonical_sort(eigs):
    """Sort eigenvalues lexicographically by (real, imag)."""
    eigs = np.asarray(eigs, dtype=np.complex128)
    return eigs[np.lexsort((eigs.imag, eigs.real))]


def eigenvalues(x, tol=DEFAULT_TOL):
    """All eigenvalues of x with multiplicity, in canonical order.

    Householder reduction to upper Hessenberg form followed by single-shift
    (Wilkinson) QR iteration in complex arithmetic.  Each returned value is an
    exact eigenvalue of some x + D with ||D|| <= eig_rel * ||x||.
    """
    x = as_complex_matrix(x)
    h = _kernels.hessenberg_reduce(x)
    # deflate well inside the promised backward error: near machine precision
    # at the default eig_rel, proportionally looser if the user relaxes it
    deflate = max(30.0 * _EPS, 1e-4 * tol.eig_rel)
    eigs, ok = _kernels.hessenberg_eigvalues(h, deflate, MAX_QR_SWEEPS)
    if not ok:
        raise NumericalError(
            f"QR iteration did not converge within {MAX_QR_SWEEPS} sweeps"
        )
    return canonical_sort(eigs)


def eigvec_last_one(x, mu, tol=DEFAULT_TOL):
    """Eigenvector of x for the eigenvalue mu, normalized to last entry 1.

    Inverse iteration: one LU back-solve from a fixed pseudo-random start and
    two refinement steps.  The residual ||(x - mu I) u|| is guaranteed at most
    eig_rel * ||x|| * ||u||; a last entry smaller than coincide_rel in relative
    size signals that the trailing principal submatrix shares the eigenvalue,
    which is reported as a genericity violation.
    """
    x = as_complex_matrix(x)
    m = x.shape[0]
    mu = complex(mu)
    xnorm = float(np.linalg.norm(x))
    if m == 1:
        if abs(x[0, 0] - mu) > max(tol.eig_rel * xnorm, tol.eig_rel):
            raise NumericalError(f"{mu} is not an eigenvalue of the 1x1 matrix")
        return np.ones(1, dtype=np.complex128)
    a = x - mu * np.eye(m, dtype=np.complex128)
    scale = xnorm + abs(mu)
    rng = np.random.default_rng(0x51A3)
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    v /= np.linalg.norm(v)
    jitter = 0.0
    for _ in range(3):
        try:
            w = np.linalg.solve(a + jitter * np.eye(m), v)
        except np.linalg.LinAlgError:
            # exactly singular shift: nudge the diagonal and retry
            jitter = 100.0 * _EPS * max(scale, 1.0)
            w = np.linalg.solve(a + jitter * np.eye(m), v)
        v = w / np.linalg.norm(w)
    residual = np.linalg.norm(a @ v)
    if residual > tol.eig_rel * max(xnorm, _EPS):
        raise NumericalError(
            f"inverse iteration residual {residual:.3e} exceeds "
            f"{tol.eig_rel:.1e} * ||x||"
        )
    if abs(v[-1]) < tol.coincide_rel * np.linalg.norm(v):
        raise GenericityError(
            "eigenvector has (numerically) vanishing last entry: the leading "
            f"submatrix of order {m - 1} shares the eigenvalue {mu}"
        )
    u = v / v[-1]
    u[-1] = 1.0
    return u


@dataclass
class MonicPoly:
    """Monic polynomial c_0 + c_1 l + ... + c_{d-1} l^{d-1} + l^d.

    ``coeffs`` stores only the d low-order coefficients; the leading
    coefficient is implicitly 1, so the degree equals ``len(coeffs)``.
    """

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0, np.complex128))

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128)).ravel()
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        self.coeffs = c

    @property
    def degree(self):
        return len(self.coeffs)

    def full(self):
        """All coefficients, low degree first, including the leading 1."""
        return np.append(self.coeffs, 1.0 + 0.0j)


def charpoly_from_eigs(eigs):
    """Monic polynomial with the given roots, by stable product expansion."""
    eigs = np.atleast_1d(np.asarray(eigs, dtype=np.complex128)).ravel()
    full = np.ones(1, dtype=np.complex128)
    for mu in eigs:
        nxt = np.zeros(len(full) + 1, dtype=np.complex128)
        nxt[1:] += full
        nxt[:-1] -= mu * full
        full = nxt
    return MonicPoly(full[:-1])


def _full_coeffs(p):
    if isinstance(p, MonicPoly):
        return p.full()
    c = np.atleast_1d(np.asarray(p, dtype=np.complex128)).ravel()
    return c


def poly_eval(p, z):
    """Evaluate a polynomial (MonicPoly or low-first coefficient array) at z."""
    c = _full_coeffs(p)
    acc = 0.0 + 0.0j
    for coeff in c[::-1]:
        acc = acc * z + coeff
    return acc


def poly_derivative(p):
    """Coefficient array (low degree first) of the derivative; non-monic."""
    c = _full_coeffs(p)
    if len(c) <= 1:
        return np.zeros(1, dtype=np.complex128)
    return c[1:] * np.arange(1, len(c), dtype=np.float64)


def poly_quotient_in_basis(target, basis):
    """Coefficients a_k with target = sum_k a_k * basis[k].

    ``basis`` must be monic polynomials of strictly increasing degree
    0, 1, ..., m-1, so the expansion is unique; the target degree must be
    at most m-1.
    """
    basis = list(basis)
    m = len(basis)
    for k, p in enumerate(basis):
        if not isinstance(p, MonicPoly) or p.degree != k:
            raise ValueError(f"basis element {k} must be a MonicPoly of degree {k}")
    work = _full_coeffs(target)
    while len(work) > 1 and work[-1] == 0.0:
        work = work[:-1]
    if len(work) > m:
        raise ValueError(
            f"target degree {len(work) - 1} too high for a basis of {m} polynomials"
        )
    work = np.concatenate([work, np.zeros(m - len(work), dtype=np.complex128)])
    out = np.zeros(m, dtype=np.complex128)
    for k in range(m - 1, -1, -1):
        out[k] = work[k]
        work[: k + 1] -= out[k] * basis[k].full()
    return out


def numeric_rank(a, tol=DEFAULT_TOL):
    """Rank of a matrix, singular values below rank_rel * s_max count as zero."""
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_rel * s[0]))
