"""POVMs, measurement simulation, and tomographic structure.

A measurement is an ordered list of PSD matrices summing to the
identity; applying it to a state produces the outcome distribution
p_y = <mu_y, rho>.  Tomographic completeness (elements spanning the
real space of Hermitian matrices) is what makes that map injective;
``tomographic_map`` exposes the map and its pseudoinverse in a fixed
real coordinate system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import clean_probs
from .linalg import (
    PSD_TOL,
    as_density,
    as_hermitian,
    as_unitary,
    hermitian_part,
    hs_inner,
)

__all__ = [
    "POVM_SUM_TOL",
    "PVM_TOL",
    "COMPLETENESS_RTOL",
    "PINV_RCOND",
    "Measurement",
    "apply_measurement",
    "sample_outcome",
    "sample_outcomes",
    "basis_pvm",
    "standard_pvm",
    "hadamard_pvm",
    "is_pvm",
    "herm_coords",
    "herm_from_coords",
    "is_tomographically_complete",
    "canonical_complete",
    "TomographicMap",
    "tomographic_map",
]

POVM_SUM_TOL = 1e-9       # max-norm bound on sum(mu_y) - I
PVM_TOL = 1e-8            # idempotence / orthogonality bound for PVMs
COMPLETENESS_RTOL = 1e-8  # singular values below rtol * largest count as zero
PINV_RCOND = 1e-10


class Measurement:
    """POVM: ordered PSD elements over outcomes 0..len-1, summing to I."""

    __slots__ = ("elements",)

    def __init__(self, elements, validate: bool = True):
        elems = tuple(np.asarray(e, dtype=np.complex128) for e in elements)
        if not elems:
            raise ValueError("a measurement needs at least one element")
        dim = elems[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for i, e in enumerate(elems):
            if e.shape != (dim, dim):
                raise ValueError(f"element {i} has shape {e.shape}, expected {(dim, dim)}")
            if validate:
                e = as_hermitian(e, f"element {i}")
                wmin = float(np.linalg.eigvalsh(e)[0])
                if wmin < -PSD_TOL:
                    raise ValueError(f"element {i} is not PSD: min eigenvalue {wmin:.3e}")
            total += e
        dev = float(np.abs(total - np.eye(dim)).max())
        if dev > POVM_SUM_TOL:
            raise ValueError(f"elements do not sum to identity: max deviation {dev:.3e}")
        self.elements = elems

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, y: int) -> np.ndarray:
        return self.elements[y]

    def __iter__(self):
        return iter(self.elements)

    def approx_equal(self, other: "Measurement", tol: float = 1e-9) -> bool:
        if len(self) != len(other) or self.dim != other.dim:
            return False
        return all(
            float(np.abs(a - b).max()) <= tol for a, b in zip(self.elements, other.elements)
        )

    def to_json(self) -> dict:
        from .linalg import matrix_to_json

        return {
            "dim": self.dim,
            "elements": [matrix_to_json(e) for e in self.elements],
        }

    @classmethod
    def from_json(cls, obj) -> "Measurement":
        from .linalg import matrix_from_json

        try:
            elems = [matrix_from_json(e) for e in obj["elements"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed measurement JSON: {exc}") from exc
        return cls(elems)


def apply_measurement(mu: Measurement, rho) -> np.ndarray:
    """Outcome distribution p_y = <mu_y, rho>, cleaned of float noise."""
    rho = as_density(rho)
    if rho.shape[0] != mu.dim:
        raise ValueError(f"dimension mismatch: state {rho.shape[0]}, measurement {mu.dim}")
    return clean_probs([hs_inner(e, rho) for e in mu])


def _inverse_cdf(cum: np.ndarray, u):
    idx = np.searchsorted(cum, u, side="right")
    return np.minimum(idx, len(cum) - 1)


def sample_outcome(mu: Measurement, rho, rng=None) -> int:
    """Draw one outcome by inverse-CDF sampling of the outcome distribution."""
    rng = np.random.default_rng(rng)
    p = apply_measurement(mu, rho)
    return int(_inverse_cdf(np.cumsum(p), rng.random()))


def sample_outcomes(mu: Measurement, rho, size: int, rng=None) -> np.ndarray:
    """Vectorized inverse-CDF sampling of many outcomes at once."""
    rng = np.random.default_rng(rng)
    p = apply_measurement(mu, rho)
    return _inverse_cdf(np.cumsum(p), rng.random(size)).astype(np.int64)


def basis_pvm(U) -> Measurement:
    """Rank-1 projective measurement onto the columns of a unitary."""
    U = as_unitary(U)
    cols = [U[:, i : i + 1] for i in range(U.shape[0])]
    return Measurement([c @ c.conj().T for c in cols], validate=False)


def standard_pvm(n: int) -> Measurement:
    return basis_pvm(np.eye(n))


def hadamard_pvm() -> Measurement:
    """Qubit measurement in the basis (1, 1)/sqrt(2), (1, -1)/sqrt(2)."""
    H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return basis_pvm(H)


def is_pvm(mu: Measurement) -> bool:
    """True iff every element is a projector and distinct elements are orthogonal."""
    for i, e in enumerate(mu):
        if float(np.abs(e @ e - e).max()) > PVM_TOL:
            return False
        for j in range(i + 1, len(mu)):
            if float(np.abs(e @ mu[j]).max()) > PVM_TOL:
                return False
    return True


def herm_coords(X) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in a fixed orthonormal basis.

    Basis: diagonal units; (E_jk + E_kj)/sqrt(2) and i(E_jk - E_kj)/sqrt(2)
    for j < k.  The map is an isometry: <X, Y> = coords(X) . coords(Y).
    """
    X = as_hermitian(X)
    n = X.shape[0]
    j, k = np.triu_indices(n, k=1)
    upper = X[j, k]
    return np.concatenate(
        [X.diagonal().real, np.sqrt(2.0) * upper.real, np.sqrt(2.0) * upper.imag]
    )


def herm_from_coords(c, n: int) -> np.ndarray:
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (n * n,):
        raise ValueError(f"expected {n * n} coordinates, got shape {c.shape}")
    X = np.zeros((n, n), dtype=np.complex128)
    X[np.diag_indices(n)] = c[:n]
    j, k = np.triu_indices(n, k=1)
    m = len(j)
    upper = (c[n : n + m] + 1j * c[n + m :]) / np.sqrt(2.0)
    X[j, k] = upper
    X[k, j] = upper.conj()
    return X


def _coords_matrix(mu: Measurement) -> np.ndarray:
    return np.stack([herm_coords(e) for e in mu])


def is_tomographically_complete(mu: Measurement) -> bool:
    """True iff the elements span the real space of Hermitian matrices."""
    phi = _coords_matrix(mu)
    sv = np.linalg.svd(phi, compute_uv=False)
    rank = int(np.sum(sv > COMPLETENESS_RTOL * sv[0]))
    return rank == mu.dim**2


def canonical_complete(n: int) -> Measurement:
    """A tomographically complete POVM with exactly n^2 outcomes.

    Builds n^2 rank-1 PSD matrices spanning the Hermitian space (basis
    projectors plus symmetric and phased pair states), then normalizes
    by congruence with T^(-1/2) where T is their sum.  The congruence is
    a linear bijection on Hermitian matrices, so the span is preserved.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    eye = np.eye(n, dtype=np.complex128)
    raw = [np.outer(eye[k], eye[k].conj()) for k in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            v = eye[j] + eye[k]
            raw.append(np.outer(v, v.conj()) / 2.0)
            w = eye[j] + 1j * eye[k]
            raw.append(np.outer(w, w.conj()) / 2.0)
    T = hermitian_part(sum(raw))
    w, V = np.linalg.eigh(T)
    if float(w.min()) <= 0:
        raise ValueError("normalizer is not positive definite")
    T_isqrt = (V / np.sqrt(w)) @ V.conj().T
    return Measurement([hermitian_part(T_isqrt @ M @ T_isqrt) for M in raw])


@dataclass(frozen=True)
class TomographicMap:
    """The linear map from states to outcome probabilities, with pseudoinverse.

    ``matrix`` has one row per outcome holding the real coordinates of
    that element; ``pinv`` is its Moore-Penrose pseudoinverse.  For a
    complete measurement ``pinv @ matrix`` is the identity on Hermitian
    coordinates, so ``reconstruct`` inverts ``probs`` exactly.
    """

    measurement: Measurement
    matrix: np.ndarray
    pinv: np.ndarray

    @property
    def dim(self) -> int:
        return self.measurement.dim

    def probs(self, X) -> np.ndarray:
        """Raw linear image <mu, X> (no clipping; X need not be a state)."""
        return self.matrix @ herm_coords(X)

    def reconstruct(self, p) -> np.ndarray:
        """Lift an outcome vector back to a Hermitian matrix via the pseudoinverse."""
        p = np.asarray(p, dtype=np.float64)
        if p.shape != (len(self.measurement),):
            raise ValueError(f"expected {len(self.measurement)} outcome values")
        return herm_from_coords(self.pinv @ p, self.dim)

    def adjoint(self, v) -> np.ndarray:
        """Adjoint map: an outcome-weight vector to sum_y v_y mu_y."""
        v = np.asarray(v, dtype=np.float64)
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for vy, e in zip(v, self.measurement):
            total += vy * e
        return hermitian_part(total)

    def pinv_adjoint(self, X) -> np.ndarray:
        """Adjoint of the pseudoinverse: a Hermitian matrix to an outcome vector."""
        return self.pinv.T @ herm_coords(X)


def tomographic_map(mu: Measurement) -> TomographicMap:
    phi = _coords_matrix(mu)
    return TomographicMap(mu, phi, np.linalg.pinv(phi, rcond=PINV_RCOND))
