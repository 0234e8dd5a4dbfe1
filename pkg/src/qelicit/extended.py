"""Extended-real arithmetic and extended Hermitian matrices.

Scores take values in R u {-inf}.  This module implements the arithmetic
conventions for that half-extended line (0 * (-inf) = 0, no +inf ever)
and the matrix counterpart: formal expressions ``A - inf * B`` with B PSD
and A B = 0, which represent linear functionals of Hermitian matrices
that may take the value -inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    PSD_TOL,
    ZERO_EIG_REL,
    as_density,
    as_hermitian,
    hermitian_part,
    hs_inner,
    spectral_decompose,
)

__all__ = [
    "NEG_INF",
    "INNER_ZERO_TOL",
    "KERNEL_PRODUCT_TOL",
    "EXT_WEIGHT_TOL",
    "ext_mul",
    "ext_sum",
    "ext_dot",
    "ExtendedHermitian",
    "range_projector",
    "ext_inner",
    "matrix_log",
    "canonicalize_extended",
]

NEG_INF = float("-inf")

INNER_ZERO_TOL = 1e-10     # |<B, X>| below this counts as zero overlap
KERNEL_PRODUCT_TOL = 1e-8  # max-norm bound on A @ B for a valid pair
EXT_WEIGHT_TOL = 1e-12     # weights at most this in magnitude count as exact 0


def ext_mul(weight: float, value: float) -> float:
    """weight * value under the 0 * (-inf) = 0 convention.

    ``weight`` must be finite.  A strictly negative weight on a -inf
    value would produce +inf, which is forbidden, so it raises.
    """
    if not np.isfinite(weight):
        raise ValueError(f"weight must be finite, got {weight}")
    if value == NEG_INF:
        if weight > 0:
            return NEG_INF
        if weight == 0:
            return 0.0
        raise ValueError("negative weight on a -inf value would produce +inf")
    return float(weight * value)


def ext_sum(values) -> float:
    """Sum over R u {-inf}; -inf is absorbing, +inf inputs are rejected."""
    total = 0.0
    for v in values:
        if v == np.inf:
            raise ValueError("+inf is not a valid extended score value")
        if v == NEG_INF:
            return NEG_INF
        total += v
    return float(total)


def ext_dot(weights, values, zero_tol: float = 0.0) -> float:
    """Weighted sum of extended values with the 0 * (-inf) = 0 convention.

    Weights with magnitude <= zero_tol are treated as exact zeros, which
    lets callers pair measurement probabilities carrying float noise with
    -inf score values without manufacturing spurious infinities.
    """
    w = np.asarray(weights, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if w.shape != v.shape:
        raise ValueError(f"shape mismatch: {w.shape} vs {v.shape}")
    if not np.isfinite(w).all():
        raise ValueError("weights must be finite")
    if np.isposinf(v).any():
        raise ValueError("+inf is not a valid extended score value")
    if zero_tol > 0:
        w = np.where(np.abs(w) <= zero_tol, 0.0, w)
    neg = np.isneginf(v)
    if (w[neg] < 0).any():
        raise ValueError("negative weight on a -inf value would produce +inf")
    if (w[neg] > 0).any():
        return NEG_INF
    keep = ~neg
    return float(w[keep] @ v[keep])


def range_projector(B, zero_tol: float | None = None) -> np.ndarray:
    """Orthogonal projector onto the range of a PSD matrix."""
    B = as_hermitian(B)
    if zero_tol is None:
        zero_tol = ZERO_EIG_REL * max(float(np.trace(B).real), 1.0)
    w, V = np.linalg.eigh(B)
    cols = V[:, w > zero_tol]
    return hermitian_part(cols @ cols.conj().T)


@dataclass(frozen=True)
class ExtendedHermitian:
    """Formal pair ``finite_part - inf * infinite_part``.

    Invariants: both parts Hermitian, the infinite part PSD, and the
    product of the two parts zero (their ranges are orthogonal).
    """

    finite_part: np.ndarray
    infinite_part: np.ndarray

    def __post_init__(self):
        A = as_hermitian(self.finite_part, "finite part")
        B = as_hermitian(self.infinite_part, "infinite part")
        if A.shape != B.shape:
            raise ValueError("finite and infinite parts must share a shape")
        wmin = float(np.linalg.eigvalsh(B)[0]) if B.size else 0.0
        if wmin < -PSD_TOL:
            raise ValueError(f"infinite part is not PSD: min eigenvalue {wmin:.3e}")
        prod = float(np.abs(A @ B).max()) if A.size else 0.0
        if prod > KERNEL_PRODUCT_TOL:
            raise ValueError(f"parts do not annihilate each other: max |AB| = {prod:.3e}")
        object.__setattr__(self, "finite_part", A)
        object.__setattr__(self, "infinite_part", B)

    @classmethod
    def wrap(cls, A) -> "ExtendedHermitian":
        """Purely finite extended matrix (infinite part zero)."""
        A = as_hermitian(A)
        return cls(A, np.zeros_like(A))

    @classmethod
    def from_parts(cls, A, B) -> "ExtendedHermitian":
        """Build from a raw finite part, compressing it onto ker(B).

        The finite part is replaced by (I - P) A (I - P) with P the
        projector onto range(B); this keeps it Hermitian and enforces
        A B = 0 without changing the induced functional on states that
        assign the infinite part zero mass.
        """
        A = as_hermitian(A)
        B = as_hermitian(B)
        if float(np.abs(B).max()) == 0.0:
            return cls(A, np.zeros_like(A))
        comp = np.eye(A.shape[0]) - range_projector(B)
        return cls(hermitian_part(comp @ A @ comp), B)

    @property
    def dim(self) -> int:
        return self.finite_part.shape[0]

    def is_finite(self, tol: float = INNER_ZERO_TOL) -> bool:
        return float(np.abs(self.infinite_part).max()) <= tol

    def add_scalar(self, c: float) -> "ExtendedHermitian":
        """Add c * identity, restricted to the finite subspace.

        On the infinite part's range the value stays -inf (adding a
        finite constant to -inf changes nothing), so the identity is
        compressed onto the complement before adding.
        """
        if self.is_finite():
            comp = np.eye(self.dim)
        else:
            comp = np.eye(self.dim) - range_projector(self.infinite_part)
        return ExtendedHermitian(
            hermitian_part(self.finite_part + c * comp), self.infinite_part
        )

    def conjugate_by(self, U) -> "ExtendedHermitian":
        U = np.asarray(U, dtype=np.complex128)
        return ExtendedHermitian(
            hermitian_part(U @ self.finite_part @ U.conj().T),
            hermitian_part(U @ self.infinite_part @ U.conj().T),
        )


def ext_inner(E: ExtendedHermitian, X) -> float:
    """Extended inner product <A - inf B, X> = <A, X> - inf <B, X>.

    Returns -inf when X puts positive mass on the infinite part, the
    finite value <A, X> when the overlap is zero, and raises when the
    overlap is genuinely negative (impossible for PSD X, so it signals
    inconsistent input).
    """
    X = as_hermitian(X)
    b = hs_inner(E.infinite_part, X)
    if b > INNER_ZERO_TOL:
        return NEG_INF
    if b < -INNER_ZERO_TOL:
        raise ValueError(
            f"negative overlap {b:.3e} with the infinite part; input not PSD?"
        )
    return hs_inner(E.finite_part, X)


def matrix_log(rho) -> ExtendedHermitian:
    """Matrix logarithm of a density matrix as an extended Hermitian.

    The finite part carries log(lambda) on the support; the infinite
    part is the projector onto the kernel, where the log is -inf.
    """
    rho = as_density(rho)
    zero_tol = ZERO_EIG_REL * float(np.trace(rho).real)
    lam, V = spectral_decompose(rho)
    pos = lam > zero_tol
    Vp = V[:, pos]
    A = hermitian_part((Vp * np.log(lam[pos])) @ Vp.conj().T)
    Vk = V[:, ~pos]
    B = hermitian_part(Vk @ Vk.conj().T) if Vk.shape[1] else np.zeros_like(A)
    return ExtendedHermitian(A, B)


def canonicalize_extended(pairs) -> ExtendedHermitian:
    """Collapse weighted PSD matrices into one extended Hermitian.

    Given pairs (A_i, alpha_i) with each A_i PSD and alpha_i in
    R u {-inf}, returns E with <E, rho> = sum_i <A_i, rho> * alpha_i for
    every density matrix rho (under the 0 * (-inf) = 0 convention).
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one (matrix, weight) pair")
    dim = np.asarray(pairs[0][0]).shape[0]
    finite = np.zeros((dim, dim), dtype=np.complex128)
    infinite = np.zeros((dim, dim), dtype=np.complex128)
    for i, (Ai, alpha) in enumerate(pairs):
        Ai = as_hermitian(Ai, f"pair {i}")
        wmin = float(np.linalg.eigvalsh(Ai)[0])
        if wmin < -PSD_TOL:
            raise ValueError(f"pair {i} is not PSD: min eigenvalue {wmin:.3e}")
        if alpha == np.inf:
            raise ValueError("+inf weights are not allowed")
        if alpha == NEG_INF:
            infinite += Ai
        else:
            finite += float(alpha) * Ai
    return ExtendedHermitian.from_parts(hermitian_part(finite), hermitian_part(infinite))
