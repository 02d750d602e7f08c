"""Orthonormal generator bases for su(n) and coefficient expansions.

The algebra su(n) is realized as the real span of d = n**2 - 1 traceless
Hermitian matrices.  Everything downstream fixes the invariant inner product

    <A, B> = 2 Tr(A^dagger B),

under which the basis built by :func:`gellmann_basis` (generalized Gell-Mann
matrices divided by two) is orthonormal.  For n = 2 the basis elements are
exactly the spin operators sigma/2, so angular-momentum identities apply
without rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import InvalidDimensionError, InvalidElementError

#: Scale of the invariant inner product <A, B> = INNER_PRODUCT_SCALE * Tr(A^dagger B).
INNER_PRODUCT_SCALE = 2.0

#: Construction-time tolerance for Hermiticity / orthonormality of a basis.
BASIS_TOL = 1e-12

#: Tolerance when validating a caller-supplied algebra element.
ELEMENT_TOL = 1e-10


@dataclass(frozen=True)
class GeneratorBasis:
    """Ordered orthonormal basis of su(n) in the fundamental representation.

    Attributes
    ----------
    n : int
        Dimension of the fundamental representation.
    generators : numpy.ndarray
        Complex array of shape ``(d, n, n)`` with ``d = n**2 - 1``.  Each
        slice is Hermitian and traceless, and the family satisfies
        ``2 Tr(X_a X_b) = delta_ab``.
    inner_product_scale : float
        Constant in front of the trace form.  Fixed to 2 so that the su(2)
        basis coincides with the spin operators.
    """

    n: int
    generators: np.ndarray
    inner_product_scale: float = INNER_PRODUCT_SCALE

    def __post_init__(self):
        mats = np.asarray(self.generators, dtype=complex)
        mats.setflags(write=False)
        object.__setattr__(self, "generators", mats)
        if self.n < 2:
            raise InvalidDimensionError(f"su(n) needs n >= 2, got n = {self.n}")
        d = self.n**2 - 1
        if mats.shape != (d, self.n, self.n):
            raise InvalidElementError(
                f"expected {d} generators of shape ({self.n}, {self.n}), got {mats.shape}"
            )
        herm = np.max(np.abs(mats - mats.conj().transpose(0, 2, 1)))
        if herm > BASIS_TOL:
            raise InvalidElementError(f"basis not Hermitian: max deviation {herm:.3e}")
        tr = np.max(np.abs(np.trace(mats, axis1=1, axis2=2)))
        if tr > BASIS_TOL:
            raise InvalidElementError(f"basis not traceless: max |trace| {tr:.3e}")
        gram = self.inner_product_scale * np.einsum("aij,bji->ab", mats, mats)
        dev = np.max(np.abs(gram - np.eye(d)))
        if dev > 1e-10:
            raise InvalidElementError(f"basis not orthonormal: Gram deviation {dev:.3e}")

    @property
    def dim(self) -> int:
        """Number of generators, n**2 - 1."""
        return self.n**2 - 1


@dataclass(frozen=True)
class StructureConstants:
    """Totally antisymmetric structure constants f[j, k, l] of a basis.

    Defined through [X_j, X_k] = i * sum_l f[j, k, l] X_l.
    """

    n: int
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        f.setflags(write=False)
        object.__setattr__(self, "f", f)
        anti = np.max(np.abs(f + f.transpose(1, 0, 2)))
        if anti > 1e-10:
            raise InvalidElementError(f"structure constants not antisymmetric: {anti:.3e}")


@lru_cache(maxsize=None)
def gellmann_basis(n: int) -> GeneratorBasis:
    """Build the orthonormal generator basis of su(n).

    Ordering: symmetric off-diagonal elements (i < j, row major), then
    antisymmetric off-diagonal elements in the same order, then the n - 1
    diagonal elements.  For n = 2 this yields (sigma_x/2, sigma_y/2,
    sigma_z/2).

    Parameters
    ----------
    n : int
        Fundamental dimension, at least 2.

    Returns
    -------
    GeneratorBasis
    """
    if n < 2:
        raise InvalidDimensionError(f"su(n) needs n >= 2, got n = {n}")
    mats = []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = 0.5
        m[j, i] = 0.5
        mats.append(m)
    for i, j in pairs:
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = -0.5j
        m[j, i] = 0.5j
        mats.append(m)
    for l in range(1, n):
        m = np.zeros((n, n), dtype=complex)
        norm = np.sqrt(2.0 / (l * (l + 1)))
        for i in range(l):
            m[i, i] = norm / 2.0
        m[l, l] = -l * norm / 2.0
        mats.append(m)
    return GeneratorBasis(n=n, generators=np.array(mats))


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """Extract f[j, k, l] = -2i Tr([X_j, X_k] X_l) from an orthonormal basis.

    The result is real and totally antisymmetric; the imaginary residue of
    the trace formula is checked against a 1e-12 tolerance.
    """
    x = basis.generators
    prod = np.einsum("aij,bjk->abik", x, x)
    comm = prod - prod.transpose(1, 0, 2, 3)
    f = -2j * np.einsum("abij,cji->abc", comm, x)
    imag = np.max(np.abs(f.imag))
    if imag > 1e-12:
        raise InvalidElementError(f"structure constants not real: residue {imag:.3e}")
    return StructureConstants(n=basis.n, f=f.real)


def expand(element: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """Coefficients of a traceless Hermitian matrix in an orthonormal basis.

    Returns the real vector h with h_a = 2 Tr(X_a H), so that
    H = sum_a h_a X_a reconstructs the input.

    Raises
    ------
    InvalidElementError
        If the input is not Hermitian and traceless within 1e-10.
    """
    h = np.asarray(element, dtype=complex)
    if h.shape != (basis.n, basis.n):
        raise InvalidElementError(f"expected shape ({basis.n}, {basis.n}), got {h.shape}")
    herm = np.max(np.abs(h - h.conj().T))
    if herm > ELEMENT_TOL:
        raise InvalidElementError(f"element not Hermitian: max deviation {herm:.3e}")
    tr = abs(np.trace(h))
    if tr > ELEMENT_TOL:
        raise InvalidElementError(f"element not traceless: |trace| = {tr:.3e}")
    coeffs = basis.inner_product_scale * np.einsum("aij,ji->a", basis.generators, h)
    return coeffs.real


def from_coefficients(coeffs: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """Algebra element sum_a h_a X_a for a real coefficient vector."""
    h = np.asarray(coeffs, dtype=float)
    if h.shape != (basis.dim,):
        raise InvalidElementError(f"expected {basis.dim} coefficients, got shape {h.shape}")
    return np.tensordot(h, basis.generators, axes=1)
