"""Collective (bosonic symmetric) representations of su(n).

A basis element X of su(n) acts on 𝒩 indistinguishable bosons in n modes as
the number-conserving collective operator

    X^(R) = sum_ij X_ij a_i^dagger a_j,

restricted to the fixed-particle-number Fock sector.  That sector carries the
symmetric irreducible representation; its dimension is binom(𝒩 + n - 1, n - 1),
and the quadratic invariant sum_a (X_a^(R))**2 is a multiple of the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .algebra import GeneratorBasis
from .exceptions import DimensionCapError, InvalidElementError, NotIrreducibleError

#: Default guard on the representation dimension; raise above this.
DIMENSION_CAP = 20000

#: Relative tolerance for the quadratic invariant to count as scalar.
CASIMIR_RTOL = 1e-8

# Full commutator-table validation is O(d^2 D^3); above this dimension only a
# fixed subset of pairs is checked at construction time.
_FULL_CHECK_DIM = 150


def _compositions(total: int, parts: int):
    # occupation tuples (k_1, ..., k_parts) with sum = total
    if parts == 1:
        yield (total,)
        return
    for cut in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        occ = []
        for c in cut:
            occ.append(c - prev - 1)
            prev = c
        occ.append(total + parts - 2 - prev)
        yield tuple(occ)


@dataclass(frozen=True)
class FockBasis:
    """Occupation-number basis of the fixed-particle sector.

    States are ordered reverse-lexicographically (descending tuple order), so
    the fully stretched state (𝒩, 0, ..., 0) comes first and for 𝒩 = 1 the
    k-th state has the particle in mode k.
    """

    modes: int
    particles: int
    states: tuple[tuple[int, ...], ...]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {occ: i for i, occ in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)


def fock_basis(modes: int, particles: int) -> FockBasis:
    """Enumerate occupations of ``particles`` bosons in ``modes`` modes."""
    if modes < 2 or particles < 1:
        raise InvalidElementError(
            f"need modes >= 2 and particles >= 1, got ({modes}, {particles})"
        )
    states = tuple(sorted(_compositions(particles, modes), reverse=True))
    return FockBasis(modes=modes, particles=particles, states=states)


@dataclass(frozen=True)
class Representation:
    """A concrete unitary representation of the generator basis.

    Attributes
    ----------
    basis : GeneratorBasis
        The fundamental basis being represented.
    generators : numpy.ndarray
        Complex array of shape ``(d, D, D)``; Hermitian, satisfying the same
        commutation relations as ``basis.generators``.
    label : str
        Either ``"fundamental"`` or ``"symmetric(n, 𝒩)"``.
    fock : FockBasis or None
        Occupation basis for collective representations, None otherwise.
    """

    basis: GeneratorBasis
    generators: np.ndarray
    label: str
    fock: FockBasis | None = None

    def __post_init__(self):
        mats = np.asarray(self.generators, dtype=complex)
        mats.setflags(write=False)
        object.__setattr__(self, "generators", mats)
        d = self.basis.dim
        if mats.ndim != 3 or mats.shape[0] != d or mats.shape[1] != mats.shape[2]:
            raise InvalidElementError(f"expected ({d}, D, D) generator stack, got {mats.shape}")
        herm = np.max(np.abs(mats - mats.conj().transpose(0, 2, 1)))
        if herm > 1e-12 * max(1.0, float(np.max(np.abs(mats)))):
            raise InvalidElementError(f"representation not Hermitian: deviation {herm:.3e}")

    @property
    def space_dim(self) -> int:
        return self.generators.shape[1]

    @cached_property
    def quadratic_invariant(self) -> np.ndarray:
        """The matrix sum_a X_a^(R) X_a^(R) (scalar for irreducibles)."""
        m = np.einsum("aij,ajk->ik", self.generators, self.generators)
        m.setflags(write=False)
        return m


def fundamental_representation(basis: GeneratorBasis) -> Representation:
    """The defining representation: the basis acting on C^n itself."""
    return Representation(basis=basis, generators=basis.generators, label="fundamental")


def symmetric_representation(
    basis: GeneratorBasis, particles: int, cap: int = DIMENSION_CAP
) -> Representation:
    """Collective representation on 𝒩 bosons in n modes.

    Parameters
    ----------
    basis : GeneratorBasis
        Fundamental su(n) basis to lift.
    particles : int
        Boson number 𝒩 >= 1.
    cap : int
        Guard on the sector dimension binom(𝒩 + n - 1, n - 1); a larger
        request raises :class:`DimensionCapError` instead of allocating.
    """
    n = basis.n
    dim = comb(particles + n - 1, n - 1)
    if dim > cap:
        raise DimensionCapError(
            f"symmetric({n}, {particles}) has dimension {dim} > cap {cap}"
        )
    fock = fock_basis(n, particles)
    d = basis.dim
    mats = np.zeros((d, dim, dim), dtype=complex)
    occs = np.array(fock.states)
    diag = basis.generators[:, range(n), range(n)].real  # (d, n) diagonal entries
    mats[:, range(dim), range(dim)] = diag @ occs.T
    index = fock.index
    for s_idx, occ in enumerate(fock.states):
        for j in range(n):
            if occ[j] == 0:
                continue
            for i in range(n):
                if i == j:
                    continue
                target = list(occ)
                target[j] -= 1
                target[i] += 1
                t_idx = index[tuple(target)]
                amp = np.sqrt(occ[j] * (occ[i] + 1))
                mats[:, t_idx, s_idx] += basis.generators[:, i, j] * amp
    rep = Representation(
        basis=basis, generators=mats, label=f"symmetric({n}, {particles})", fock=fock
    )
    _check_commutation(rep)
    return rep


def _check_commutation(rep: Representation, atol: float = 1e-10) -> None:
    """Verify [X_j^(R), X_k^(R)] matches the fundamental commutators.

    Compares against i f_jkl X_l^(R) for all pairs when the space is small,
    and for a fixed subset of pairs otherwise.
    """
    from .algebra import structure_constants

    f = structure_constants(rep.basis).f
    g = rep.generators
    d = g.shape[0]
    if rep.space_dim <= _FULL_CHECK_DIM:
        pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    else:
        pairs = [(j, (j + 1) % d) for j in range(d)]
    scale = max(1.0, float(np.max(np.abs(g))))
    for j, k in pairs:
        comm = g[j] @ g[k] - g[k] @ g[j]
        expected = 1j * np.tensordot(f[j, k], g, axes=1)
        dev = np.max(np.abs(comm - expected))
        if dev > atol * scale:
            raise InvalidElementError(
                f"commutator ({j}, {k}) deviates by {dev:.3e} in {rep.label}"
            )


def casimir(rep: Representation) -> float:
    """Scalar value of the quadratic invariant sum_a (X_a^(R))**2.

    Raises
    ------
    NotIrreducibleError
        If the invariant is not proportional to the identity within a 1e-8
        relative tolerance (the representation is reducible or corrupted).
    """
    m = rep.quadratic_invariant
    c = float(np.trace(m).real) / rep.space_dim
    dev = np.max(np.abs(m - c * np.eye(rep.space_dim)))
    if dev > CASIMIR_RTOL * max(1.0, abs(c)):
        raise NotIrreducibleError(
            f"quadratic invariant of {rep.label} deviates from scalar by {dev:.3e}"
        )
    return c


def lift_unitary(rep: Representation, coeffs: np.ndarray) -> np.ndarray:
    """exp(i sum_a h_a X_a^(R)) through the Hermitian eigendecomposition.

    Eigendecomposition is used instead of a series or Pade expansion so the
    result is exactly unitary up to rounding even for large collective norms.
    """
    h = np.asarray(coeffs, dtype=float)
    if h.shape != (rep.basis.dim,):
        raise InvalidElementError(f"expected {rep.basis.dim} coefficients, got {h.shape}")
    a = np.tensordot(h, rep.generators, axes=1)
    a = (a + a.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(a)
    return (vecs * np.exp(1j * vals)) @ vecs.conj().T
