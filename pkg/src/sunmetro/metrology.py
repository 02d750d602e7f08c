"""Generator covariances, information matrices, and estimation bounds.

For a probe state and a parametrized SU(n) channel, the attainable precision
of a joint parameter estimate is governed by the information matrix

    Q = 4 𝗛 C 𝗛^T,

where C is the (symmetrized) covariance of the collective generators in the
probe and 𝗛 holds the channel's generator rows.  Scalar figures of merit are
Tr[W Q^(-1)] for a weight matrix W.  Choosing W equal to the pulled-back
metric g = 𝗛 𝗛^T makes the chart drop out entirely:

    Tr[g Q^(-1)] = (1/4) Tr[C^(-1)],

a parametrization-independent property of the probe alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve

from .channel import (
    CONDITION_THRESHOLD,
    GeneratorMatrix,
    Parametrization,
    generators_closed_form,
)
from .exceptions import (
    InvalidElementError,
    InvalidStateError,
    SingularCovarianceError,
    SingularInformationError,
)
from .representation import Representation, casimir

#: Eigenvalue-pair support cutoff in the mixed-state covariance kernel.
SUPPORT_CUTOFF = 1e-12

#: Mean-vector norm below which a probe counts as first-order unpolarized.
FIRST_ORDER_TOL = 1e-10

#: Max deviation of C from its isotropic value for second-order unpolarized.
SECOND_ORDER_TOL = 1e-8

#: Commutator-expectation threshold for joint saturability.
SATURATION_TOL = 1e-10


@dataclass(frozen=True)
class ProbeState:
    """A pure or mixed state carried by a concrete representation.

    Exactly one of ``vector`` (unit norm) and ``density`` (unit trace,
    positive semidefinite) is set.
    """

    rep: Representation
    vector: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.density is None):
            raise InvalidStateError("provide exactly one of vector and density")
        for name in ("vector", "density"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=complex)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None


def pure_state(rep: Representation, vector, normalize: bool = False) -> ProbeState:
    """Wrap an amplitude vector as a probe on ``rep``.

    The vector must be unit norm within 1e-12 unless ``normalize`` is set.
    """
    v = np.asarray(vector, dtype=complex).reshape(-1)
    if v.shape != (rep.space_dim,):
        raise InvalidStateError(
            f"expected {rep.space_dim} amplitudes for {rep.label}, got {v.shape[0]}"
        )
    if not np.all(np.isfinite(v.view(float))):
        raise InvalidStateError("amplitudes must be finite")
    norm = float(np.linalg.norm(v))
    if normalize:
        if norm == 0.0:
            raise InvalidStateError("cannot normalize the zero vector")
        v = v / norm
    elif abs(norm - 1.0) > 1e-12:
        raise InvalidStateError(f"state norm {norm!r} deviates from 1 beyond 1e-12")
    return ProbeState(rep=rep, vector=v)


def mixed_state(rep: Representation, density) -> ProbeState:
    """Wrap a density matrix as a probe on ``rep``."""
    rho = np.asarray(density, dtype=complex)
    d = rep.space_dim
    if rho.shape != (d, d):
        raise InvalidStateError(f"expected a ({d}, {d}) density matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise InvalidStateError("density matrix is not Hermitian within 1e-12")
    if abs(np.trace(rho).real - 1.0) > 1e-12:
        raise InvalidStateError("density matrix trace deviates from 1 beyond 1e-12")
    if np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)) < -1e-10:
        raise InvalidStateError("density matrix has a negative eigenvalue")
    return ProbeState(rep=rep, density=rho)


def covariance_pure(state: ProbeState) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and symmetrized covariance of the generators in a pure state.

    [C]_jk = (1/2) <X_j X_k + X_k X_j> - <X_j> <X_k>.  The trace of C equals
    the representation's quadratic invariant minus |<X>|^2.
    """
    if not state.is_pure:
        raise InvalidStateError("covariance_pure needs a pure state")
    g = state.rep.generators
    psi = state.vector
    images = np.einsum("aij,j->ai", g, psi)
    mean = (images @ psi.conj()).real
    gram = np.einsum("ai,bi->ab", images.conj(), images)
    cov = gram.real - np.outer(mean, mean)
    return mean, (cov + cov.T) / 2.0


def covariance_mixed(
    state: ProbeState, support_cutoff: float = SUPPORT_CUTOFF
) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and covariance kernel of the generators in a mixed state.

    In the eigenbasis rho = sum_u lambda_u |u><u|,

        [C]_jk = (1/2) sum_uv ((lambda_u - lambda_v)^2 / (lambda_u + lambda_v))
                 <u|X_j|v><v|X_k|u>,

    with eigenvalue pairs of weight below ``support_cutoff`` dropped.  For a
    rank-one density matrix this reduces to :func:`covariance_pure`; for the
    maximally mixed state it vanishes.  The kernel is symmetric positive
    semidefinite by construction.
    """
    if state.is_pure:
        raise InvalidStateError("covariance_mixed needs a density matrix")
    g = state.rep.generators
    rho = state.density
    mean = np.einsum("ij,aji->a", rho, g).real
    lam, p = np.linalg.eigh((rho + rho.conj().T) / 2.0)
    xt = np.einsum("ip,aij,jq->apq", p.conj(), g, p)
    pair_sum = lam[:, None] + lam[None, :]
    keep = pair_sum > support_cutoff
    kernel = np.zeros_like(pair_sum)
    kernel[keep] = 0.5 * (lam[:, None] - lam[None, :])[keep] ** 2 / pair_sum[keep]
    cov = np.einsum("uv,auv,buv->ab", kernel, xt, xt.conj()).real
    return mean, (cov + cov.T) / 2.0


def covariance(state: ProbeState) -> tuple[np.ndarray, np.ndarray]:
    """Dispatch to the pure or mixed covariance by state type."""
    return covariance_pure(state) if state.is_pure else covariance_mixed(state)


def _spectrum(matrix: np.ndarray, cond_threshold: float):
    eigs = np.linalg.eigvalsh((matrix + matrix.T) / 2.0)
    top = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    if top == 0.0:
        return eigs, 0, np.inf
    rank = int(np.sum(eigs > top / cond_threshold))
    smallest = float(np.min(eigs))
    cond = top / smallest if smallest > 0.0 else np.inf
    return eigs, rank, cond


def qfim(gm: GeneratorMatrix, cov: np.ndarray) -> np.ndarray:
    """Information matrix Q = 4 𝗛 C 𝗛^T for generator rows 𝗛 and covariance C."""
    c = np.asarray(cov, dtype=float)
    h = gm.hmat
    if c.shape != (h.shape[1], h.shape[1]):
        raise InvalidElementError(
            f"covariance shape {c.shape} does not match {h.shape[1]} generators"
        )
    q = 4.0 * h @ c @ h.T
    return (q + q.T) / 2.0


def intrinsic_bound(cov: np.ndarray, cond_threshold: float = CONDITION_THRESHOLD) -> float:
    """Chart-independent scalar bound (1/4) Tr[C^(-1)] of a probe covariance.

    Raises
    ------
    SingularCovarianceError
        If C is rank deficient at the condition threshold: some generator
        direction carries no signal, so not every parameter is estimable.
    """
    c = np.asarray(cov, dtype=float)
    eigs, rank, cond = _spectrum(c, cond_threshold)
    if rank < c.shape[0]:
        raise SingularCovarianceError(
            f"covariance has numerical rank {rank} < {c.shape[0]}: "
            "not every parameter direction is estimable",
            rank=rank,
            condition_number=cond,
        )
    return 0.25 * float(np.sum(1.0 / eigs))


def weighted_bound(
    weight: np.ndarray, qfim_matrix: np.ndarray, cond_threshold: float = CONDITION_THRESHOLD
) -> float:
    """Scalar lower bound Tr[W Q^(-1)] on the weighted estimation error.

    Evaluated through a symmetric linear solve; Q is never inverted
    explicitly.  With W equal to the pulled-back metric this reproduces
    :func:`intrinsic_bound` whenever Q is regular.
    """
    w = np.asarray(weight, dtype=float)
    q = np.asarray(qfim_matrix, dtype=float)
    if w.shape != q.shape or w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InvalidElementError(f"weight shape {w.shape} does not match Q {q.shape}")
    if np.max(np.abs(w - w.T)) > 1e-10 * max(1.0, float(np.max(np.abs(w)))):
        raise InvalidElementError("weight matrix is not symmetric")
    if np.min(np.linalg.eigvalsh((w + w.T) / 2.0)) <= 0.0:
        raise InvalidElementError("weight matrix is not positive definite")
    _, rank, cond = _spectrum(q, cond_threshold)
    if rank < q.shape[0]:
        raise SingularInformationError(
            f"information matrix has numerical rank {rank} < {q.shape[0]}",
            rank=rank,
            condition_number=cond,
        )
    return float(np.trace(solve(q, w, assume_a="pos")))


def saturation_check(state: ProbeState, gm: GeneratorMatrix, tol: float = SATURATION_TOL) -> bool:
    """Whether all commutator expectations <[H_j, H_k]> vanish on the probe.

    Vanishing expectations mean the scalar bound is jointly attainable; any
    first-order unpolarized probe passes for every chart.
    """
    lifted = np.tensordot(gm.hmat, state.rep.generators, axes=1)
    if state.is_pure:
        images = np.einsum("mij,j->mi", lifted, state.vector)
        products = np.einsum("mi,ki->mk", images.conj(), images)
    else:
        products = np.einsum("ij,ajk,bki->ab", state.density, lifted, lifted)
    residual = float(np.max(np.abs(products - products.T)))
    return residual < tol


def unpolarized_report(state: ProbeState) -> dict:
    """Grade a probe's isotropy.

    first_order:  |<X>| < 1e-10 (Euclidean norm of the mean vector).
    second_order: first_order and max |C - (c2/d) I| < 1e-8, where c2 is the
                  representation's quadratic invariant and d the number of
                  generators.
    deviation:    that max-norm distance, reported unconditionally.
    """
    mean, cov = covariance(state)
    d = state.rep.basis.dim
    iso = casimir(state.rep) / d
    deviation = float(np.max(np.abs(cov - iso * np.eye(d))))
    first = bool(np.linalg.norm(mean) < FIRST_ORDER_TOL)
    second = bool(first and deviation < SECOND_ORDER_TOL)
    return {"first_order": first, "second_order": second, "deviation": deviation}


@dataclass(frozen=True)
class BoundReport:
    """Everything the bound evaluation produced for one probe and chart.

    ``intrinsic_bound`` and ``weighted_bound`` are None when the required
    matrix is singular; the flags say which one failed.
    """

    mean: np.ndarray
    covariance: np.ndarray
    qfim: np.ndarray | None
    metric: np.ndarray | None
    intrinsic_bound: float | None
    weighted_bound: float | None
    flags: dict

    def to_json(self) -> dict:
        return {
            "mean": self.mean.tolist(),
            "covariance": self.covariance.tolist(),
            "qfim": None if self.qfim is None else self.qfim.tolist(),
            "metric": None if self.metric is None else self.metric.tolist(),
            "intrinsic_bound": self.intrinsic_bound,
            "weighted_bound": self.weighted_bound,
            "flags": dict(self.flags),
        }


def build_report(
    state: ProbeState,
    parametrization: Parametrization | None = None,
    theta=None,
    weight=None,
    cond_threshold: float = CONDITION_THRESHOLD,
) -> BoundReport:
    """Assemble a :class:`BoundReport` for a probe and an optional chart.

    ``weight`` may be None, the string "intrinsic" (use the pulled-back
    metric, in which case the bound is computed from C alone whenever Q
    degenerates but C does not), the string "identity", or an explicit
    symmetric positive definite matrix.
    """
    mean, cov = covariance(state)
    _, cov_rank, _ = _spectrum(cov, cond_threshold)
    cov_singular = cov_rank < cov.shape[0]
    intrinsic = None if cov_singular else intrinsic_bound(cov, cond_threshold)

    qmat = None
    metric = None
    q_singular = None
    weighted = None
    saturable = None
    if parametrization is not None:
        if parametrization.n != state.rep.basis.n:
            raise InvalidElementError(
                f"chart is on SU({parametrization.n}) but the probe carries "
                f"su({state.rep.basis.n}) generators"
            )
        gm = generators_closed_form(parametrization, theta)
        metric = gm.hmat @ gm.hmat.T
        metric = (metric + metric.T) / 2.0
        qmat = qfim(gm, cov)
        _, q_rank, _ = _spectrum(qmat, cond_threshold)
        q_singular = q_rank < qmat.shape[0]
        saturable = saturation_check(state, gm)
        if weight is not None:
            if isinstance(weight, str) and weight == "intrinsic":
                if not q_singular:
                    weighted = weighted_bound(metric, qmat, cond_threshold)
                elif not cov_singular:
                    # the metric weight cancels the chart, so the bound
                    # survives a degenerate Q as long as C is regular
                    weighted = intrinsic
            else:
                if isinstance(weight, str) and weight == "identity":
                    wmat = np.eye(qmat.shape[0])
                else:
                    wmat = np.asarray(weight, dtype=float)
                if not q_singular:
                    weighted = weighted_bound(wmat, qmat, cond_threshold)

    unpol = unpolarized_report(state)
    flags = {
        "covariance_singular": bool(cov_singular),
        "qfim_singular": q_singular if q_singular is None else bool(q_singular),
        "saturable": saturable,
        "unpolarized_order": 2 if unpol["second_order"] else (1 if unpol["first_order"] else 0),
    }
    return BoundReport(
        mean=mean,
        covariance=cov,
        qfim=qmat,
        metric=metric,
        intrinsic_bound=intrinsic,
        weighted_bound=weighted,
        flags=flags,
    )
