"""No-cloning and state-discrimination checks for pure states."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import CapacityError, InvalidOperator, Unsupported
from .qstate import (
    DEFAULT_TENSOR_CAP,
    PureState,
    hermitian_eigh,
    inner,
    make_pure,
    tensor_power,
)

UNITARY_TOL = 1e-10
OVERLAP_TOL = 1e-10
CLONE_TOL = 1e-8


@dataclass(frozen=True)
class CloneCheckReport:
    overlap: complex
    constraint_residual: float
    cloner_possible: bool
    residuals: tuple = ()

    def to_json(self) -> dict:
        d = asdict(self)
        d["overlap"] = [self.overlap.real, self.overlap.imag]
        d["residuals"] = list(self.residuals)
        return d


@dataclass(frozen=True)
class DiscriminationReport:
    overlap_mag: float
    beta_sq: float
    bound_on_confusion: float
    optimal_success: float

    def to_json(self) -> dict:
        return asdict(self)


def overlap_admits_cloning(overlap: complex, tol: float = OVERLAP_TOL) -> bool:
    """True iff |<a|b>|^2 - |<a|b>| vanishes, i.e. |<a|b>| is 0 or 1."""
    m = abs(overlap)
    return abs(m * m - m) <= tol


def check_cloner(u, s: PureState, psi1: PureState, psi2: PureState) -> CloneCheckReport:
    """Measure how well ``u`` copies ``psi1`` and ``psi2`` from the blank ``s``.

    ``u`` acts on the two-register space of dimension d**2.  The reported
    residual is the worst of ||U|psi_i>|s> - |psi_i>|psi_i>||.
    """
    u = np.asarray(u, dtype=complex)
    d = s.dim
    if u.shape != (d * d, d * d):
        raise InvalidOperator(f"expected a {d*d}x{d*d} operator, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(d * d))) > UNITARY_TOL:
        raise InvalidOperator("operator is not unitary")
    residuals = []
    for psi in (psi1, psi2):
        if psi.dim != d:
            raise InvalidOperator("state dimension does not match the blank state")
        out = u @ np.kron(psi.amplitudes, s.amplitudes)
        target = np.kron(psi.amplitudes, psi.amplitudes)
        residuals.append(float(np.linalg.norm(out - target)))
    ov = inner(psi1, psi2)
    possible = overlap_admits_cloning(ov)
    worst = max(residuals)
    if worst < CLONE_TOL and not overlap_admits_cloning(ov, CLONE_TOL):
        # inner products are preserved by unitaries; reaching here means a bug upstream
        raise AssertionError(f"unitary cloned states with overlap {abs(ov):.3e}")
    return CloneCheckReport(ov, worst, possible, tuple(residuals))


def best_cloner(s: PureState, psi1: PureState, psi2: PureState) -> np.ndarray:
    """Unitary closest (least squares) to copying both states.

    Orthogonal Procrustes: maximize Re Tr(U^H Y X^H) over unitaries, where
    the columns of X are the inputs |psi_i>|s> and of Y the targets.  When
    the two Gram matrices agree the fit is exact.
    """
    x = np.column_stack([np.kron(p.amplitudes, s.amplitudes) for p in (psi1, psi2)])
    y = np.column_stack([np.kron(p.amplitudes, p.amplitudes) for p in (psi1, psi2)])
    w, _, vh = np.linalg.svd(y @ x.conj().T)
    return w @ vh


def copy_unitary(d: int = 2) -> np.ndarray:
    """Basis-copying permutation |i>|j> -> |i>|i+j mod d> (CNOT for d = 2)."""
    u = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            u[i * d + (i + j) % d, i * d + j] = 1.0
    return u


def gram_schmidt_split(psi1: PureState, psi2: PureState):
    """Write psi2 = alpha psi1 + beta psi_perp with beta >= 0.

    Returns ``(alpha, beta, psi_perp)``; ``psi_perp`` is None when beta == 0.
    """
    alpha = inner(psi1, psi2)
    rest = psi2.amplitudes - alpha * psi1.amplitudes
    beta = float(np.linalg.norm(rest))
    if beta < 1e-14:
        return alpha, 0.0, None
    return alpha, beta, make_pure(rest / beta)


def indistinguishability_bound(psi1: PureState, psi2: PureState) -> DiscriminationReport:
    """Largest <psi2|E|psi2> for a detector E that never fires on psi1.

    Any such E satisfies sqrt(E)|psi1> = 0, so only the component of psi2
    orthogonal to psi1 can trigger it, giving the bound |beta|^2.
    """
    alpha, beta, _ = gram_schmidt_split(psi1, psi2)
    c = min(1.0, abs(alpha))
    beta_sq = max(0.0, 1.0 - c * c)
    return DiscriminationReport(
        overlap_mag=c,
        beta_sq=beta_sq,
        bound_on_confusion=beta_sq,
        optimal_success=optimal_discrimination(psi1, psi2, 0.5),
    )


def zero_error_detector(psi1: PureState, psi2: PureState) -> np.ndarray:
    """Projector onto psi_perp; attains the |beta|^2 bound."""
    _, _, perp = gram_schmidt_split(psi1, psi2)
    if perp is None:
        return np.zeros((psi1.dim, psi1.dim), dtype=complex)
    return perp.projector()


def optimal_discrimination(psi1: PureState, psi2: PureState, prior1: float = 0.5) -> float:
    """Helstrom optimum: 1/2 (1 + || p1 rho1 - p2 rho2 ||_1)."""
    if not 0.0 <= prior1 <= 1.0:
        raise ValueError("prior1 must lie in [0, 1]")
    gamma = prior1 * psi1.projector() - (1.0 - prior1) * psi2.projector()
    lam, _ = hermitian_eigh(gamma)
    return 0.5 * (1.0 + float(np.sum(np.abs(lam))))


def bloch_vector(s: PureState) -> np.ndarray:
    a, b = s.amplitudes
    return np.array([2 * (a.conjugate() * b).real, 2 * (a.conjugate() * b).imag,
                     abs(a) ** 2 - abs(b) ** 2])


def brute_force_discrimination(psi1: PureState, psi2: PureState, grid_steps: int,
                               prior1: float = 0.5) -> float:
    """Best success over a (theta, phi) grid of qubit projective measurements.

    Projector P = (I + n.sigma)/2 announces psi1.  Success is
    1/2 + 1/2 n.(p1 r1 - p2 r2).  The grid maximum factorizes because
    sin(theta) >= 0 on [0, pi], so the scan is O(grid_steps) yet exact over
    the full grid.
    """
    if psi1.dim != 2 or psi2.dim != 2:
        raise Unsupported("brute force scan is qubit only")
    if grid_steps < 8:
        raise ValueError("grid_steps must be at least 8")
    v = prior1 * bloch_vector(psi1) - (1.0 - prior1) * bloch_vector(psi2)
    theta = np.pi * np.arange(grid_steps + 1) / grid_steps
    phi = 2 * np.pi * np.arange(grid_steps) / grid_steps
    planar = np.max(v[0] * np.cos(phi) + v[1] * np.sin(phi))
    best = np.max(np.sin(theta) * planar + np.cos(theta) * v[2])
    # the rank-0 / rank-2 measurements (always guess one way)
    best_prob = max(0.5 + 0.5 * float(best), prior1, 1.0 - prior1)
    return min(1.0, best_prob)


def power_success_closed_form(overlap_mag: float, n: int) -> float:
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - overlap_mag ** (2 * n))))


def power_distinguishability(psi1: PureState, psi2: PureState, n: int,
                             cap: int = DEFAULT_TENSOR_CAP, explicit: bool = False) -> float:
    """Equal-prior optimal success for n copies of each state.

    ``explicit`` builds the tensor powers and runs the Helstrom solver
    instead of using the closed form.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if psi1.dim ** n > cap:
        raise CapacityError(f"dimension {psi1.dim}^{n} exceeds cap {cap}")
    if explicit:
        return optimal_discrimination(tensor_power(psi1, n, cap), tensor_power(psi2, n, cap))
    return power_success_closed_form(abs(inner(psi1, psi2)), n)
