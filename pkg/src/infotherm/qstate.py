"""Small dense quantum-state kernel (Hilbert dimension up to ~16).

Entropies are returned in nats unless the function name says bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DimensionError,
    InvalidDistribution,
    InvalidMixture,
    InvalidState,
)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIG_FLOOR = -1e-10
POVM_TOL = 1e-10
JACOBI_TOL = 1e-13
CLUSTER_GAP = 1e-9
DEFAULT_TENSOR_CAP = 2**20


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    normalized_on_creation: bool = False

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size < 1:
            raise InvalidState("a state needs at least one amplitude")
        if abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise InvalidState("amplitudes are not normalized; use make_pure")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidState(f"density operator must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidState("density operator is not Hermitian")
        if abs(np.trace(m).real - 1.0) > NORM_TOL:
            raise InvalidState(f"trace is {np.trace(m).real!r}, expected 1")
        object.__setattr__(self, "matrix", m)
        lam, _ = hermitian_eigh(m)
        if lam.min() < EIG_FLOOR:
            raise InvalidState(f"negative eigenvalue {lam.min():.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Povm:
    elements: tuple

    def __post_init__(self):
        els = tuple(_frozen(e) for e in self.elements)
        if not els:
            raise InvalidState("POVM needs at least one element")
        d = els[0].shape[0]
        for e in els:
            if e.shape != (d, d):
                raise DimensionError("POVM elements differ in shape")
            if np.max(np.abs(e - e.conj().T)) > POVM_TOL:
                raise InvalidState("POVM element is not Hermitian")
            if hermitian_eigh(e)[0].min() < -POVM_TOL:
                raise InvalidState("POVM element is not positive semidefinite")
        if np.max(np.abs(sum(els) - np.eye(d))) > POVM_TOL:
            raise InvalidState("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenstates: tuple = field(default_factory=tuple)

    def reconstruct(self) -> np.ndarray:
        return sum(lam * s.projector() for lam, s in zip(self.eigenvalues, self.eigenstates))


def make_pure(amplitudes: Iterable[complex]) -> PureState:
    """Normalize ``amplitudes`` into a :class:`PureState`."""
    amps = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                      dtype=complex).ravel()
    if amps.size < 1:
        raise InvalidState("empty amplitude vector")
    norm = math.sqrt(np.vdot(amps, amps).real)
    if norm == 0.0:
        raise InvalidState("zero vector cannot be normalized")
    needed = abs(norm - 1.0) > NORM_TOL
    if needed:
        amps = amps / norm
    return PureState(amps, normalized_on_creation=needed)


def basis(d: int, k: int) -> PureState:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return PureState(v)


KET0 = basis(2, 0)
KET1 = basis(2, 1)
PLUS = make_pure([1, 1])
MINUS = make_pure([1, -1])
PLUS_I = make_pure([1, 1j])
MINUS_I = make_pure([1, -1j])

NAMED_STATES = {
    "0": KET0,
    "1": KET1,
    "plus": PLUS,
    "minus": MINUS,
    "plus_i": PLUS_I,
    "minus_i": MINUS_I,
}


def random_pure(d: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state."""
    return make_pure(rng.normal(size=d) + 1j * rng.normal(size=d))


def inner(a: PureState, b: PureState) -> complex:
    """<a|b>, antilinear in ``a``."""
    if a.dim != b.dim:
        raise DimensionError(f"dimensions differ: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def density_from_mixture(parts: Sequence[tuple[float, PureState]]) -> DensityOperator:
    if not parts:
        raise InvalidMixture("empty mixture")
    weights = [float(w) for w, _ in parts]
    if any(w < 0 for w in weights):
        raise InvalidMixture("negative weight")
    if abs(sum(weights) - 1.0) > NORM_TOL:
        raise InvalidMixture(f"weights sum to {sum(weights)!r}")
    d = parts[0][1].dim
    rho = np.zeros((d, d), dtype=complex)
    for w, s in parts:
        if s.dim != d:
            raise DimensionError("mixture components differ in dimension")
        rho += w * s.projector()
    # kill rounding asymmetry so the Hermitian check is exact
    return DensityOperator((rho + rho.conj().T) / 2)


def hermitian_eigh(matrix, tol: float = JACOBI_TOL, max_sweeps: int = 64):
    """Cyclic complex Jacobi eigensolver.

    Returns ``(eigenvalues, vectors)`` with eigenvalues descending and the
    eigenvectors as columns of a unitary matrix.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidState(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise InvalidState("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if math.sqrt(np.sum(np.abs(a[off_mask]) ** 2)) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase_c = (apq / mag).conjugate()
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                gpp, gpq, gqp, gqq = c, s, -s * phase_c, c * phase_c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = cp * gpp + cq * gqp
                a[:, q] = cp * gpq + cq * gqq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(gpp) * rp + np.conj(gqp) * rq
                a[q, :] = np.conj(gpq) * rp + np.conj(gqq) * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * gpp + vq * gqp
                v[:, q] = vp * gpq + vq * gqq
    lam = np.real(np.diag(a))
    order = np.argsort(-lam, kind="stable")
    return lam[order], v[:, order]


def _orthonormalize_clusters(lam: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    vecs = vecs.copy()
    i = 0
    n = lam.size
    while i < n:
        j = i + 1
        while j < n and abs(lam[j - 1] - lam[j]) < CLUSTER_GAP:
            j += 1
        # modified Gram-Schmidt inside the cluster only
        for k in range(i, j):
            for m in range(i, k):
                vecs[:, k] -= np.vdot(vecs[:, m], vecs[:, k]) * vecs[:, m]
            vecs[:, k] /= np.linalg.norm(vecs[:, k])
        i = j
    return vecs


def eigendecompose(rho: DensityOperator) -> Spectrum:
    """Schatten decomposition of ``rho``: descending weights, orthonormal states."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    lam, vecs = hermitian_eigh(rho.matrix)
    vecs = _orthonormalize_clusters(lam, vecs)
    states = tuple(make_pure(vecs[:, k]) for k in range(lam.size))
    lam = _frozen(lam).real.copy()
    lam.setflags(write=False)
    return Spectrum(lam, states)


def _xlogx(p: np.ndarray, log) -> float:
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    nz = p[p > 0]
    return float(-np.sum(nz * log(nz)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """-Tr rho ln rho, in nats."""
    lam = eigendecompose(rho).eigenvalues
    return max(0.0, _xlogx(lam, np.log))


def shannon_entropy(p: Sequence[float]) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise InvalidDistribution("negative probability")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise InvalidDistribution(f"probabilities sum to {p.sum()!r}")
    return max(0.0, _xlogx(p, np.log2))


def tensor_power(s: PureState, n: int, cap: int = DEFAULT_TENSOR_CAP) -> PureState:
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    if s.dim ** n > cap:
        raise CapacityError(f"dimension {s.dim}^{n} exceeds cap {cap}")
    out = s.amplitudes
    for _ in range(n - 1):
        out = np.kron(out, s.amplitudes)
    return make_pure(out)


def apply_povm(s: PureState, m: Povm) -> np.ndarray:
    """Outcome probabilities <s|E_j|s>."""
    if s.dim != m.dim:
        raise DimensionError(f"state dim {s.dim} vs POVM dim {m.dim}")
    psi = s.amplitudes
    p = np.array([np.vdot(psi, e @ psi).real for e in m.elements])
    if p.min() < -1e-12:
        raise InvalidState("POVM produced a negative probability")
    return np.clip(p, 0.0, 1.0)


def projective_povm(states: Sequence[PureState]) -> Povm:
    return Povm(tuple(s.projector() for s in states))


# JSON helpers: complex arrays as [real, imag] pair arrays

def complex_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"real": a.real.tolist(), "imag": a.imag.tolist()}


def complex_from_json(doc: dict) -> np.ndarray:
    return np.asarray(doc["real"], dtype=float) + 1j * np.asarray(doc["imag"], dtype=float)


def state_to_json(s: PureState) -> dict:
    return complex_to_json(s.amplitudes)


def density_to_json(rho: DensityOperator) -> dict:
    return complex_to_json(rho.matrix)
