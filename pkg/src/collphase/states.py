"""Internal states of particles and the Gaussian single-photon model.

Internal states live in a finite-dimensional Hilbert space that the
multiport does not act on (spectrum, polarization, arrival time).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, InvalidStateError, UnsupportedCaseError

NORM_TOL = 1e-12
PSD_TOL = 1e-10


def wrap_phase(angle: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    return math.pi - (math.pi - angle) % (2 * math.pi)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amp.size == 0:
            raise InvalidStateError("empty state vector")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state vector not normalized (norm {norm!r})")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def normalized(cls, vector) -> PureState:
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(v / norm)

    @classmethod
    def basis(cls, index: int, dim: int) -> PureState:
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_mixed(self) -> MixedState:
        return MixedState(self.density())


@dataclass(frozen=True, eq=False)
class MixedState:
    matrix: np.ndarray

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, rtol=0, atol=NORM_TOL):
            raise InvalidStateError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidStateError(f"density matrix trace {tr!r} != 1")
        rho = 0.5 * (rho + rho.conj().T)
        min_eig = np.linalg.eigvalsh(rho)[0]
        if min_eig < -PSD_TOL:
            raise InvalidStateError(f"density matrix not PSD (min eigenvalue {min_eig:.3e})")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def density(self) -> np.ndarray:
        return self.matrix

    def to_mixed(self) -> MixedState:
        return self


InternalState = Union[PureState, MixedState]


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>, conjugate-linear in ``a``."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def trace_product(chain: Sequence[InternalState | np.ndarray]) -> complex:
    """``Tr(chain[0] @ chain[1] @ ... @ chain[-1])``.

    The cycle factor ``Tr(rho_kR ... rho_k1)`` of a cycle ``(k1, ..., kR)`` is
    ``trace_product([rho_kR, ..., rho_k1])``.
    """
    if not chain:
        raise ValueError("empty chain")
    mats = [c.density() if isinstance(c, (PureState, MixedState)) else np.asarray(c) for c in chain]
    dim = mats[0].shape[0]
    if any(m.shape != (dim, dim) for m in mats):
        raise DimensionError("density matrices in chain have different dimensions")
    prod = mats[0]
    for m in mats[1:]:
        prod = prod @ m
    return complex(np.trace(prod))


# --- Gaussian spectral photons ------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaussianPhotonSpec:
    """Single photon with Gaussian spectrum and a polarization qubit.

    ``center_frequency`` and ``width`` share angular-frequency units and
    ``arrival_time`` is in the inverse unit. ``polarization`` holds the
    amplitudes ``(alpha, beta)`` on the ``(|v>, |h>)`` basis.
    """

    center_frequency: float
    width: float
    arrival_time: float
    polarization: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0], dtype=complex))

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidStateError(f"spectral width must be positive, got {self.width!r}")
        pol = np.array(self.polarization, dtype=np.complex128).reshape(-1)
        if pol.shape != (2,):
            raise InvalidStateError("polarization must be a complex 2-vector")
        if abs(np.vdot(pol, pol).real - 1.0) > NORM_TOL:
            raise InvalidStateError("polarization vector not normalized")
        pol.setflags(write=False)
        object.__setattr__(self, "polarization", pol)

    def with_polarization(self, polarization) -> GaussianPhotonSpec:
        return GaussianPhotonSpec(self.center_frequency, self.width, self.arrival_time, polarization)


def spectral_amplitude(spec: GaussianPhotonSpec, omega):
    """Spectral wavefunction of a photon delayed by ``arrival_time``.

    The delay enters as ``exp(+i tau (omega - omega0))`` (fields evolve as
    ``exp(-i omega t)``), normalized to unit L2 norm over ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    w0, d, tau = spec.center_frequency, spec.width, spec.arrival_time
    norm = (1.0 / (math.sqrt(math.pi) * d)) ** 0.5
    return norm * np.exp(-((omega - w0) ** 2) / (2 * d * d) + 1j * tau * (omega - w0))


def spectral_overlap(k: GaussianPhotonSpec, j: GaussianPhotonSpec) -> complex:
    """Closed-form ``integral conj(phi_k(w)) phi_j(w) dw`` for two Gaussians.

    The integrand is ``exp(-a w^2 + b w + c)`` with complex ``b`` and ``c``,
    whose integral is ``sqrt(pi / a) exp(b^2 / 4a + c)``. The exponent is
    expanded by hand so that large frequencies do not cancel catastrophically.
    """
    dk2, dj2 = k.width**2, j.width**2
    wk, wj = k.center_frequency, j.center_frequency
    tk, tj = k.arrival_time, j.arrival_time
    s2 = dk2 + dj2
    dt = tj - tk
    real = -((wk - wj) ** 2) / (2 * s2) - dt * dt * dk2 * dj2 / (2 * s2)
    imag = dt * (wk * dj2 + wj * dk2) / s2 + tk * wk - tj * wj
    prefactor = math.sqrt(2 * k.width * j.width / s2)
    return prefactor * cmath.exp(complex(real, imag))


def gaussian_overlap(k: GaussianPhotonSpec, j: GaussianPhotonSpec) -> complex:
    """Full photon overlap <Phi_k|Phi_j> = <P_k|P_j> <phi_k|phi_j>."""
    a, b = k.polarization.tolist(), j.polarization.tolist()
    # written out so that products like c*s - s*c cancel exactly
    pol = a[0].conjugate() * b[0] + a[1].conjugate() * b[1]
    if pol == 0:
        return 0j
    return pol * spectral_overlap(k, j)


def circle_polarizations(chi: float) -> list[np.ndarray]:
    """Polarizations that make photons k and k+2 orthogonal on a 4-cycle."""
    c, s = math.cos(chi), math.sin(chi)
    return [
        np.array([1.0, 0.0], dtype=complex),
        np.array([c, s], dtype=complex),
        np.array([0.0, 1.0], dtype=complex),
        np.array([s, -c], dtype=complex),
    ]


CIRCLE_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


def circle_dance_gaussian_params(
    specs: Sequence[GaussianPhotonSpec], chi: float
) -> dict[tuple[int, int], tuple[float, float]]:
    """Overlap moduli and phases on the four circle edges.

    Polarizations of ``specs`` are replaced by the circle pattern with angle
    ``chi``. Returns ``{(k, l): (r_kl, theta_kl)}`` for the edges
    (0,1), (1,2), (2,3), (3,0); all other pairs are exactly orthogonal.
    """
    if len(specs) != 4:
        raise ValueError("circle-dance Gaussian model needs exactly four photons")
    photons = [s.with_polarization(p) for s, p in zip(specs, circle_polarizations(chi))]
    out = {}
    for k, l in CIRCLE_EDGES:
        h = gaussian_overlap(photons[k], photons[l])
        out[(k, l)] = (abs(h), wrap_phase(cmath.phase(h)) if h != 0 else 0.0)
    return out


def circle_dance_photons(specs: Sequence[GaussianPhotonSpec], chi: float) -> list[GaussianPhotonSpec]:
    return [s.with_polarization(p) for s, p in zip(specs, circle_polarizations(chi))]


def four_particle_phase_gaussian(specs: Sequence[GaussianPhotonSpec]) -> float:
    """Collective phase of the cycle (0,1,2,3) for equal-width photons.

    Includes the ``pi`` contributed by the circle polarization pattern.
    """
    if len(specs) != 4:
        raise ValueError("need exactly four photons")
    widths = [s.width for s in specs]
    if max(widths) - min(widths) > 1e-12 * max(widths):
        raise UnsupportedCaseError("closed-form four-particle phase requires equal spectral widths")
    w = [s.center_frequency for s in specs]
    t = [s.arrival_time for s in specs]
    return wrap_phase(math.pi + 0.5 * ((w[3] - w[1]) * (t[0] - t[2]) + (w[2] - w[0]) * (t[3] - t[1])))
