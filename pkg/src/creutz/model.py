"""Creutz ladder: Bloch Hamiltonian, quasiparticle bands, and commensurability.

The ladder has two legs of ``n_rungs`` sites with periodic boundary
conditions, horizontal hopping ``j_h`` carrying a Peierls phase
``exp(+/- i theta)``, vertical hopping ``j_v``, and diagonal hopping
``j_d``.  The flux per plaquette is ``theta/pi``.

All band energies here use the shifted convention: the constant ``j_v``
is subtracted from both quasiparticle branches.  Gaps and energy
differences are unaffected by the shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "LadderParams",
    "ModeData",
    "ModeGrid",
    "RationalAngle",
    "allowed_modes",
    "band_energies",
    "bogoliubov_angle",
    "canonical_angle",
    "commensurate_base",
    "critical_wavenumbers",
    "detect_rational_angle",
    "gap",
    "group_velocity",
    "ground_state_energy",
    "is_commensurate",
    "mode_data",
]


def canonical_angle(theta: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    theta = float(theta)
    reduced = math.remainder(theta, 2.0 * math.pi)
    if reduced <= -math.pi:
        reduced += 2.0 * math.pi
    return reduced


@dataclass(frozen=True)
class LadderParams:
    """Hopping amplitudes, flux, and size of one Creutz ladder.

    ``theta`` is stored canonically in (-pi, pi].  ``j_v`` and ``j_d``
    must be positive; ``n_rungs`` is the number of sites per leg.
    """

    j_h: float
    j_v: float
    j_d: float
    theta: float
    n_rungs: int

    def __post_init__(self) -> None:
        if self.j_v <= 0.0:
            raise DomainError(f"j_v must be positive, got {self.j_v}")
        if self.j_d <= 0.0:
            raise DomainError(f"j_d must be positive, got {self.j_d}")
        if int(self.n_rungs) != self.n_rungs or self.n_rungs < 2:
            raise DomainError(f"n_rungs must be an integer >= 2, got {self.n_rungs}")
        object.__setattr__(self, "n_rungs", int(self.n_rungs))
        object.__setattr__(self, "theta", canonical_angle(self.theta))

    def with_theta(self, theta: float) -> "LadderParams":
        """Same ladder with a different flux angle."""
        return LadderParams(self.j_h, self.j_v, self.j_d, theta, self.n_rungs)


@dataclass(frozen=True)
class ModeGrid:
    """The quantized wavenumbers k_j = 2 pi j / N, j = 0..N-1."""

    n_rungs: int
    wavenumbers: np.ndarray
    delta_k: float


@dataclass(frozen=True)
class ModeData:
    """Spectral data of a single wavenumber (shifted band convention)."""

    k: float
    eps_q: float
    eps_p: float
    eps_qp: float
    gamma: float
    e_alpha: float
    e_beta: float
    gap: float


@dataclass(frozen=True)
class RationalAngle:
    """The gap-closing angle arccos(j_v/2j)/pi written as p/q in lowest terms."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if not (0 < self.p < self.q):
            raise DomainError(f"need 0 < p < q, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"p={self.p}, q={self.q} are not coprime")


def allowed_modes(n_rungs: int) -> ModeGrid:
    """Quantized wavenumbers of a ladder with ``n_rungs`` sites per leg."""
    if int(n_rungs) != n_rungs or n_rungs < 2:
        raise DomainError(f"n_rungs must be an integer >= 2, got {n_rungs}")
    n = int(n_rungs)
    ks = 2.0 * np.pi * np.arange(n) / n
    return ModeGrid(n_rungs=n, wavenumbers=ks, delta_k=2.0 * np.pi / n)


def _eps_parts(params: LadderParams, k):
    eps_q = 2.0 * params.j_h * np.cos(k - params.theta)
    eps_p = 2.0 * params.j_h * np.cos(k + params.theta)
    eps_qp = 2.0 * params.j_d * np.cos(k) + params.j_v
    return eps_q, eps_p, eps_qp


def band_energies(params: LadderParams, k):
    """Shifted band energies (e_alpha, e_beta) at wavenumber(s) ``k``."""
    k = np.asarray(k, dtype=float)
    _, _, eps_qp = _eps_parts(params, k)
    half_gap = np.sqrt(eps_qp**2 + (2.0 * params.j_h * np.sin(k) * np.sin(params.theta)) ** 2)
    center = -2.0 * params.j_h * np.cos(k) * np.cos(params.theta) - params.j_v
    return center - half_gap, center + half_gap


def gap(params: LadderParams, k):
    """Band gap e_beta - e_alpha at wavenumber(s) ``k``."""
    e_alpha, e_beta = band_energies(params, k)
    return e_beta - e_alpha


def bogoliubov_angle(params: LadderParams, k):
    """Rotation angle diagonalizing the 2x2 Bloch matrix, in (-pi, pi].

    Computed with the two-argument arctangent of
    (2 eps_qp, eps_q - eps_p) so the angle stays well defined where the
    leg energies cross.
    """
    eps_q, eps_p, eps_qp = _eps_parts(params, k)
    gamma = np.arctan2(2.0 * eps_qp, eps_q - eps_p)
    return np.where(gamma <= -np.pi, gamma + 2.0 * np.pi, gamma)


def mode_data(params: LadderParams, k: float) -> ModeData:
    """All per-wavenumber spectral quantities at ``k``."""
    k = float(k)
    eps_q, eps_p, eps_qp = _eps_parts(params, k)
    e_alpha, e_beta = band_energies(params, k)
    return ModeData(
        k=k,
        eps_q=float(eps_q),
        eps_p=float(eps_p),
        eps_qp=float(eps_qp),
        gamma=float(bogoliubov_angle(params, k)),
        e_alpha=float(e_alpha),
        e_beta=float(e_beta),
        gap=float(e_beta - e_alpha),
    )


def _require_equal_hoppings(params: LadderParams) -> float:
    if not math.isclose(params.j_h, params.j_d, rel_tol=0.0, abs_tol=1e-12):
        raise DomainError(
            f"criticality analysis requires j_h == j_d, got j_h={params.j_h}, j_d={params.j_d}"
        )
    return params.j_h


def critical_wavenumbers(params: LadderParams) -> tuple[float, float]:
    """Gap-closing wavenumbers (k_c-, k_c+) = pi -/+ arccos(j_v/2j).

    Requires j_h == j_d == j and j_v < 2j; outside that range the gap
    never closes and the request is rejected.
    """
    j = _require_equal_hoppings(params)
    if params.j_v >= 2.0 * j:
        raise DomainError(
            f"gap never closes for j_v >= 2j (j_v={params.j_v}, j={j}); no critical wavenumbers"
        )
    acos = math.acos(params.j_v / (2.0 * j))
    return math.pi - acos, math.pi + acos


def detect_rational_angle(
    params: LadderParams, q_max: int = 64, tol: float = 1e-9
) -> Optional[RationalAngle]:
    """Recognize arccos(j_v/2j)/pi as a rational p/q with q <= q_max.

    Returns None when no fraction with denominator at most ``q_max``
    approximates the angle to within ``tol``; that signals an
    incommensurate angle at this resolution.
    """
    j = _require_equal_hoppings(params)
    if params.j_v >= 2.0 * j:
        raise DomainError(f"requires j_v < 2j, got j_v={params.j_v}, j={j}")
    if q_max < 2:
        raise DomainError(f"q_max must be >= 2, got {q_max}")
    x = math.acos(params.j_v / (2.0 * j)) / math.pi
    frac = Fraction(x).limit_denominator(int(q_max))
    if frac <= 0 or frac >= 1 or abs(x - float(frac)) >= tol:
        return None
    return RationalAngle(p=frac.numerator, q=frac.denominator)


def commensurate_base(angle: RationalAngle) -> int:
    """Smallest N that is an integer multiple of both 2q/(q-p) and 2q/(q+p).

    A ladder size hosts the gap-closing modes exactly when this base
    divides it.
    """
    two_q = 2 * angle.q
    need_minus = two_q // math.gcd(two_q, angle.q - angle.p)
    need_plus = two_q // math.gcd(two_q, angle.q + angle.p)
    return math.lcm(need_minus, need_plus)


def is_commensurate(angle: RationalAngle, n_rungs: int) -> bool:
    """True when a ladder of ``n_rungs`` sites hosts the gap-closing modes."""
    return n_rungs % commensurate_base(angle) == 0


def group_velocity(params: LadderParams) -> float:
    """|d(gap)/dk| at the gap-closing wavenumbers, for a critical flux.

    Closed form 2*sqrt(4j^2 - j_v^2); identical at both gap-closing
    wavenumbers.
    """
    critical_wavenumbers(params)  # validates j_h == j_d and j_v < 2j
    j = params.j_h
    return 2.0 * math.sqrt(4.0 * j * j - params.j_v * params.j_v)


def ground_state_energy(params: LadderParams) -> float:
    """Total energy of the lower band summed over all allowed modes."""
    ks = allowed_modes(params.n_rungs).wavenumbers
    e_alpha, _ = band_energies(params, ks)
    return float(np.sum(e_alpha))
