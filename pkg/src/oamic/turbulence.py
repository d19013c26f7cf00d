"""Closed-form output states for three turbulence scenarios.

Each scenario has a reported closed form for the density matrix after
propagation, parameterised by survival/crosstalk amplitudes. Only
amplitude ratios matter physically, so amplitudes are accepted as plain
non-negative reals and outputs are normalised to unit trace.

Basis orderings (fixed, recorded by the label constants below):

* Werner and two-photon scenarios: 4x4 in the product basis
  ``{|l,l>, |l,-l>, |-l,l>, |-l,-l>}`` (indices 0..3).
* Three-photon scenario: 8x8 in the product basis
  ``{|l,l,l>, |l,l,-l>, |l,-l,l>, |l,-l,-l>,
     |-l,l,l>, |-l,l,-l>, |-l,-l,l>, |-l,-l,-l>}`` (indices 0..7).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError
from .linalg import DensityMatrix, ModeBasis

TWO_PHOTON_BASIS_LABELS = ("l,l", "l,-l", "-l,l", "-l,-l")
THREE_PHOTON_BASIS_LABELS = (
    "l,l,l", "l,l,-l", "l,-l,l", "l,-l,-l",
    "-l,l,l", "-l,l,-l", "-l,-l,l", "-l,-l,-l",
)

_BASIS4 = ModeBasis.contiguous(0, 3)
_BASIS8 = ModeBasis.contiguous(0, 7)


@dataclass(frozen=True)
class WernerParams:
    """Werner-like initial state plus oceanic-channel amplitudes.

    gamma_purity in [0, 1] mixes white noise with the pure state
    cos(theta/2)|l,-l> + e^(i*phi) sin(theta/2)|-l,l>. mu and nu are the
    survival and crosstalk amplitudes of the channel.
    """

    gamma_purity: float
    theta: float
    phi: float
    mu: float
    nu: float

    def __post_init__(self):
        if not 0.0 <= self.gamma_purity <= 1.0:
            raise ValueError(f"gamma_purity must lie in [0, 1], got {self.gamma_purity}")
        if self.mu < 0 or self.nu < 0:
            raise ValueError("amplitudes mu, nu must be non-negative")
        if self.mu + self.nu <= 0:
            raise DegenerateChannelError("mu + nu = 0: channel normalization diverges")


@dataclass(frozen=True)
class TwoQubitParams:
    """Survival amplitude a, crosstalk amplitude b, relative phase gamma_phase."""

    a: float
    b: float
    gamma_phase: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("amplitudes a, b must be non-negative")
        if self.a + self.b <= 0:
            raise DegenerateChannelError("a + b = 0: channel normalization diverges")


@dataclass(frozen=True)
class ThreeQubitParams:
    """Five superposition amplitudes plus survival/crosstalk amplitudes."""

    alphas: tuple[complex, ...]
    a: float
    b: float

    def __post_init__(self):
        alphas = tuple(complex(x) for x in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if len(alphas) != 5:
            raise ValueError(f"need 5 amplitudes, got {len(alphas)}")
        norm = sum(abs(x) ** 2 for x in alphas)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"amplitudes must be normalized, got sum |alpha|^2 = {norm!r}")
        if self.a < 0 or self.b < 0:
            raise ValueError("amplitudes a, b must be non-negative")
        if self.a + self.b <= 0:
            raise DegenerateChannelError("a + b = 0: channel normalization diverges")


def werner_initial(p: WernerParams) -> DensityMatrix:
    """((1-gamma)/4) * I + gamma |psi><psi| on the 4-dim product basis."""
    g = p.gamma_purity
    c, s = np.cos(p.theta / 2.0), np.sin(p.theta / 2.0)
    psi = np.array([0.0, c, np.exp(1j * p.phi) * s, 0.0], dtype=np.complex128)
    mat = (1.0 - g) / 4.0 * np.eye(4, dtype=np.complex128) + g * np.outer(psi, psi.conj())
    return DensityMatrix(_BASIS4, mat)


def apply_werner_turbulence(rho0: DensityMatrix, mu: float, nu: float) -> DensityMatrix:
    """Oceanic-channel map on an arbitrary 4x4 state in the product basis.

    With alpha = (mu+nu)^-2, the surviving elements are

        rho_11' = alpha (mu^2 r11 + mu nu r22 + mu nu r33 + nu^2 r44)
        rho_22' = alpha (mu nu r11 + mu^2 r22 + nu^2 r33 + mu nu r44)
        rho_33' = alpha (mu nu r11 + nu^2 r22 + mu^2 r33 + mu nu r44)
        rho_44' = alpha (nu^2 r11 + mu nu r22 + mu nu r33 + mu^2 r44)
        rho_14' = alpha mu^2 r14,   rho_23' = alpha mu^2 r23

    (1-based positions); rho_41', rho_32' follow by Hermiticity and every
    other entry is zero.
    """
    if rho0.dim != 4:
        raise ValueError(f"expected a 4x4 state, got dimension {rho0.dim}")
    if mu < 0 or nu < 0:
        raise ValueError("amplitudes mu, nu must be non-negative")
    if mu + nu <= 0:
        raise DegenerateChannelError("mu + nu = 0: channel normalization diverges")
    alpha = (mu + nu) ** -2.0
    r = rho0.mat
    d = np.array([r[0, 0], r[1, 1], r[2, 2], r[3, 3]])
    mix = np.array(
        [
            [mu**2, mu * nu, mu * nu, nu**2],
            [mu * nu, mu**2, nu**2, mu * nu],
            [mu * nu, nu**2, mu**2, mu * nu],
            [nu**2, mu * nu, mu * nu, mu**2],
        ]
    )
    out = np.zeros((4, 4), dtype=np.complex128)
    out[np.diag_indices(4)] = alpha * (mix @ d)
    out[0, 3] = alpha * mu**2 * r[0, 3]
    out[1, 2] = alpha * mu**2 * r[1, 2]
    out[3, 0] = np.conj(out[0, 3])
    out[2, 1] = np.conj(out[1, 2])
    return DensityMatrix(rho0.basis, out)


def werner_output(p: WernerParams) -> DensityMatrix:
    """Werner-like initial state propagated through the oceanic channel."""
    return apply_werner_turbulence(werner_initial(p), p.mu, p.nu)


def two_qubit_output(p: TwoQubitParams) -> DensityMatrix:
    """Closed-form output for the entangled pair under Kolmogorov turbulence.

    1/(2(a+b)^2) * [[2ab, 0, 0, 0],
                    [0, a^2+b^2, a^2 e^(-i gamma), 0],
                    [0, a^2 e^(i gamma), a^2+b^2, 0],
                    [0, 0, 0, 2ab]]
    """
    a, b, g = p.a, p.b, p.gamma_phase
    norm = 1.0 / (2.0 * (a + b) ** 2)
    mat = np.zeros((4, 4), dtype=np.complex128)
    mat[0, 0] = mat[3, 3] = 2.0 * a * b
    mat[1, 1] = mat[2, 2] = a**2 + b**2
    mat[1, 2] = a**2 * np.exp(-1j * g)
    mat[2, 1] = a**2 * np.exp(1j * g)
    return DensityMatrix(_BASIS4, norm * mat)


# Positions of the bilinear entries in the 8x8 three-photon output
# (0-based). Key: entry index used by the invariant list; value: (row, col).
# The five superposed modes sit at basis indices 3, 5, 6, 0, 7 for
# amplitudes alpha_1..alpha_5 respectively.
THREE_PHOTON_ENTRY_POS = {
    1: (3, 5), 2: (3, 6), 3: (3, 0), 4: (3, 7),
    5: (5, 3), 6: (5, 6), 7: (5, 0), 8: (5, 7),
    9: (6, 3), 10: (6, 5), 11: (6, 0), 12: (6, 7),
    13: (0, 3), 14: (0, 5), 15: (0, 6), 16: (0, 7),
    17: (7, 3), 18: (7, 5), 19: (7, 6), 20: (7, 0),
}


def _three_photon_entries(p: ThreeQubitParams):
    """Unnormalised diagonal (G) and bilinear (M) entries of the output."""
    a, b = p.a, p.b
    m1, m2, m3, m4, m5 = p.alphas
    w = [abs(x) ** 2 for x in p.alphas]  # |alpha_1|^2 .. |alpha_5|^2

    g = np.empty(8)
    g[0] = w[3] * a**3 + (w[0] + w[1] + w[2]) * a * b**2 + w[4] * b**3
    g[1] = (w[0] + w[3] + w[1]) * a**2 * b + w[4] * a * b**2 + w[2] * b**3
    g[2] = (w[0] + w[2] + w[3]) * a**2 * b + w[1] * b**3 + w[4] * a * b**2
    g[3] = w[0] * a**3 + (w[1] + w[2] + w[3]) * a * b**2 + w[4] * a**2 * b
    g[4] = w[0] * b**3 + (w[1] + w[2] + w[3]) * a**2 * b + w[4] * a * b**2
    g[5] = w[1] * a**3 + (w[0] + w[2] + w[3]) * a * b**2 + w[4] * a**2 * b
    g[6] = w[2] * a**3 + (w[0] + w[1] + w[3]) * a * b**2 + w[4] * a**2 * b
    g[7] = w[4] * a**3 + (w[0] + w[1] + w[2]) * a**2 * b + w[3] * b**3

    a3 = a**3
    m = {
        1: m1 * np.conj(m2) * a3,
        2: m1 * np.conj(m3) * a3,
        3: m1 * np.conj(m4) * a3,
        4: m1 * np.conj(m5) * a3,
        6: m2 * np.conj(m3) * a3,
        7: m2 * np.conj(m4) * a3,
        8: m2 * np.conj(m5) * a3,
        11: m3 * np.conj(m4) * a3,
        12: m3 * np.conj(m5) * a3,
        16: m4 * np.conj(m5) * a3,
    }
    for lo, hi in ((1, 5), (2, 9), (3, 13), (4, 17), (6, 10), (7, 14),
                   (8, 18), (11, 15), (12, 19), (16, 20)):
        m[hi] = np.conj(m[lo])
    return g, m


def three_qubit_output(p: ThreeQubitParams) -> DensityMatrix:
    """Closed-form 8x8 output for the three-photon five-mode superposition.

    Assembled from the reported per-entry polynomials in (a, b) and the
    bilinears alpha_i alpha_j^* a^3, then divided by its trace (which
    equals (a+b)^3 for normalised amplitudes); every entry outside the
    fixed sparsity pattern is exactly zero.
    """
    g, m = _three_photon_entries(p)
    mat = np.zeros((8, 8), dtype=np.complex128)
    mat[np.diag_indices(8)] = g
    for idx, (i, j) in THREE_PHOTON_ENTRY_POS.items():
        mat[i, j] = m[idx]
    tr = float(np.trace(mat).real)
    if tr <= 0.0:
        raise DegenerateChannelError("output trace vanished; a + b must be positive")
    return DensityMatrix(_BASIS8, mat / tr)
