"""Quantities preserved by crosstalk/flip channels.

Two general families hold for any generalised flip channel (and hence,
through the embedding equivalence, any crosstalk channel):

* family one: <X^m>, preserved exactly because shifts commute,
* family two: <Z^s> / <X^m Z^s>, preserved because numerator and
  denominator pick up the same scalar factor
  ``p_0 + sum_k p_k (w^(ks) + w^(-ks))``.

The remaining functions compute the scenario-specific entry-ratio
invariants of the closed-form turbulence outputs (4x4 and 8x8 states from
:mod:`oamic.turbulence`).

Ratio invariants report conditioning instead of throwing: a value whose
denominator magnitude falls below ``tol`` (relative to the state's
max-norm) comes back flagged with a NaN value, so retrieval callers can
distinguish "undefined" from "zero". The exceptions below are the cases
the individual docstrings call out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError, ShapeError
from .linalg import DensityMatrix, expectation, make_shift, make_weyl, make_phase
from .turbulence import THREE_PHOTON_ENTRY_POS

DEFAULT_DENOMINATOR_TOL = 1e-8

_NAN = complex(np.nan, np.nan)


@dataclass(frozen=True)
class InvariantValue:
    """A complex invariant plus the magnitude of its denominator.

    ``value`` is meaningful only when ``well_conditioned`` is true; the
    flag records whether the denominator cleared the tolerance used at
    computation time.
    """

    value: complex
    denominator_magnitude: float
    well_conditioned: bool


def _abs_tol(rho: DensityMatrix, tol: float) -> float:
    return tol * float(np.abs(rho.mat).max())


def _ratio(num: complex, den: complex, tol_abs: float) -> InvariantValue:
    mag = abs(den)
    if mag <= tol_abs:
        return InvariantValue(_NAN, mag, False)
    return InvariantValue(num / den, mag, True)


def _check_power(rho: DensityMatrix, power: int, name: str):
    if not 1 <= power <= rho.dim - 1:
        raise ShapeError(f"{name} must lie in [1, {rho.dim - 1}], got {power}")


def family_one(rho: DensityMatrix, m: int) -> InvariantValue:
    """<X^m> in the state's full dimension; no denominator involved."""
    _check_power(rho, m, "m")
    return InvariantValue(expectation(rho, make_shift(rho.dim, m)), 1.0, True)


def family_two(
    rho: DensityMatrix, m: int, s: int, *, tol: float = DEFAULT_DENOMINATOR_TOL
) -> InvariantValue:
    """<Z^s> / <X^m Z^s>.

    Raises IllConditionedError when numerator and denominator both vanish
    (the ratio is then undefined, e.g. after a flip channel whose scale
    factor for this ``s`` is zero); a vanishing denominator alone yields a
    flagged value.
    """
    _check_power(rho, m, "m")
    _check_power(rho, s, "s")
    num = expectation(rho, make_phase(rho.dim, s))
    den = expectation(rho, make_weyl(rho.dim, m, s))
    tol_abs = _abs_tol(rho, tol)
    if abs(num) <= tol_abs and abs(den) <= tol_abs:
        raise IllConditionedError(
            f"<Z^{s}> and <X^{m} Z^{s}> both vanish "
            f"({abs(num):.3e}, {abs(den):.3e}); ratio undefined"
        )
    return _ratio(num, den, tol_abs)


def tan_phase_invariant(
    rho: DensityMatrix, i: int, j: int, *, tol: float = DEFAULT_DENOMINATOR_TOL
) -> InvariantValue:
    """Tangent of the phase of the matrix element rho[j, i].

    Computed as the ratio -i(rho_ji - rho_ij) / (rho_ij + rho_ji) with
    0-based indices, so for rho_ji = c e^(i chi) the value is tan(chi).
    Raises IllConditionedError when |rho_ij + rho_ji| is below tolerance
    (phase at +-pi/2, where the tangent diverges; use the two-argument
    arctangent recovery functions instead).
    """
    if i == j:
        raise ShapeError("need two distinct indices")
    for idx in (i, j):
        if not 0 <= idx < rho.dim:
            raise ShapeError(f"index {idx} outside dimension {rho.dim}")
    upper = complex(rho.mat[i, j])
    lower = complex(rho.mat[j, i])
    den = upper + lower
    tol_abs = _abs_tol(rho, tol)
    if abs(den) <= tol_abs:
        raise IllConditionedError(
            f"|rho[{i},{j}] + rho[{j},{i}]| = {abs(den):.3e} below tolerance"
        )
    return InvariantValue(-1j * (lower - upper) / den, abs(den), True)


def werner_ratio_invariants(
    rho: DensityMatrix, *, tol: float = DEFAULT_DENOMINATOR_TOL
) -> tuple[InvariantValue, InvariantValue, InvariantValue]:
    """The three entry-ratio invariants of the oceanic-channel output.

    In 1-based positions of the 4x4 product basis:

        I1 = (rho_11 - rho_44) / (rho_22 - rho_33)
        I2 = (rho_14 + rho_41) / (rho_14 - rho_41)
        I3 = (rho_14 + rho_41) / (rho_23 + rho_32)

    Each value carries its own conditioning flag; nothing is raised, since
    callers typically inspect all three (on Werner-like initial states all
    three are structurally zero or undefined).
    """
    if rho.dim != 4:
        raise ShapeError(f"expected a 4x4 state, got dimension {rho.dim}")
    r = rho.mat
    tol_abs = _abs_tol(rho, tol)
    i1 = _ratio(r[0, 0] - r[3, 3], r[1, 1] - r[2, 2], tol_abs)
    i2 = _ratio(r[0, 3] + r[3, 0], r[0, 3] - r[3, 0], tol_abs)
    i3 = _ratio(r[0, 3] + r[3, 0], r[1, 2] + r[2, 1], tol_abs)
    return i1, i2, i3


def _three_photon_bilinears(rho: DensityMatrix) -> dict[int, complex]:
    if rho.dim != 8:
        raise ShapeError(f"expected an 8x8 state, got dimension {rho.dim}")
    return {k: complex(rho.mat[pos]) for k, pos in THREE_PHOTON_ENTRY_POS.items()}


def three_qubit_invariants(
    rho: DensityMatrix, *, tol: float = DEFAULT_DENOMINATOR_TOL
) -> list[InvariantValue]:
    """All twenty entry-ratio invariants of the three-photon output.

    Bilinear entries M_1..M_20 are read off their fixed matrix positions
    and the diagonal supplies G_4, G_6, G_7. Phase-type ratios here use
    the +i prefactor, i(M - M*)/(M + M*); see
    :func:`three_qubit_retrieval_invariants` for the -i convention.
    Ill-conditioned entries are flagged per invariant.
    """
    m = _three_photon_bilinears(rho)
    d = rho.mat.real.diagonal()
    g4, g6, g7 = d[3], d[5], d[6]
    tol_abs = _abs_tol(rho, tol)
    ref = m[1] + m[5]

    def phase(lo, hi):
        return _ratio(1j * (m[lo] - m[hi]), m[lo] + m[hi], tol_abs)

    def against_ref(lo, hi):
        return _ratio(m[lo] + m[hi], ref, tol_abs)

    return [
        phase(1, 5),
        against_ref(2, 9),
        phase(2, 9),
        phase(3, 13),
        against_ref(3, 13),
        phase(4, 17),
        against_ref(4, 17),
        phase(6, 10),
        against_ref(6, 10),
        phase(7, 14),
        against_ref(7, 14),
        phase(8, 18),
        against_ref(8, 18),
        phase(11, 15),
        against_ref(11, 15),
        phase(12, 19),
        against_ref(12, 19),
        phase(16, 20),
        against_ref(16, 20),
        _ratio(g4 - g6, g6 - g7, tol_abs),
    ]


def three_qubit_retrieval_invariants(
    rho: DensityMatrix, *, tol: float = DEFAULT_DENOMINATOR_TOL
) -> list[InvariantValue]:
    """The eight invariants sufficient for recovering the five amplitudes.

    The first four are the phase ratios -i(M - M*)/(M + M*) for the
    bilinears alpha_1 alpha_j^* (j = 2..5); note the sign prefactor is
    opposite to :func:`three_qubit_invariants` (both conventions are
    invariant, sources differ). The last four are the bilinear ratios
    M_1/M_2, M_1/M_3, M_1/M_4, M_2/M_10, whose moduli give the magnitude
    ratios of the amplitudes.
    """
    m = _three_photon_bilinears(rho)
    tol_abs = _abs_tol(rho, tol)

    def phase(lo, hi):
        return _ratio(-1j * (m[lo] - m[hi]), m[lo] + m[hi], tol_abs)

    return [
        phase(1, 5),
        phase(2, 9),
        phase(3, 13),
        phase(4, 17),
        _ratio(m[1], m[2], tol_abs),
        _ratio(m[1], m[3], tol_abs),
        _ratio(m[1], m[4], tol_abs),
        _ratio(m[2], m[10], tol_abs),
    ]
