"""Full state reconstruction from channel output using invariants only.

The reconstruction never references the channel probabilities: every
equation is built from family-one and family-two invariants evaluated on
the output state in its working dimension N = max(2M - 1, M + 2l), where
M is the number of transmitted modes and l the maximum spillover. The
2M - 1 floor guarantees the shift X^(M-1) is not its own inverse, so
<X^(M-1)> picks out a single corner element.

Solve order (one superdiagonal at a time):

1. corner element rho[o, o+M-1] = <X^(M-1)> (o = embedding offset),
2. diagonal: the M-1 equations <Z^s> = I2(M-1, s) * w^(o s) * corner plus
   the trace condition form a Vandermonde system in the populations,
3. for p = M-2 down to 1: <X^p> plus the family-two equations for
   s = 1..M-1-p form a square system for superdiagonal p; the lower
   triangle follows by Hermiticity.

All systems are solved in least-squares form with per-system residuals
reported, so degraded conditioning is observable rather than silent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedError, IllPosedError, ShapeError, SingularSystemError
from .linalg import DensityMatrix, ModeBasis, expectation, make_shift, make_weyl, make_phase
from .turbulence import THREE_PHOTON_ENTRY_POS

logger = logging.getLogger(__name__)

DEFAULT_CORNER_FLOOR = 1e-3
_SUPPORT_TOL = 1e-10


def minimum_dimension(n_modes: int, max_spill: int) -> int:
    """Smallest working dimension for retrieval: max(2M - 1, M + 2l)."""
    return max(2 * n_modes - 1, n_modes + 2 * max_spill)


@dataclass(frozen=True)
class RetrievalProblem:
    """Channel output plus the geometry needed to invert it.

    ``rho_out`` must live in the working dimension and the initial modes
    occupy indices ``embed_offset .. embed_offset + n_modes - 1`` (the
    offset is declared, never inferred). Entries outside the reachable
    window are required to vanish within 1e-10.
    """

    n_modes: int
    max_spill: int
    rho_out: DensityMatrix
    embed_offset: int = field(default=-1)

    def __post_init__(self):
        if self.n_modes < 1:
            raise ShapeError(f"need at least one transmitted mode, got {self.n_modes}")
        if self.max_spill < 0:
            raise ShapeError(f"max_spill must be >= 0, got {self.max_spill}")
        if self.embed_offset < 0:
            object.__setattr__(self, "embed_offset", self.max_spill)
        dim = minimum_dimension(self.n_modes, self.max_spill)
        if self.rho_out.dim != dim:
            raise ShapeError(
                f"output state dimension {self.rho_out.dim} != working dimension {dim}"
            )
        lo = self.embed_offset - self.max_spill
        hi = self.embed_offset + self.n_modes - 1 + self.max_spill
        if lo < 0 or hi > dim - 1:
            raise ShapeError(
                f"reachable window [{lo}, {hi}] exceeds dimension {dim}; "
                f"check embed_offset"
            )
        mask = np.ones((dim, dim), dtype=bool)
        mask[lo : hi + 1, lo : hi + 1] = False
        leak = float(np.abs(self.rho_out.mat[mask]).max()) if mask.any() else 0.0
        if leak > _SUPPORT_TOL:
            raise ShapeError(
                f"output has weight {leak:.3e} outside the reachable window [{lo}, {hi}]"
            )


@dataclass(frozen=True)
class ReconstructedState:
    """Recovered initial state plus per-system least-squares residuals."""

    rho: DensityMatrix
    residuals: dict[str, float]


def check_condition(rho: DensityMatrix, n_modes: int, offset: int = 0,
                    *, tol: float = 1e-10) -> bool:
    """True iff <X^(M-1) Z^r> = w^(offset*r) <X^(M-1)> for every r.

    Holds whenever the state is supported on ``n_modes`` contiguous
    indices starting at ``offset`` and the ambient dimension is at least
    2M - 1 (so the corner shift never wraps back into the support).
    """
    dim = rho.dim
    if not 1 <= n_modes <= dim:
        raise ShapeError(f"n_modes {n_modes} outside [1, {dim}]")
    omega = np.exp(2j * np.pi / dim)
    corner = expectation(rho, make_shift(dim, n_modes - 1))
    if abs(corner) <= tol:
        logger.warning(
            "corner expectation ~ 0 (%.3e): condition holds vacuously but "
            "retrieval would be ill posed", abs(corner),
        )
    for r in range(1, dim):
        lhs = expectation(rho, make_weyl(dim, n_modes - 1, r))
        if abs(lhs - omega ** (offset * r) * corner) > tol:
            return False
    return True


def _lstsq(a: np.ndarray, b: np.ndarray, label: str):
    """Least-squares solve with rank and conditioning checks."""
    cond = np.linalg.cond(a)
    if not np.isfinite(cond):
        raise SingularSystemError(f"{label} system has infinite condition number")
    logger.debug("%s system: %d x %d, condition number %.3e", label, *a.shape, cond)
    x, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < a.shape[1]:
        raise SingularSystemError(
            f"{label} system rank {rank} < {a.shape[1]} unknowns "
            f"(condition number {cond:.3e})"
        )
    residual = float(np.abs(a @ x - b).max())
    return x, residual


def retrieve_full_state(
    problem: RetrievalProblem, *, corner_floor: float = DEFAULT_CORNER_FLOOR
) -> ReconstructedState:
    """Reconstruct the transmitted M x M state from the channel output.

    Raises IllPosedError when the recovered corner element falls below
    ``corner_floor`` (relative to the output max-norm): the anchoring
    equations all divide by it, so such states must be prepared with a
    non-vanishing corner coherence to be retrievable. Raises
    SingularSystemError when conditioning knocks out needed equations.
    """
    m, o = problem.n_modes, problem.embed_offset
    rho_out = problem.rho_out
    dim = rho_out.dim
    omega = np.exp(2j * np.pi / dim)
    scale = float(np.abs(rho_out.mat).max())
    tol_abs = _SUPPORT_TOL * max(scale, 1.0)

    def expect(r, s):
        return expectation(rho_out, make_weyl(dim, r % dim, s))

    # step 1: the corner element is a family-one invariant
    corner = expect(m - 1, 0)
    if abs(corner) < corner_floor * scale:
        raise IllPosedError(
            f"|rho[{o}, {o + m - 1}]| = {abs(corner):.3e} below floor "
            f"{corner_floor:.1e} * {scale:.3e}; prepare the state with a "
            f"non-vanishing corner coherence"
        )

    residuals: dict[str, float] = {}
    rec = np.zeros((m, m), dtype=np.complex128)
    rec[0, m - 1] = corner
    rec[m - 1, 0] = np.conj(corner)

    # step 2: populations from family two at r = M-1 plus the trace
    nodes = np.array([omega ** k for k in range(o, o + m)])
    rows, rhs, dropped = [], [], []
    for s in range(1, m):
        den = expect(m - 1, s)
        if abs(den) <= tol_abs:
            dropped.append(s)
            continue
        zs_out = expect(0, s)
        rows.append(nodes ** s)
        rhs.append(zs_out / den * omega ** (o * s) * corner)
    rows.append(np.ones(m, dtype=np.complex128))
    rhs.append(1.0)  # trace condition
    if len(rows) < m:
        raise SingularSystemError(
            f"diagonal system lost equations for s = {dropped}; "
            f"{len(rows)} equations for {m} unknowns"
        )
    diag, res = _lstsq(np.array(rows), np.array(rhs), "diagonal")
    residuals["diagonal"] = res
    rec[np.arange(m), np.arange(m)] = diag

    # phase moments of the reconstructed populations, <Z^s> on the input
    zs_in = {s: complex(np.sum(nodes ** s * diag)) for s in range(1, m)}

    # remaining superdiagonals, widest first
    for p in range(m - 2, 0, -1):
        n_unknown = m - p
        sub_nodes = nodes[:n_unknown]
        rows = [np.ones(n_unknown, dtype=np.complex128)]
        rhs = [expect(p, 0)]
        dropped = []
        for s in range(1, m - p):
            zs_out = expect(0, s)
            if abs(zs_out) <= tol_abs:
                dropped.append(s)
                continue
            rows.append(sub_nodes ** s)
            rhs.append(zs_in[s] * expect(p, s) / zs_out)
        if len(rows) < n_unknown:
            raise SingularSystemError(
                f"superdiagonal {p} lost equations for s = {dropped}; "
                f"{len(rows)} equations for {n_unknown} unknowns"
            )
        sol, res = _lstsq(np.array(rows), np.array(rhs), f"superdiagonal {p}")
        residuals[f"superdiagonal_{p}"] = res
        for k in range(n_unknown):
            rec[k, k + p] = sol[k]
            rec[k + p, k] = np.conj(sol[k])

    basis = ModeBasis.contiguous(o, o + m - 1)
    return ReconstructedState(DensityMatrix(basis, rec), residuals)


def _anchored_entry(rho: DensityMatrix, row: int, col: int, floor: float) -> complex:
    value = complex(rho.mat[row, col])
    limit = floor * float(np.abs(rho.mat).max())
    if abs(value) < limit:
        raise IllConditionedError(
            f"|rho[{row}, {col}]| = {abs(value):.3e} below floor {limit:.3e}"
        )
    return value


def recover_werner_phi(rho_out: DensityMatrix, *, floor: float = DEFAULT_CORNER_FLOOR) -> float:
    """Relative phase of the Werner-like state from the surviving coherence.

    Uses the two-argument arctangent of (Im rho_32, Re rho_32) (1-based
    positions), which resolves the quadrant ambiguity a bare tangent
    leaves; returned in (-pi, pi].
    """
    if rho_out.dim != 4:
        raise ShapeError(f"expected a 4x4 state, got dimension {rho_out.dim}")
    return float(np.angle(_anchored_entry(rho_out, 2, 1, floor)))


def recover_two_qubit_gamma(rho_out: DensityMatrix, *, floor: float = DEFAULT_CORNER_FLOOR) -> float:
    """Relative phase of the entangled pair, from the same (3,2) element."""
    if rho_out.dim != 4:
        raise ShapeError(f"expected a 4x4 state, got dimension {rho_out.dim}")
    return float(np.angle(_anchored_entry(rho_out, 2, 1, floor)))


def recover_three_qubit_params(
    rho_out: DensityMatrix, *, floor: float = DEFAULT_CORNER_FLOOR
) -> tuple[complex, ...]:
    """All five superposition amplitudes, up to a global phase.

    Gauge: alpha_1 is returned real and positive. Relative phases come
    from the arguments of the bilinears alpha_1 alpha_j^*; magnitude
    ratios from the moduli of the bilinear ratios; the result is
    normalised to unit total weight. Raises IllConditionedError naming
    the first anchoring bilinear that sits below the floor.
    """
    if rho_out.dim != 8:
        raise ShapeError(f"expected an 8x8 state, got dimension {rho_out.dim}")
    needed = {k: THREE_PHOTON_ENTRY_POS[k] for k in (1, 2, 3, 4, 10)}
    b = {k: _anchored_entry(rho_out, *pos, floor) for k, pos in needed.items()}

    # b[j] = alpha_1 alpha_(j+1)^* (common positive factor), b[10] = alpha_2^* alpha_3
    phases = np.array([0.0, -np.angle(b[1]), -np.angle(b[2]), -np.angle(b[3]), -np.angle(b[4])])
    ratios = np.array(
        [
            abs(b[2]) / abs(b[10]),  # |alpha_1| / |alpha_2|
            1.0,
            abs(b[2]) / abs(b[1]),   # |alpha_3| / |alpha_2|
            abs(b[3]) / abs(b[1]),   # |alpha_4| / |alpha_2|
            abs(b[4]) / abs(b[1]),   # |alpha_5| / |alpha_2|
        ]
    )
    mags = ratios / np.sqrt(np.sum(ratios**2))
    return tuple(complex(v) for v in mags * np.exp(1j * phases))
