"""Ancilla-free error rejection and correction for crosstalk channels.

Both codes fight mode-shift errors by spacing the logical basis modes so
far apart that shifted copies of a codeword land in disjoint mode sets:

* rejection (detect only): spacing l + 1 suffices, since any shift by
  1..l moves a code mode off the code-mode grid;
* correction: spacing 2l + 1 makes the shifted grids for every signed
  shift mutually disjoint, so a projective measurement identifies which
  shift occurred and an inverse relabelling undoes it.

A code for M logical amplitudes with maximum spill l lives on the ambient
mode range 0 .. (M-1)*spacing + 2l, which contains every mode reachable
from a codeword after a single shift. Syndromes are labelled by the
detected signed shift (0 means no error); the measurement observable
assigns one distinct eigenvalue per label, so integer tags stand in for
the eigenvalues themselves.

Measurement comes in two forms: an exact outcome distribution, and a
sampled projective measurement that takes the caller's PRNG (no hidden
global randomness).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channels import SpilloverSpec
from .errors import NotNormalizedError, ShapeError, UnknownSyndromeError
from .linalg import DensityMatrix, ModeBasis

_ORTHO_TOL = 1e-12
ACCEPTED = "accepted"
REJECTED = "rejected"


def _mode_projector(dim: int, modes) -> np.ndarray:
    p = np.zeros((dim, dim), dtype=np.complex128)
    for m in modes:
        p[m, m] = 1.0
    return p


def _freeze(arr):
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RejectionCode:
    """Mode-spaced code that detects (and discards) corrupted states."""

    n_logical: int
    max_spill: int
    code_modes: tuple[int, ...]
    ambient_basis: ModeBasis
    projector_code: np.ndarray
    projector_error: np.ndarray

    @property
    def spacing(self) -> int:
        return self.max_spill + 1

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient_basis)


@dataclass(frozen=True)
class CorrectionCode:
    """Mode-spaced code whose syndromes identify the signed shift.

    ``projectors[k]`` projects onto the modes reached by shift k (k = 0
    is the code space); ``corrections[k]`` is the relabelling that undoes
    shift k. The projectors are mutually orthogonal and resolve the
    ambient identity.
    """

    n_logical: int
    max_spill: int
    code_modes: tuple[int, ...]
    ambient_basis: ModeBasis
    projectors: dict[int, np.ndarray]
    corrections: dict[int, np.ndarray]

    @property
    def spacing(self) -> int:
        return 2 * self.max_spill + 1

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient_basis)

    @property
    def syndromes(self) -> tuple[int, ...]:
        return tuple(sorted(self.projectors, key=abs))


def _code_geometry(n_logical: int, max_spill: int, spacing: int):
    if n_logical < 2:
        raise ValueError(f"need at least 2 logical modes, got {n_logical}")
    if max_spill < 1:
        raise ValueError(f"max_spill must be >= 1, got {max_spill}")
    offset = max_spill
    modes = tuple(offset + j * spacing for j in range(n_logical))
    ambient_dim = (n_logical - 1) * spacing + 2 * max_spill + 1
    return modes, ambient_dim


def build_rejection_code(n_logical: int, max_spill: int) -> RejectionCode:
    """Code over modes {l, l + (l+1), ...} with an accept/reject observable."""
    spacing = max_spill + 1
    modes, dim = _code_geometry(n_logical, max_spill, spacing)
    error_modes = sorted(
        {m + s for m in modes for s in range(-max_spill, max_spill + 1) if s != 0}
    )
    proj_code = _mode_projector(dim, modes)
    proj_err = _mode_projector(dim, error_modes)
    if float(np.abs(proj_code @ proj_err).max()) > _ORTHO_TOL:
        raise AssertionError("code and error projectors overlap")
    return RejectionCode(
        n_logical, max_spill, modes, ModeBasis.contiguous(0, dim - 1),
        _freeze(proj_code), _freeze(proj_err),
    )


def build_correction_code(n_logical: int, max_spill: int) -> CorrectionCode:
    """Code over modes {l, l + (2l+1), ...} with per-shift syndromes."""
    spacing = 2 * max_spill + 1
    modes, dim = _code_geometry(n_logical, max_spill, spacing)
    projectors = {0: _mode_projector(dim, modes)}
    corrections = {0: np.eye(dim, dtype=np.complex128)}
    for k in range(1, max_spill + 1):
        for shift in (k, -k):
            shifted = [m + shift for m in modes]
            projectors[shift] = _mode_projector(dim, shifted)
            undo = np.zeros((dim, dim), dtype=np.complex128)
            for m in modes:
                undo[m, m + shift] = 1.0
            corrections[shift] = undo
    for a in projectors:
        for b in projectors:
            if a < b:
                overlap = float(np.abs(projectors[a] @ projectors[b]).max())
                if overlap > _ORTHO_TOL:
                    raise AssertionError(f"projectors {a} and {b} overlap ({overlap:.1e})")
    for arr in list(projectors.values()) + list(corrections.values()):
        _freeze(arr)
    return CorrectionCode(
        n_logical, max_spill, modes, ModeBasis.contiguous(0, dim - 1),
        projectors, corrections,
    )


def codeword_vector(code, amplitudes) -> np.ndarray:
    """Ambient amplitude vector for the given logical amplitudes."""
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.shape != (code.n_logical,):
        raise ShapeError(f"need {code.n_logical} amplitudes, got shape {amps.shape}")
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > 1e-12:
        raise NotNormalizedError(f"sum |amplitude|^2 = {norm!r}, must be 1")
    psi = np.zeros(code.ambient_dim, dtype=np.complex128)
    for amp, mode in zip(amps, code.code_modes):
        psi[mode] = amp
    return psi


def encode(code, amplitudes) -> DensityMatrix:
    """Pure codeword state embedded in the full reachable mode range."""
    psi = codeword_vector(code, amplitudes)
    return DensityMatrix(code.ambient_basis, np.outer(psi, psi.conj()))


def error_operator(code, shift: int) -> np.ndarray:
    """Plain mode-shift operator on the ambient range (no wraparound).

    Codeword states keep unit norm under every |shift| <= max_spill, by
    the margin built into the ambient range.
    """
    dim = code.ambient_dim
    if shift == 0:
        return np.eye(dim, dtype=np.complex128)
    if abs(shift) > code.max_spill:
        raise ShapeError(f"|shift| = {abs(shift)} exceeds max_spill {code.max_spill}")
    op = np.zeros((dim, dim), dtype=np.complex128)
    for m in range(dim):
        if 0 <= m + shift < dim:
            op[m + shift, m] = 1.0
    return op


def transmit(code, spec: SpilloverSpec, rho: DensityMatrix) -> DensityMatrix:
    """Send an ambient-embedded state through the crosstalk mixture.

    Raises ShapeError when the state is not ambient-dimensional or its
    support leaks outside the ambient range under the channel (this
    cannot happen for codewords, whose reachable modes all fit).
    """
    if rho.dim != code.ambient_dim:
        raise ShapeError(f"state dimension {rho.dim} != ambient {code.ambient_dim}")
    if spec.max_spill > code.max_spill:
        raise ShapeError(
            f"channel spill {spec.max_spill} exceeds code design spill {code.max_spill}"
        )
    ops = [np.sqrt(spec.probs[0]) * error_operator(code, 0)]
    for k in range(1, spec.max_spill + 1):
        if spec.probs[k] > 0.0:
            ops.append(np.sqrt(spec.probs[k]) * error_operator(code, +k))
            ops.append(np.sqrt(spec.probs[k]) * error_operator(code, -k))
    out = kernels.kraus_apply(np.stack(ops), rho.mat)
    if abs(complex(np.trace(out)) - 1.0) > 1e-12:
        raise ShapeError("state support leaks outside the ambient mode range")
    return DensityMatrix(code.ambient_basis, out)


def _project(rho: DensityMatrix, proj: np.ndarray):
    prob = float(np.real(kernels.trace_product(proj, rho.mat)))
    return max(prob, 0.0), proj @ rho.mat @ proj


def syndrome_distribution(code: CorrectionCode, rho: DensityMatrix):
    """Exact outcome table: list of (syndrome, probability, post_state).

    Outcomes with probability below 1e-15 are omitted; the reported
    probabilities sum to 1 because the projectors resolve the identity.
    """
    if rho.dim != code.ambient_dim:
        raise ShapeError(f"state dimension {rho.dim} != ambient {code.ambient_dim}")
    table = []
    for k in code.syndromes:
        prob, projected = _project(rho, code.projectors[k])
        if prob > 1e-15:
            table.append((k, prob, DensityMatrix(code.ambient_basis, projected / prob)))
    return table


def measure_syndrome(code: CorrectionCode, rho: DensityMatrix, rng: np.random.Generator):
    """Sample one projective outcome: (syndrome, post_state, probability)."""
    table = syndrome_distribution(code, rho)
    probs = np.array([p for _, p, _ in table])
    idx = rng.choice(len(table), p=probs / probs.sum())
    k, prob, post = table[idx]
    return k, post, prob


def correct(code: CorrectionCode, syndrome: int, rho: DensityMatrix) -> DensityMatrix:
    """Undo the detected shift by relabelling modes back onto the code grid."""
    if syndrome not in code.corrections:
        raise UnknownSyndromeError(f"syndrome {syndrome!r} not in {code.syndromes}")
    if rho.dim != code.ambient_dim:
        raise ShapeError(f"state dimension {rho.dim} != ambient {code.ambient_dim}")
    if syndrome == 0:
        return rho
    u = code.corrections[syndrome]
    return DensityMatrix(code.ambient_basis, u @ rho.mat @ u.conj().T)


def rejection_distribution(code: RejectionCode, rho: DensityMatrix):
    """Exact accept/reject table: list of (tag, probability, post_state)."""
    if rho.dim != code.ambient_dim:
        raise ShapeError(f"state dimension {rho.dim} != ambient {code.ambient_dim}")
    table = []
    for tag, proj in ((ACCEPTED, code.projector_code), (REJECTED, code.projector_error)):
        prob, projected = _project(rho, proj)
        if prob > 1e-15:
            table.append((tag, prob, DensityMatrix(code.ambient_basis, projected / prob)))
    return table


def measure_rejection(code: RejectionCode, rho: DensityMatrix, rng: np.random.Generator):
    """Sample the accept/reject measurement: (tag, post_state, probability)."""
    table = rejection_distribution(code, rho)
    probs = np.array([p for _, p, _ in table])
    idx = rng.choice(len(table), p=probs / probs.sum())
    tag, prob, post = table[idx]
    return tag, post, prob
