"""Crosstalk and generalised flip channels built from weighted shift operators.

Two channel families share one Kraus container:

* A crosstalk channel moves weight from each transmitted mode ``n`` to
  ``n +/- k`` (k up to ``max_spill``) with probability ``p_k`` independent
  of ``n``. Its operators are rectangular: they map the M transmitted
  modes into the enlarged range ``[l_min - l, l_max + l]`` without
  wraparound, so mode identity is preserved in the output labels.
* A generalised flip channel mixes cyclic shifts ``X^r`` in a fixed
  dimension ``N`` with modular (wraparound) arithmetic on abstract indices
  ``0..N-1``.

On states supported away from the wrap boundary the two act identically;
``embed_state`` is the explicit bridge between the labelings.

Trace preservation requires ``p_0 + 2*sum(p_k) = 1`` and an explicit
identity operator ``sqrt(p_0) * I``; both are enforced here since the
channels are meant to be physical (CPTP).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ChannelSpecError, ShapeError
from .linalg import DensityMatrix, ModeBasis

_COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class SpilloverSpec:
    """Per-magnitude crossover probabilities p_0..p_l.

    ``probs[k]`` applies to both the +k and -k shift, so normalization is
    ``p_0 + 2*sum(p_1..p_l) = 1`` (within 1e-12).
    """

    max_spill: int
    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if self.max_spill < 0:
            raise ChannelSpecError(f"max_spill must be >= 0, got {self.max_spill}")
        if len(probs) != self.max_spill + 1:
            raise ChannelSpecError(
                f"need {self.max_spill + 1} probabilities p_0..p_{self.max_spill}, "
                f"got {len(probs)}"
            )
        if any(p < 0 for p in probs):
            raise ChannelSpecError(f"negative probability in {probs}")
        total = probs[0] + 2.0 * sum(probs[1:])
        if abs(total - 1.0) > 1e-12:
            raise ChannelSpecError(
                f"p_0 + 2*sum(p_k) = {total!r}, must equal 1 (trace preservation)"
            )


@dataclass(frozen=True)
class KrausChannel:
    """A set of weighted shift operators with a declared input support.

    ``operators[i]`` maps the input_support modes (columns) into the
    output_basis modes (rows). Completeness sum(K^dag K) = identity on the
    input support is verified at construction (1e-10).
    """

    operators: tuple[np.ndarray, ...]
    input_support: ModeBasis
    output_basis: ModeBasis

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.operators)
        object.__setattr__(self, "operators", ops)
        m, n = len(self.input_support), len(self.output_basis)
        for k in ops:
            if k.shape != (n, m):
                raise ShapeError(f"operator shape {k.shape} != ({n}, {m})")
        total = sum(k.conj().T @ k for k in ops)
        defect = float(np.abs(total - np.eye(m)).max())
        if defect > _COMPLETENESS_TOL:
            raise ChannelSpecError(
                f"channel is not trace preserving: |sum K^dag K - I| = {defect:.3e}"
            )

    @property
    def output_dim(self) -> int:
        return len(self.output_basis)

    def stacked(self) -> np.ndarray:
        """Operators as a (k, rows, cols) array for the apply kernel."""
        return np.stack(self.operators)


def build_ic_channel(l_min: int, l_max: int, spec: SpilloverSpec) -> KrausChannel:
    """Crosstalk channel on transmitted modes l_min..l_max.

    Operators: sqrt(p_0) times the identity embedding, plus for each
    1 <= k <= max_spill with p_k > 0 the pair sqrt(p_k) * sum_n |n+k><n|
    and sqrt(p_k) * sum_n |n-k><n|. Output modes are labelled
    ``l_min - max_spill .. l_max + max_spill``.
    """
    if l_max < l_min:
        raise ChannelSpecError(f"l_max {l_max} < l_min {l_min}")
    spill = spec.max_spill
    m = l_max - l_min + 1
    n = m + 2 * spill
    input_support = ModeBasis.contiguous(l_min, l_max)
    output_basis = ModeBasis.contiguous(l_min - spill, l_max + spill)

    def shift_block(k):
        # column j is input mode l_min + j; row offset is spill (the
        # output range starts at l_min - spill)
        op = np.zeros((n, m), dtype=np.complex128)
        for j in range(m):
            op[j + spill + k, j] = 1.0
        return op

    ops = []
    if spec.probs[0] > 0.0:
        ops.append(np.sqrt(spec.probs[0]) * shift_block(0))
    for k in range(1, spill + 1):
        if spec.probs[k] > 0.0:
            ops.append(np.sqrt(spec.probs[k]) * shift_block(+k))
            ops.append(np.sqrt(spec.probs[k]) * shift_block(-k))
    return KrausChannel(tuple(ops), input_support, output_basis)


def build_flip_channel(dim: int, spec: SpilloverSpec) -> KrausChannel:
    """Generalised flip channel: mixture of cyclic shifts in ``dim``.

    Operators sqrt(p_0)*I plus sqrt(p_k)*X^k and sqrt(p_k)*(X^k)^dag with
    modular shifts. Shifts that coincide modulo ``dim`` (the +k and -k
    directions at 2k = 0 mod dim, or k a multiple of dim) are merged into
    a single operator with the summed weight, which keeps the Kraus set
    free of duplicates while preserving the channel map.
    """
    if dim < 2:
        raise ChannelSpecError(f"flip channel needs dimension >= 2, got {dim}")
    weights = {0: spec.probs[0]}
    for k in range(1, spec.max_spill + 1):
        for shift in (k % dim, (-k) % dim):
            weights[shift] = weights.get(shift, 0.0) + spec.probs[k]

    basis = ModeBasis.contiguous(0, dim - 1)
    ops = []
    for shift in sorted(weights):
        w = weights[shift]
        if w <= 0.0:
            continue
        op = np.zeros((dim, dim), dtype=np.complex128)
        for j in range(dim):
            op[(j + shift) % dim, j] = np.sqrt(w)
        ops.append(op)
    return KrausChannel(tuple(ops), basis, basis)


def apply_channel(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """sum_k K rho K^dag, returned on the channel's output basis.

    The state may be supported on a subset of the declared input modes;
    missing modes are treated as zero rows/columns.
    """
    if rho.basis == channel.input_support:
        block = rho.mat
    elif rho.basis.is_subset_of(channel.input_support):
        idx = [channel.input_support.index(lbl) for lbl in rho.basis]
        block = np.zeros((len(channel.input_support),) * 2, dtype=np.complex128)
        block[np.ix_(idx, idx)] = rho.mat
    else:
        raise ShapeError(
            f"state modes {rho.basis.labels} not within channel input "
            f"support {channel.input_support.labels}"
        )
    out = kernels.kraus_apply(channel.stacked(), block)
    return DensityMatrix(channel.output_basis, out)


def embed_state(rho: DensityMatrix, dim: int, offset: int) -> DensityMatrix:
    """Place rho as a block at ``offset`` inside a dim-dimensional zero
    matrix, on abstract index labels 0..dim-1. Trace is preserved."""
    m = rho.dim
    if offset < 0 or offset + m > dim:
        raise ShapeError(f"cannot embed {m}-mode state at offset {offset} in dimension {dim}")
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[offset : offset + m, offset : offset + m] = rho.mat
    return DensityMatrix(ModeBasis.contiguous(0, dim - 1), mat)


def flip_scale_factor(spec: SpilloverSpec, dim: int, s: int) -> complex:
    """Scalar by which a flip channel multiplies <Z^s>:
    p_0 + sum_k p_k * (w^(k*s) + w^(-k*s)). Zero means the phase-ratio
    invariants are undefined after the channel."""
    omega = np.exp(2j * np.pi / dim)
    total = complex(spec.probs[0])
    for k in range(1, spec.max_spill + 1):
        total += spec.probs[k] * (omega ** (k * s) + omega ** (-k * s))
    return total
