"""Mode bases, density matrices, and cyclic shift/phase operators.

Conventions used throughout the package:

* A state is a density matrix attached to an ordered list of integer mode
  labels (``ModeBasis``); row/column ``i`` of the matrix refers to label
  ``basis.labels[i]``.
* ``X`` denotes the cyclic shift in dimension ``N`` with entries
  ``X[(k+1) % N, k] = 1`` and ``Z`` the phase operator
  ``diag(w**k)`` with ``w = exp(2*pi*i/N)`` (the principal root; every
  module shares this choice). They obey ``Z X = w X Z`` and
  ``X^-r Z^s X^r = w^(r*s) Z^s``.

Validation tolerances: Hermiticity, trace, and positivity at 1e-9;
operator identities hold to 1e-12 in double precision for the dimensions
this package targets (a few dozen at most).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    InvalidDimensionError,
    NotHermitianError,
    NotPSDError,
    ShapeError,
    TraceNotOneError,
)

TOL_HERMITIAN = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-9


def _freeze(arr):
    arr = np.array(arr, dtype=np.complex128, order="C")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ModeBasis:
    """Ordered integer mode labels defining matrix row/column meaning.

    Labels must be strictly increasing; they may be negative and need not
    be contiguous (spaced code bases use gaps deliberately).
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if any(b <= a for a, b in zip(labels, labels[1:])):
            raise ValueError(f"mode labels must be strictly increasing, got {labels}")

    @classmethod
    def contiguous(cls, lo: int, hi: int) -> "ModeBasis":
        """Basis of every integer label from lo to hi inclusive."""
        if hi < lo:
            raise ValueError(f"empty mode range [{lo}, {hi}]")
        return cls(tuple(range(lo, hi + 1)))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self.labels

    def index(self, label: int) -> int:
        """Row/column index of a mode label."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"mode {label} not in basis {self.labels}") from None

    def is_subset_of(self, other: "ModeBasis") -> bool:
        return set(self.labels) <= set(other.labels)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix over a mode basis.

    Construction checks Hermiticity (1e-9 max-entry defect), unit trace
    (1e-9), and positivity (smallest eigenvalue of the Hermitian part
    above -1e-9). Instances are immutable; the underlying array is
    read-only.
    """

    basis: ModeBasis
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = _freeze(self.mat)
        object.__setattr__(self, "mat", mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {mat.shape}")
        if mat.shape[0] != len(self.basis):
            raise ShapeError(
                f"matrix dimension {mat.shape[0]} does not match "
                f"basis size {len(self.basis)}"
            )
        violations = []
        herm_defect = float(np.abs(mat - mat.conj().T).max()) if mat.size else 0.0
        if herm_defect > TOL_HERMITIAN:
            violations.append((NotHermitianError, "not Hermitian", herm_defect))
        trace_defect = abs(complex(np.trace(mat)) - 1.0)
        if trace_defect > TOL_TRACE:
            violations.append((TraceNotOneError, "trace != 1", trace_defect))
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0).min())
        if min_eig < -TOL_PSD:
            violations.append((NotPSDError, "not positive semidefinite", -min_eig))
        if violations:
            summary = "; ".join(f"{msg} (magnitude {mag:.3e})" for _, msg, mag in violations)
            cls, _, mag = violations[0]
            raise cls(f"invalid density matrix: {summary}", mag)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def entry(self, row_label: int, col_label: int) -> complex:
        """Matrix element addressed by mode labels rather than indices."""
        return complex(self.mat[self.basis.index(row_label), self.basis.index(col_label)])


def validate_density(mat, basis: ModeBasis | None = None) -> DensityMatrix:
    """Validate a raw matrix as a density matrix.

    Raises NotHermitianError / TraceNotOneError / NotPSDError carrying the
    measured violation magnitude; the message lists every violated
    invariant. With no basis given, labels default to 0..n-1.
    """
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {mat.shape}")
    if basis is None:
        basis = ModeBasis.contiguous(0, mat.shape[0] - 1)
    return DensityMatrix(basis, mat)


@dataclass(frozen=True)
class WeylOperator:
    """Combined shift/phase operator X^r Z^s in dimension dim.

    Entries: ``M[(k+r) % dim, k] = w**(s*k)`` with ``w = exp(2*pi*i/dim)``.
    """

    dim: int
    shift_power: int
    phase_power: int

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidDimensionError(f"dimension must be >= 2, got {self.dim}")
        for name, p in (("shift", self.shift_power), ("phase", self.phase_power)):
            if not 0 <= p < self.dim:
                raise ValueError(f"{name} power {p} outside [0, {self.dim})")

    @cached_property
    def mat(self) -> np.ndarray:
        n, r, s = self.dim, self.shift_power, self.phase_power
        omega = np.exp(2j * np.pi / n)
        m = np.zeros((n, n), dtype=np.complex128)
        for k in range(n):
            m[(k + r) % n, k] = omega ** (s * k)
        return _freeze(m)

    def adjoint_mat(self) -> np.ndarray:
        return self.mat.conj().T


def make_shift(dim: int, power: int) -> WeylOperator:
    """Cyclic shift X^power: sends mode k to (k + power) mod dim."""
    return WeylOperator(dim, power, 0)


def make_phase(dim: int, power: int) -> WeylOperator:
    """Phase operator Z^power: diagonal w**(power*k)."""
    return WeylOperator(dim, 0, power)


def make_weyl(dim: int, shift_power: int, phase_power: int) -> WeylOperator:
    """Product operator X^r Z^s."""
    return WeylOperator(dim, shift_power, phase_power)


def expectation(rho: DensityMatrix, operator) -> complex:
    """trace(rho @ A) for a WeylOperator or raw matrix A."""
    a = operator.mat if isinstance(operator, WeylOperator) else np.asarray(operator)
    if a.shape != (rho.dim, rho.dim):
        raise ShapeError(f"operator shape {a.shape} does not match state dimension {rho.dim}")
    return kernels.trace_product(rho.mat, a)


def pure_state_fidelity(rho: DensityMatrix, amplitudes) -> float:
    """<psi|rho|psi> for a pure reference state given as an amplitude vector."""
    psi = np.asarray(amplitudes, dtype=np.complex128)
    if psi.shape != (rho.dim,):
        raise ShapeError(f"amplitude vector length {psi.shape} does not match dim {rho.dim}")
    return float(np.real(psi.conj() @ rho.mat @ psi))
