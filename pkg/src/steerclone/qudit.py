"""Dense linear algebra for small qudit registers.

Basis 1 is the computational basis, basis 2 the discrete Fourier basis
``|s>_2 = d^-1/2 sum_k exp(2 pi i s k / d) |k>_1``.  All entropies are in bits.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

NORM_TOL = 1e-10
PSD_TOL = 1e-8
PROB_TOL = 1e-12

MAX_FULL_STATE_D = 8
MAX_CLOSED_FORM_D = 64


def check_dimension(d, cap=MAX_CLOSED_FORM_D):
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    if d > cap:
        raise ValueError(f"dimension {d} exceeds cap {cap}")
    return int(d)


def _check_index(name, value, d):
    if not 0 <= value < d:
        raise IndexError(f"{name}={value} out of range for d={d}")


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized ket on a register with factor dimensions ``dims``."""

    amps: np.ndarray
    dims: tuple

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amps))
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "dims", dims)
        if amps.size != int(np.prod(dims)):
            raise ValueError(f"{amps.size} amplitudes do not match dims {dims}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state not normalized (|psi|^2 = {norm})")

    @property
    def dim(self):
        return self.amps.size

    def tensor(self):
        """Amplitudes reshaped to one axis per factor."""
        return self.amps.reshape(self.dims)

    def density(self):
        return DensityMatrix(np.outer(self.amps, self.amps.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian unit-trace operator; positivity is checked where it matters (entropy)."""

    entries: np.ndarray
    dims: tuple

    def __post_init__(self):
        m = _frozen(self.entries)
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "dims", dims)
        n = int(np.prod(dims))
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr}, expected 1")

    @property
    def dim(self):
        return self.entries.shape[0]

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)


def is_unitary(u, tol=NORM_TOL):
    u = np.asarray(u)
    return np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol


@lru_cache(maxsize=None)
def basis_matrix(d, setting):
    """Columns are the vectors of basis ``setting`` (1 or 2) in computational amplitudes."""
    if setting == 1:
        out = np.eye(d, dtype=complex)
    elif setting == 2:
        # entry [k, s] = <k|s>_2; the matrix is symmetric
        out = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d) / np.sqrt(d)
    else:
        raise ValueError(f"measurement setting must be 1 or 2, got {setting!r}")
    out.setflags(write=False)
    return out


def fourier_basis_vector(d, s):
    d = check_dimension(d)
    _check_index("s", s, d)
    return StateVector(basis_matrix(d, 2)[:, s], (d,))


@lru_cache(maxsize=None)
def _pauli(d, j, k):
    s = np.arange(d)
    u = np.zeros((d, d), dtype=complex)
    u[(s + j) % d, s] = np.exp(2j * np.pi * s * k / d)
    u.setflags(write=False)
    return u


def generalized_pauli(d, j, k):
    """Shift-and-phase unitary ``U_{j,k} = sum_s exp(2 pi i s k/d) |s+j><s|``."""
    d = check_dimension(d)
    _check_index("j", j, d)
    _check_index("k", k, d)
    return _pauli(d, j, k)


@lru_cache(maxsize=None)
def bell_table(d):
    """Array ``B[j, k]`` of shape (d, d, d, d): Bell state ``(I x U_jk)|Phi>`` as a d x d tensor."""
    s = np.arange(d)
    out = np.zeros((d, d, d, d), dtype=complex)
    for j in range(d):
        for k in range(d):
            out[j, k, s, (s + j) % d] = np.exp(2j * np.pi * s * k / d) / np.sqrt(d)
    out.setflags(write=False)
    return out


def bell_state(d, j, k):
    d = check_dimension(d)
    _check_index("j", j, d)
    _check_index("k", k, d)
    return StateVector(bell_table(d)[j, k].ravel(), (d, d))


def tensor(a, b):
    """Kronecker product of two kets or two density matrices."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps), a.dims + b.dims)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries), a.dims + b.dims)
    raise TypeError("tensor() needs two StateVectors or two DensityMatrices")


def _check_keep(keep, n):
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"subsystem index out of range for {n} factors: {keep}")
    return keep


def partial_trace(rho, keep):
    """Reduce to the factors listed in ``keep`` (order of the register is preserved).

    Accepts a StateVector as well; then the reduced state is contracted
    directly from the amplitudes without forming the full projector.
    """
    dims = rho.dims
    n = len(dims)
    keep = _check_keep(keep, n)
    drop = [i for i in range(n) if i not in keep]
    kd = tuple(dims[i] for i in keep)
    kdim = int(np.prod(kd))
    if isinstance(rho, StateVector):
        psi = np.transpose(rho.tensor(), keep + drop).reshape(kdim, -1)
        out = psi @ psi.conj().T
    else:
        t = rho.entries.reshape(dims + dims)
        letters = "abcdefghijklmnopqrstuvwxyz"
        row = [letters[i] for i in range(n)]
        col = [letters[n + i] if i in keep else letters[i] for i in range(n)]
        target = [row[i] for i in keep] + [col[i] for i in keep]
        out = np.einsum(f"{''.join(row)}{''.join(col)}->{''.join(target)}", t)
        out = out.reshape(kdim, kdim)
    # symmetrize away rounding so the Hermiticity check is exact up to eps
    return DensityMatrix((out + out.conj().T) / 2, kd)


def clip_probabilities(p, tol=PROB_TOL):
    p = np.asarray(p, dtype=float)
    if np.any(p < -tol):
        raise ValueError(f"negative probability {p.min()} below -{tol}")
    return np.clip(p, 0.0, None)


def shannon_entropy(p):
    """Entropy in bits of a probability array (any shape, flattened)."""
    p = clip_probabilities(np.ravel(p))
    if abs(p.sum() - 1) > NORM_TOL:
        raise ValueError(f"probabilities sum to {p.sum()}, expected 1")
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def spectrum(rho):
    """Eigenvalues with rounding noise in [-PSD_TOL, 0) clipped to zero."""
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    w = np.linalg.eigvalsh(m)
    if w.min() < -PSD_TOL:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3e})")
    return np.clip(w, 0.0, None)


def von_neumann_entropy(rho):
    w = spectrum(rho)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))
