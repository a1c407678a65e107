"""Output states of the universal cloning machine fed with half of |Phi>.

The register order is always A, B, C, C' (indices 0..3).
"""

from dataclasses import dataclass

import numpy as np

from .qudit import (
    MAX_FULL_STATE_D,
    NORM_TOL,
    DensityMatrix,
    StateVector,
    bell_table,
    check_dimension,
    clip_probabilities,
    shannon_entropy,
)

A, B, C, CP = 0, 1, 2, 3

FAMILIES = ("delta", "uniform", "depolarizing", "product", "custom")


@dataclass(frozen=True, eq=False)
class LambdaTable:
    """Weights ``lam[j, k]`` of the Bell components |phi_jk>_AB |phi_{j,-k}>_CC'."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.ndim != 2 or lam.shape[0] != lam.shape[1]:
            raise ValueError(f"lambda table must be square, got shape {lam.shape}")
        check_dimension(lam.shape[0])
        lam = clip_probabilities(lam)
        if abs(lam.sum() - 1) > NORM_TOL:
            raise ValueError(f"lambda table sums to {lam.sum()}, expected 1")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def d(self):
        return self.lam.shape[0]

    def entropy(self):
        return shannon_entropy(self.lam)

    def tolist(self):
        return self.lam.tolist()


def _cc_index(d):
    # column permutation k -> (d - k) mod d
    return (-np.arange(d)) % d


def make_family(name, d, p=None, q1=None, q2=None, path=None):
    """Instantiate one of the preset lambda families.

    ``product`` takes two length-d probability vectors and places
    ``q1[j] * q2[k]`` at ``lam[j, (d - k) % d]``; ``custom`` loads a JSON
    lambda file (see :mod:`steerclone.explorer.io`).
    """
    d = check_dimension(d)
    if name == "delta":
        lam = np.zeros((d, d))
        lam[0, 0] = 1.0
    elif name == "uniform":
        lam = np.full((d, d), 1.0 / d**2)
    elif name == "depolarizing":
        if p is None or not 0 <= p <= 1:
            raise ValueError(f"depolarizing needs 0 <= p <= 1, got {p!r}")
        lam = np.full((d, d), p / d**2)
        lam[0, 0] = 1 - p + p / d**2
    elif name == "product":
        q1 = _profile(q1, d, "q1")
        q2 = _profile(q2, d, "q2")
        lam = np.zeros((d, d))
        lam[:, _cc_index(d)] = np.outer(q1, q2)
    elif name == "custom":
        if path is None:
            raise ValueError("custom family needs a lambda file path")
        from .explorer.io import load_lambda

        table = load_lambda(path)
        if table.d != d:
            raise ValueError(f"lambda file has d={table.d}, expected d={d}")
        return table
    else:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return LambdaTable(lam)


def _profile(q, d, name):
    if q is None:
        raise ValueError(f"product family needs {name}")
    q = clip_probabilities(np.asarray(q, dtype=float))
    if q.shape != (d,) or abs(q.sum() - 1) > NORM_TOL:
        raise ValueError(f"{name} must be a length-{d} probability vector, got {q.tolist()}")
    return q


def noisy_profile(d, p):
    """Profile (1 - p + p/d, p/d, ..., p/d); used to drive product sweeps."""
    q = np.full(d, p / d)
    q[0] += 1 - p
    return q


def four_partite_tensor(table):
    """Amplitudes of |phi>_ABCC' as a (d, d, d, d) array."""
    d = table.d
    bells = bell_table(d)
    return np.einsum(
        "jk,jkab,jkcx->abcx", np.sqrt(table.lam), bells, bells[:, _cc_index(d)]
    )


def build_four_partite(table):
    d = table.d
    if d > MAX_FULL_STATE_D:
        raise ValueError(f"d={d} exceeds the full-state cap {MAX_FULL_STATE_D}")
    return StateVector(four_partite_tensor(table).ravel(), (d,) * 4)


def _bell_mixture(weights, bells):
    d = weights.shape[0]
    v = bells.reshape(d, d, d * d)
    return np.einsum("jk,jkx,jky->xy", weights, v, v.conj())


def rho_ab(table):
    d = table.d
    return DensityMatrix(_bell_mixture(table.lam, bell_table(d)), (d, d))


def rho_cc(table):
    """Reduced state on C C': weight lam[j, k] sits on |phi_{j,-k}>."""
    d = table.d
    return DensityMatrix(_bell_mixture(table.lam, bell_table(d)[:, _cc_index(d)]), (d, d))
