"""Off-diagonal Hermitian operators built from a rectangular block.

A block A mapping C^p -> C^q sits inside the Hermitian matrix
T = [[0, A*], [A, 0]] on C^(p+q), which anticommutes with the signature
grading diag(I_p, -I_q). The kernel defect dim ker A - dim ker A* is
readable from T as the grading-weighted dimension of any spectral window
around zero that clears the first nonzero singular value: eigenvectors at
a nonzero level pair off with opposite grading signs, so only the kernel
contributes. index_stability_check perturbs by odd blocks, small in graph
distance, and watches that weighted dimension hold still.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyFault, FinitenessError, InputError
from .matcore import HermitianMatrix, Interval, eigh, rank_eps, spectral_projection, tol_spec
from .metrics import d_G

__all__ = [
    "GradedOperator",
    "graded_window_dim",
    "eigenpair_cancellation_check",
    "index_stability_check",
]


@dataclass(frozen=True)
class GradedOperator:
    """A q-by-p block A presented as the odd Hermitian matrix it generates."""

    p: int
    q: int
    block: np.ndarray = field(repr=False)

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p < 0 or q < 0 or p + q == 0:
            raise InputError(f"need p, q >= 0 with p + q > 0, got ({p}, {q})")
        a = np.asarray(self.block, dtype=np.complex128)
        if a.shape != (q, p):
            raise InputError(f"block must be {q}x{p}, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise FinitenessError("block contains non-finite entries")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "block", a)

    @property
    def dim(self) -> int:
        return self.p + self.q

    def matrix(self) -> HermitianMatrix:
        """T = [[0, A*], [A, 0]]."""
        t = np.zeros((self.dim, self.dim), dtype=np.complex128)
        t[: self.p, self.p :] = self.block.conj().T
        t[self.p :, : self.p] = self.block
        return HermitianMatrix(t)

    def grading(self) -> HermitianMatrix:
        """diag(I_p, -I_q); anticommutes with matrix()."""
        return HermitianMatrix(
            np.diag(np.concatenate([np.ones(self.p), -np.ones(self.q)]))
        )

    def kernel_index(self, *, tol: float = 1e-8) -> int:
        """dim ker A - dim ker A*, each defect via rank_eps."""
        r = rank_eps(self.block, tol)
        r_adj = rank_eps(self.block.conj().T, tol)
        return (self.p - r) - (self.q - r_adj)

    def spectral_gap(self, *, tol: float = 1e-8) -> float:
        """Smallest nonzero singular value of the block (0.0 if none)."""
        sv = np.linalg.svd(self.block, compute_uv=False)
        above = sv[sv > tol]
        return float(above.min()) if above.size else 0.0

    def perturb(self, b: np.ndarray) -> "GradedOperator":
        """Odd perturbation: replace the block A by A + B."""
        return GradedOperator(self.p, self.q, self.block + np.asarray(b))


def graded_window_dim(g: GradedOperator, eps: float) -> int:
    """Grading-weighted dimension of the [-eps, eps] spectral window of
    the odd matrix; equals the kernel index once eps clears the gap."""
    eps = float(eps)
    if eps <= 0:
        raise InputError(f"eps must be positive, got {eps}")
    t = g.matrix()
    proj = spectral_projection(t, Interval.closed(-eps, eps))
    weighted = float(np.real(np.trace(g.grading().mat @ proj.mat)))
    rounded = round(weighted)
    if abs(weighted - rounded) > 1e-8:
        raise ConsistencyFault(
            f"graded window dimension {weighted!r} is not near an integer"
        )
    return int(rounded)


def eigenpair_cancellation_check(g: GradedOperator) -> dict:
    """Group the odd matrix's spectrum by |eigenvalue| and confirm every
    nonzero level carries graded dimension zero (the +/- pair-off)."""
    t = g.matrix()
    ed = eigh(t)
    alpha = g.grading().mat
    tol = tol_spec(t)
    mags = np.abs(ed.values)
    order = np.argsort(mags)
    levels = []
    start = 0
    for i in range(1, len(order) + 1):
        if i == len(order) or mags[order[i]] - mags[order[i - 1]] > tol:
            levels.append(order[start:i])
            start = i
    worst = 0.0
    nonzero_levels = 0
    for idx in levels:
        level_mag = float(mags[idx].mean())
        if level_mag <= tol:
            continue
        nonzero_levels += 1
        vecs = ed.vectors[:, idx]
        weighted = float(np.real(np.trace(vecs.conj().T @ alpha @ vecs)))
        worst = max(worst, abs(weighted))
    return {
        "check": "eigenpair_cancellation",
        "nonzero_levels": nonzero_levels,
        "max_graded_dim": worst,
        "ok": worst <= 1e-8,
    }


def index_stability_check(
    g: GradedOperator, *, trials: int = 50, seed: int = 0
) -> dict:
    """Perturb the block at random, keeping the graph distance below half
    the spectral gap (capped at 0.1), and require the graded window
    dimension at the half-gap level to match the kernel index throughout.
    """
    gap = g.spectral_gap()
    if gap == 0.0:
        raise InputError("block has no nonzero singular value; no gap to protect")
    delta = min(0.5 * gap, 0.1)
    base_index = g.kernel_index()
    t0 = g.matrix()
    if graded_window_dim(g, 0.5 * gap) != base_index:
        raise ConsistencyFault("window dimension disagrees with kernel index at start")
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(int(trials)):
        b = rng.normal(size=(g.q, g.p)) + 1j * rng.normal(size=(g.q, g.p))
        norm = np.linalg.norm(b, 2) if b.size else 0.0
        if norm > 0:
            b *= (0.5 * delta) * rng.uniform(0.1, 1.0) / norm
        gp = g.perturb(b)
        dist = d_G(t0, gp.matrix())
        if dist >= delta:
            failures.append({"trial": k, "reason": "graph distance", "value": dist})
            continue
        w = graded_window_dim(gp, 0.5 * gap)
        if w != base_index:
            failures.append({"trial": k, "reason": "window dim", "value": w})
    return {
        "check": "graded_index_stability",
        "trials": int(trials),
        "gap": gap,
        "delta": delta,
        "base_index": base_index,
        "failures": failures,
        "ok": not failures,
        "seed": int(seed),
    }
