"""Seeded random matrices and the named operator-path families.

All randomness flows through numpy Generators derived from explicit seeds
(spawn_rngs gives parallel-safe per-trial streams), so identical seeds give
identical objects everywhere, including under CLI parallelism.

Named families (the "family" kind of the path file format):

* linear_interp:  straight line between two given Hermitian matrices
* fuglede_line:   D + t * C_n for the sign-flip perturbation of a diagonal
                  model; carries exactly one certified zero crossing
* toeplitz_line:  (1-s) D + s W D W* for the half-integer diagonal and a
                  cyclic shift (optionally a power of it)
* trig_random:    seeded trigonometric-polynomial path built from a
                  unitary-conjugated diagonal skeleton plus a small
                  Hermitian coupling; endpoints are tilted onto their
                  spectrally clamped versions so they are invertible with
                  gap >= 0.2 by construction
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import InputError
from .matcore import HermitianMatrix, apply_function, as_hermitian, eigh
from .opmodel import DiagonalModel, ce_fuglede, realize
from .specflow import OperatorPath
from .transforms import UnitaryMatrix

__all__ = [
    "spawn_rngs",
    "random_hermitian",
    "random_unitary",
    "random_projection",
    "random_spd",
    "random_invertible_hermitian",
    "clamp_spectrum_away_from_zero",
    "cyclic_shift",
    "half_integer_diagonal",
    "unitary_rotation_path",
    "family_path",
    "FAMILY_NAMES",
    "trig_path",
    "invertible_trig_path",
    "normalization_path",
    "concat_compatible_pair",
    "homotopy_family",
]

#: endpoint spectral gap enforced by the random path generators
ENDPOINT_CLAMP_GAP = 0.2


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child generators for ``count`` trials of one seeded run."""
    if not isinstance(count, int) or count < 0:
        raise InputError(f"count must be a nonnegative int, got {count!r}")
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(c) for c in children]


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> HermitianMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianMatrix(scale * (g + g.conj().T) / (2.0 * math.sqrt(dim)))


def random_unitary(rng: np.random.Generator, dim: int) -> UnitaryMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(q)


def random_projection(rng: np.random.Generator, dim: int, rank: int):
    from .matcore import Projection

    if not 0 <= rank <= dim:
        raise InputError(f"rank must lie in [0, {dim}], got {rank!r}")
    u = random_unitary(rng, dim).mat[:, :rank]
    return Projection(u @ u.conj().T)


def random_spd(
    rng: np.random.Generator, dim: int, lam_lo: float = 0.1, lam_hi: float = 10.0
) -> HermitianMatrix:
    if not (0 < lam_lo <= lam_hi):
        raise InputError("need 0 < lam_lo <= lam_hi")
    u = random_unitary(rng, dim).mat
    lam = rng.uniform(lam_lo, lam_hi, size=dim)
    return HermitianMatrix((u * lam) @ u.conj().T)


def clamp_spectrum_away_from_zero(h: HermitianMatrix, gap: float) -> HermitianMatrix:
    """Push every eigenvalue to at least ``gap`` in magnitude, keeping signs
    (eigenvalue 0 is pushed up). The clamp used by the path generators."""
    if not (np.isfinite(gap) and gap > 0):
        raise InputError("gap must be positive and finite")
    return apply_function(
        h, lambda x: x if abs(x) >= gap else (gap if x >= 0.0 else -gap)
    )


def random_invertible_hermitian(
    rng: np.random.Generator, dim: int, scale: float = 1.0, gap: float = ENDPOINT_CLAMP_GAP
) -> HermitianMatrix:
    return clamp_spectrum_away_from_zero(random_hermitian(rng, dim, scale), gap)


def cyclic_shift(dim: int, power: int = 1) -> UnitaryMatrix:
    """The unitary sending e_k to e_{k+power mod dim}."""
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive int, got {dim!r}")
    w = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim):
        w[(k + power) % dim, k] = 1.0
    return UnitaryMatrix(w)


def half_integer_diagonal(m: int) -> HermitianMatrix:
    """diag(k + 1/2) for k = -m..m (dimension 2m + 1, no kernel)."""
    if not isinstance(m, int) or m < 1:
        raise InputError(f"m must be a positive int, got {m!r}")
    return HermitianMatrix.diag([k + 0.5 for k in range(-m, m + 1)])


def unitary_rotation_path(rng: np.random.Generator, dim: int, scale: float = 1.0):
    """A smooth unitary path U(t) = exp(i t K) for a random Hermitian K."""
    k = random_hermitian(rng, dim, scale)
    ed = eigh(k)

    def u_of(t: float) -> np.ndarray:
        return ed.assemble(np.exp(1j * t * ed.values))

    return u_of


def _tilt_to_clamped_endpoints(
    raw: Callable[[float], np.ndarray], dim: int, gap: float, *, fix_left: bool = True
) -> Callable[[float], HermitianMatrix]:
    """Add an affine-in-t Hermitian tilt so both endpoints become their
    spectrally clamped versions (invertible with the given gap)."""
    left = HermitianMatrix(raw(0.0))
    right = HermitianMatrix(raw(1.0))
    delta0 = (
        clamp_spectrum_away_from_zero(left, gap).mat - left.mat
        if fix_left
        else np.zeros((dim, dim))
    )
    delta1 = clamp_spectrum_away_from_zero(right, gap).mat - right.mat

    def evaluate(t: float) -> HermitianMatrix:
        return HermitianMatrix(raw(t) + (1.0 - t) * delta0 + t * delta1)

    return evaluate


def _trig_evaluator(
    rng: np.random.Generator, dim: int, degree: int, scale: float
) -> Callable[[float], np.ndarray]:
    """Unitary-conjugated diagonal trig skeleton plus Hermitian trig coupling."""
    u = random_unitary(rng, dim).mat
    diag_coefs = [rng.standard_normal(dim) * scale / (1 + m) ** 2 for m in range(2 * degree + 1)]
    coup_coefs = [
        random_hermitian(rng, dim, 0.3 * scale / (1 + m) ** 2).mat
        for m in range(2 * degree + 1)
    ]

    def raw(t: float) -> np.ndarray:
        lam = diag_coefs[0].copy()
        coup = coup_coefs[0].copy()
        for m in range(1, degree + 1):
            c = math.cos(math.pi * m * t)
            s = math.sin(math.pi * m * t)
            lam = lam + c * diag_coefs[2 * m - 1] + s * diag_coefs[2 * m]
            coup = coup + c * coup_coefs[2 * m - 1] + s * coup_coefs[2 * m]
        return u.conj().T @ (np.diag(lam.astype(np.complex128)) + coup) @ u

    return raw


def trig_path(
    seed_or_rng,
    dim: int,
    *,
    degree: int = 3,
    scale: float = 1.0,
    gap: float = ENDPOINT_CLAMP_GAP,
    meta: dict | None = None,
) -> OperatorPath:
    """Seeded random trig-polynomial path with invertible endpoints."""
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, np.random.Generator)
        else np.random.default_rng(seed_or_rng)
    )
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive int, got {dim!r}")
    if not isinstance(degree, int) or degree < 1:
        raise InputError(f"degree must be a positive int, got {degree!r}")
    raw = _trig_evaluator(rng, dim, degree, scale)
    evaluate = _tilt_to_clamped_endpoints(raw, dim, gap)
    return OperatorPath.from_callable(evaluate, dim, meta=meta or {"family": "trig_random"})


def invertible_trig_path(
    seed_or_rng, dim: int, *, scale: float = 1.0, gap: float = 0.5
) -> OperatorPath:
    """A path certified-by-construction to stay invertible for all t.

    U(t)* D0 U(t) + c(t) I with D0 spectrally clamped to |spec| >= gap and a
    scalar trig drift |c(t)| <= gap / 2, so min |spec| >= gap / 2 throughout.
    """
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, np.random.Generator)
        else np.random.default_rng(seed_or_rng)
    )
    d0 = clamp_spectrum_away_from_zero(random_hermitian(rng, dim, scale), gap)
    u_of = unitary_rotation_path(rng, dim, scale)
    amp = rng.uniform(0.1, 0.5) * gap / 2.0
    phase = rng.uniform(0.0, 2.0 * math.pi)

    def evaluate(t: float) -> HermitianMatrix:
        u = u_of(t)
        drift = amp * math.sin(2.0 * math.pi * t + phase)
        return HermitianMatrix(u.conj().T @ d0.mat @ u + drift * np.eye(dim))

    return OperatorPath.from_callable(evaluate, dim, meta={"family": "invertible_drift"})


def normalization_path(seed_or_rng, dim: int) -> OperatorPath:
    """The calibration path t -> (t - 1/2) P + (I - P) T0 (I - P).

    P is a random rank-one projection and T0 is invertible on the
    complement (spectrum clamped to |spec| >= 0.3), so exactly one
    eigenvalue crosses zero, upward: the flow is 1 by construction.
    """
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, np.random.Generator)
        else np.random.default_rng(seed_or_rng)
    )
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive int, got {dim!r}")
    u = random_unitary(rng, dim).mat
    p_vec = u[:, :1]
    p = p_vec @ p_vec.conj().T
    rest = np.zeros((dim, dim), dtype=np.complex128)
    if dim > 1:
        basis = u[:, 1:]
        block = random_hermitian(rng, dim - 1, 1.0)
        block = clamp_spectrum_away_from_zero(block, 0.3)
        rest = basis @ block.mat @ basis.conj().T

    def evaluate(t: float) -> HermitianMatrix:
        return HermitianMatrix((t - 0.5) * p + rest)

    return OperatorPath.from_callable(evaluate, dim, meta={"family": "normalization"})


def concat_compatible_pair(seed_or_rng, dim: int, **kwargs) -> tuple[OperatorPath, OperatorPath]:
    """Two random trig paths with g(0) = f(1) exactly, both with certified
    invertible endpoints, ready for a concatenation check."""
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, np.random.Generator)
        else np.random.default_rng(seed_or_rng)
    )
    f = trig_path(rng, dim, **kwargs)
    g_raw = _trig_evaluator(rng, dim, kwargs.get("degree", 3), kwargs.get("scale", 1.0))
    join = f.matrix(1.0).mat

    def shifted(t: float) -> np.ndarray:
        return g_raw(t) - g_raw(0.0) + join

    gap = kwargs.get("gap", ENDPOINT_CLAMP_GAP)
    evaluate = _tilt_to_clamped_endpoints(shifted, dim, gap, fix_left=False)
    g = OperatorPath.from_callable(evaluate, dim, meta={"family": "trig_random_shifted"})
    return f, g


def homotopy_family(seed_or_rng, dim: int, *, s_samples: int = 7, **kwargs):
    """A two-parameter family H(s, t) whose rows are honestly homotopic.

    Even seeds produce an additive drift H(s, t) = f(t) + s e I with
    e below half the endpoint gaps; odd seeds conjugate by a smooth unitary
    rotation, H(s, t) = U(s)* f(t) U(s). Returns (H, s_grid, label).
    """
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, np.random.Generator)
        else np.random.default_rng(seed_or_rng)
    )
    f = trig_path(rng, dim, **kwargs)
    s_grid = np.linspace(0.0, 1.0, s_samples)
    style = int(rng.integers(0, 2))
    if style == 0:
        g0, g1 = f.endpoint_gaps()
        eps = 0.4 * min(g0, g1)

        def h_of(s: float, t: float) -> HermitianMatrix:
            return HermitianMatrix(f.matrix(t).mat + s * eps * np.eye(dim))

        label = "additive_drift"
    else:
        u_of = unitary_rotation_path(rng, dim, 0.8)

        def h_of(s: float, t: float) -> HermitianMatrix:
            u = u_of(s)
            return HermitianMatrix(u.conj().T @ f.matrix(t).mat @ u)

        label = "unitary_conjugation"
    return h_of, s_grid, label


def _family_linear_interp(params: dict, seed, dim) -> OperatorPath:
    try:
        a = as_hermitian(params["a"])
        b = as_hermitian(params["b"])
    except KeyError as exc:
        raise InputError("linear_interp params need matrices 'a' and 'b'") from exc
    if a.dim != b.dim:
        raise InputError("linear_interp endpoints must share a dimension")

    def evaluate(t: float) -> HermitianMatrix:
        return HermitianMatrix((1.0 - t) * a.mat + t * b.mat)

    return OperatorPath.from_callable(evaluate, a.dim, meta={"family": "linear_interp"})


def _family_fuglede_line(params: dict, seed, dim) -> OperatorPath:
    n = params.get("n")
    model = DiagonalModel(int(params.get("N", 8)), params.get("law", "linear"))
    if n is None:
        raise InputError("fuglede_line params need the index 'n'")
    d = realize(model)
    c = ce_fuglede(model, int(n))

    def evaluate(t: float) -> HermitianMatrix:
        return HermitianMatrix(d.mat + t * c.mat)

    return OperatorPath.from_callable(
        evaluate, model.trunc_dim, meta={"family": "fuglede_line", "n": int(n)}
    )


def _family_toeplitz_line(params: dict, seed, dim) -> OperatorPath:
    m = int(params.get("m", 1))
    power = int(params.get("power", 1))
    d = half_integer_diagonal(m)
    w = cyclic_shift(d.dim, power)
    conj = HermitianMatrix(w.mat @ d.mat @ w.mat.conj().T)

    def evaluate(t: float) -> HermitianMatrix:
        return HermitianMatrix((1.0 - t) * d.mat + t * conj.mat)

    return OperatorPath.from_callable(
        evaluate, d.dim, meta={"family": "toeplitz_line", "m": m, "power": power}
    )


def _family_trig_random(params: dict, seed, dim) -> OperatorPath:
    if dim is None:
        dim = params.get("dim")
    if dim is None:
        raise InputError("trig_random needs a dimension")
    if seed is None:
        raise InputError("trig_random needs a seed")
    return trig_path(
        int(seed),
        int(dim),
        degree=int(params.get("degree", 3)),
        scale=float(params.get("scale", 1.0)),
        gap=float(params.get("gap", ENDPOINT_CLAMP_GAP)),
        meta={"family": "trig_random", "seed": int(seed)},
    )


_FAMILY_BUILDERS = {
    "linear_interp": _family_linear_interp,
    "fuglede_line": _family_fuglede_line,
    "toeplitz_line": _family_toeplitz_line,
    "trig_random": _family_trig_random,
}

FAMILY_NAMES = tuple(sorted(_FAMILY_BUILDERS))


def family_path(
    name: str, params: dict | None = None, *, seed: int | None = None, dim: int | None = None
) -> OperatorPath:
    """Build one of the named closed-form families."""
    if name not in _FAMILY_BUILDERS:
        raise InputError(f"unknown path family {name!r}; choose from {FAMILY_NAMES}")
    return _FAMILY_BUILDERS[name](dict(params or {}), seed, dim)
