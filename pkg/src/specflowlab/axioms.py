"""Behavioral laws that pin the integer assigned to a path of Hermitian
matrices, plus the converse construction.

The four laws: concatenation adds; a certified deformation of a path
(endpoints kept invertible throughout) leaves the integer alone; the
one-crossing normalization pivot scores exactly 1; paths that never touch
zero score 0. Together they force the value to equal the net eigenvalue
transport through zero, whichever of the four computation routes is used.

The converse half: two invertible Hermitian matrices whose nonnegative
eigenspaces have equal dimension are joined by connect_invertibles with
an explicitly certified invertible path, so the label from
component_label is a complete invariant at fixed dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CertificationError, InputError
from .matcore import HermitianMatrix, as_hermitian, eigh, nonneg_projection, op_norm
from .specflow import (
    OperatorPath,
    SfOptions,
    certify_invertible,
    path_concat,
    sf_all_methods,
    sf_crossing_oracle,
    sf_endpoints,
    sf_pairsum,
    sf_phillips,
)
from .generators import (
    concat_compatible_pair,
    homotopy_family,
    invertible_trig_path,
    normalization_path,
    spawn_rngs,
)
from .transforms import unitary_eig

__all__ = [
    "SfFunctional",
    "builtin_functionals",
    "check_concatenation",
    "check_homotopy",
    "check_normalization",
    "check_invertible_vanishing",
    "run_all_checks",
    "component_label",
    "connect_invertibles",
]

_DEFAULT_OPTS = SfOptions()


@dataclass(frozen=True)
class SfFunctional:
    """A named map from operator paths to integers."""

    name: str
    fn: Callable[[OperatorPath], int]

    def __call__(self, path: OperatorPath) -> int:
        return int(self.fn(path))


def builtin_functionals(opts: SfOptions = _DEFAULT_OPTS) -> tuple[SfFunctional, ...]:
    """The four computation routes, wrapped for the law checkers."""
    return (
        SfFunctional("phillips", lambda p: sf_phillips(p, opts).total),
        SfFunctional("pairsum", lambda p: sf_pairsum(p, opts).total),
        SfFunctional("endpoints", lambda p: sf_endpoints(p, opts)),
        SfFunctional("crossing_oracle", lambda p: sf_crossing_oracle(p, opts)),
    )


def _dim_for(rng: np.random.Generator, dims) -> int:
    dims = tuple(int(d) for d in dims)
    return dims[int(rng.integers(0, len(dims)))]


def check_concatenation(
    functional: SfFunctional,
    *,
    trials: int = 200,
    dims=(2, 3, 4, 5, 6, 7, 8),
    seed: int = 0,
    opts: SfOptions = _DEFAULT_OPTS,
) -> dict:
    """mu(f * g) == mu(f) + mu(g) over seeded compatible pairs."""
    failures = []
    for k, rng in enumerate(spawn_rngs(seed, trials)):
        dim = _dim_for(rng, dims)
        f, g = concat_compatible_pair(rng, dim)
        joined = path_concat(f, g)
        mu_f = functional(f)
        mu_g = functional(g)
        mu_fg = functional(joined)
        if mu_fg != mu_f + mu_g:
            failures.append(
                {"trial": k, "dim": dim, "parts": [mu_f, mu_g], "joined": mu_fg}
            )
    return {
        "check": "concatenation",
        "method": functional.name,
        "trials": int(trials),
        "failures": failures,
        "ok": not failures,
        "seed": int(seed),
    }


def _certified_s_pairs(h_of, s_grid, dim: int, *, max_depth: int = 16) -> list[float]:
    """Refine the deformation grid until every consecutive pair of rows
    has both endpoints' spectral gaps exceeding the operator-norm step
    between the rows (so no endpoint can cross zero in between)."""

    def endpoint_gap(s: float, t: float) -> float:
        return float(np.min(np.abs(np.linalg.eigvalsh(h_of(s, t).mat))))

    def step(s0: float, s1: float, t: float) -> float:
        return op_norm(h_of(s0, t).mat - h_of(s1, t).mat)

    out = [float(s_grid[0])]
    stack = [
        (float(s_grid[i]), float(s_grid[i + 1]), 0)
        for i in range(len(s_grid) - 2, -1, -1)
    ]
    while stack:
        s0, s1, depth = stack.pop()
        ok = all(
            step(s0, s1, t) < min(endpoint_gap(s0, t), endpoint_gap(s1, t))
            for t in (0.0, 1.0)
        )
        if ok:
            out.append(s1)
            continue
        if depth >= max_depth:
            raise CertificationError(
                "deformation rows could not be certified", window=(s0, s1)
            )
        mid = 0.5 * (s0 + s1)
        stack.append((mid, s1, depth + 1))
        stack.append((s0, mid, depth + 1))
    return out


def check_homotopy(
    functional: SfFunctional,
    *,
    trials: int = 50,
    dims=(2, 3, 4, 5, 6),
    seed: int = 0,
    opts: SfOptions = _DEFAULT_OPTS,
) -> dict:
    """The integer is constant across each certified deformation family.

    Rows whose certification fails are counted as inconclusive, never as
    violations; a violation requires a certified family with unequal rows.
    """
    failures = []
    inconclusive = 0
    for k, rng in enumerate(spawn_rngs(seed, trials)):
        dim = _dim_for(rng, dims)
        h_of, s_grid, label = homotopy_family(rng, dim)
        try:
            s_values = _certified_s_pairs(h_of, s_grid, dim)
        except CertificationError:
            inconclusive += 1
            continue
        rows = []
        for s in s_values:
            row = OperatorPath.from_callable(
                lambda t, s=s: h_of(s, t), dim, meta={"family": label, "s": s}
            )
            rows.append(functional(row))
        if len(set(rows)) != 1:
            failures.append({"trial": k, "dim": dim, "label": label, "rows": rows})
    return {
        "check": "homotopy",
        "method": functional.name,
        "trials": int(trials),
        "inconclusive": inconclusive,
        "failures": failures,
        "ok": not failures,
        "seed": int(seed),
    }


def check_normalization(
    functional: SfFunctional,
    *,
    trials: int = 50,
    dims=(1, 2, 3, 4, 5, 6, 7, 8),
    seed: int = 0,
    opts: SfOptions = _DEFAULT_OPTS,
) -> dict:
    """The single-crossing pivot path scores exactly 1."""
    failures = []
    for k, rng in enumerate(spawn_rngs(seed, trials)):
        dim = _dim_for(rng, dims)
        path = normalization_path(rng, dim)
        mu = functional(path)
        if mu != 1:
            failures.append({"trial": k, "dim": dim, "value": mu})
    return {
        "check": "normalization",
        "method": functional.name,
        "trials": int(trials),
        "failures": failures,
        "ok": not failures,
        "seed": int(seed),
    }


def check_invertible_vanishing(
    functional: SfFunctional,
    *,
    trials: int = 200,
    dims=(2, 3, 4, 5, 6, 7, 8),
    seed: int = 0,
    opts: SfOptions = _DEFAULT_OPTS,
) -> dict:
    """Certified-invertible paths score exactly 0."""
    failures = []
    inconclusive = 0
    for k, rng in enumerate(spawn_rngs(seed, trials)):
        dim = _dim_for(rng, dims)
        path = invertible_trig_path(rng, dim)
        cert = certify_invertible(path, opts)
        if not cert["certified"]:
            inconclusive += 1
            continue
        mu = functional(path)
        if mu != 0:
            failures.append({"trial": k, "dim": dim, "value": mu})
    return {
        "check": "invertible_vanishing",
        "method": functional.name,
        "trials": int(trials),
        "inconclusive": inconclusive,
        "failures": failures,
        "ok": not failures,
        "seed": int(seed),
    }


def run_all_checks(
    *,
    seed: int = 0,
    concat_trials: int = 200,
    homotopy_trials: int = 50,
    normalization_trials: int = 50,
    vanishing_trials: int = 200,
    opts: SfOptions = _DEFAULT_OPTS,
) -> list[dict]:
    """Every law against every computation route; returns all reports."""
    reports = []
    for fun in builtin_functionals(opts):
        reports.append(
            check_concatenation(fun, trials=concat_trials, seed=seed, opts=opts)
        )
        reports.append(
            check_homotopy(fun, trials=homotopy_trials, seed=seed + 1, opts=opts)
        )
        reports.append(
            check_normalization(
                fun, trials=normalization_trials, seed=seed + 2, opts=opts
            )
        )
        reports.append(
            check_invertible_vanishing(
                fun, trials=vanishing_trials, seed=seed + 3, opts=opts
            )
        )
    return reports


def component_label(t: HermitianMatrix, *, gap: float = 1e-8) -> int:
    """Dimension of the nonnegative eigenspace of an invertible Hermitian
    matrix -- the complete connectedness invariant at fixed dimension."""
    t = as_hermitian(t)
    vals = np.linalg.eigvalsh(t.mat)
    if float(np.min(np.abs(vals))) <= gap:
        raise InputError(
            f"matrix must be invertible (gap > {gap:g}) to carry a label"
        )
    return int(np.count_nonzero(vals >= 0))


def connect_invertibles(
    t1: HermitianMatrix, t2: HermitianMatrix
) -> OperatorPath:
    """An invertible path from t1 to t2, which exists exactly when their
    component labels agree.

    Three legs: flatten t1 to its reflection 2P1 - I along the commuting
    straight line (eigenvalues move monotonically to +/-1, never through
    zero); rotate that reflection onto 2P2 - I by a unitary that carries
    the positive eigenbasis of t1 onto that of t2 (conjugation preserves
    spectrum {+1, -1}); unflatten to t2. Certification is up to the
    caller via certify_invertible.
    """
    t1 = as_hermitian(t1)
    t2 = as_hermitian(t2)
    if t1.dim != t2.dim:
        raise InputError("endpoints must share a dimension")
    label1 = component_label(t1)
    label2 = component_label(t2)
    if label1 != label2:
        raise InputError(
            f"component labels differ ({label1} vs {label2}); no invertible "
            "path can join the endpoints"
        )
    dim = t1.dim
    ed1 = eigh(t1)
    ed2 = eigh(t2)
    pos1 = ed1.values >= 0
    pos2 = ed2.values >= 0
    basis1 = np.concatenate(
        [ed1.vectors[:, pos1], ed1.vectors[:, ~pos1]], axis=1
    )
    basis2 = np.concatenate(
        [ed2.vectors[:, pos2], ed2.vectors[:, ~pos2]], axis=1
    )
    rotation = basis2 @ basis1.conj().T
    eigvals, frame = unitary_eig(rotation)
    angles = np.angle(eigvals)
    s1 = ed1.assemble(np.where(pos1, 1.0, -1.0))
    s2 = ed2.assemble(np.where(pos2, 1.0, -1.0))

    def rotate(u: float) -> np.ndarray:
        partial = frame @ np.diag(np.exp(1j * u * angles)) @ frame.conj().T
        return partial @ s1 @ partial.conj().T

    def evaluate(t: float) -> HermitianMatrix:
        if t <= 1.0 / 3.0:
            u = 3.0 * t
            return HermitianMatrix((1.0 - u) * t1.mat + u * s1)
        if t <= 2.0 / 3.0:
            return HermitianMatrix(rotate(3.0 * t - 1.0))
        u = 3.0 * t - 2.0
        return HermitianMatrix((1.0 - u) * s2 + u * t2.mat)

    return OperatorPath.from_callable(
        evaluate, dim, knots=(0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0),
        meta={"family": "connector", "label": label1},
    )
