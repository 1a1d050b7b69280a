"""Spectral flow of paths of Hermitian matrices, four independent ways.

A path is a map t in [0, 1] -> Hermitian matrix, given either by uniform
samples (piecewise-linear ground truth) or by a closed-form evaluator
measured through a sampled surrogate. Endpoints must be invertible
(min |spec| > 1e-8 by convention), so the flow is an integer.

Methods
-------
* sf_phillips:        certified subdivision; per segment an eigenvalue-free
                      level eps_j is chosen in the largest gap of the sampled
                      magnitude spectrum and Weyl bounds certify that no
                      eigenvalue meets +-eps_j inside the segment; the flow
                      is the telescoped count of eigenvalues in [0, eps_j).
* sf_pairsum:         the same subdivision refined until spectral projections
                      above eps_j move by < 1 inside each segment; the flow
                      is the sum of projection-pair indices over junctions.
* sf_endpoints:       rank difference of the nonnegative spectral projections
                      at t = 1 and t = 0 (finite-dimension shortcut).
* sf_crossing_oracle: dense sampling with signed sign-count bookkeeping and
                      an aliasing guard; deliberately naive, used as oracle.

All four must agree exactly; they are cross-checked in the test suite and
by the CLI, and a disagreement is an internal consistency fault.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    CertificationError,
    ConsistencyFault,
    DimensionMismatchError,
    EndpointError,
    InputError,
    SamplingError,
)
from .matcore import EigenDecomposition, HermitianMatrix, as_hermitian, eigh, op_norm
from .projpair import Projection, pair_index

__all__ = [
    "OperatorPath",
    "SfOptions",
    "SfSegment",
    "SfCertificate",
    "sf_phillips",
    "sf_pairsum",
    "sf_endpoints",
    "sf_crossing_oracle",
    "crossing_oracle_report",
    "sf_all_methods",
    "path_concat",
    "path_reverse",
    "certify_invertible",
]


@dataclass(frozen=True)
class SfOptions:
    """Resolution and tolerance knobs shared by the four methods."""

    samples: int = 33
    oracle_samples: int = 257
    max_depth: int = 24
    endpoint_gap: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.samples, int) or self.samples < 2:
            raise InputError(f"samples must be an int >= 2, got {self.samples!r}")
        if not isinstance(self.oracle_samples, int) or self.oracle_samples < 2:
            raise InputError(
                f"oracle_samples must be an int >= 2, got {self.oracle_samples!r}"
            )
        if not isinstance(self.max_depth, int) or self.max_depth < 1:
            raise InputError(f"max_depth must be an int >= 1, got {self.max_depth!r}")
        if not (np.isfinite(self.endpoint_gap) and self.endpoint_gap > 0):
            raise InputError("endpoint_gap must be positive and finite")


_DEFAULT_OPTS = SfOptions()


class OperatorPath:
    """A continuous family of Hermitian matrices over t in [0, 1].

    Matrices and eigendecompositions are memoized per t, so the four methods
    (and repeated certification passes) share evaluations.
    """

    def __init__(
        self,
        evaluator: Callable[[float], HermitianMatrix],
        dim: int,
        *,
        kind: str = "closed-form",
        knots: Sequence[float] = (),
        meta: dict | None = None,
    ):
        if kind not in ("sampled", "closed-form"):
            raise InputError(f"kind must be 'sampled' or 'closed-form', got {kind!r}")
        if not isinstance(dim, int) or dim < 1:
            raise InputError(f"dim must be a positive int, got {dim!r}")
        self._evaluator = evaluator
        self._dim = dim
        self._kind = kind
        self._knots = tuple(sorted(set(float(k) for k in knots)))
        for k in self._knots:
            if not 0.0 <= k <= 1.0:
                raise InputError(f"knot {k!r} outside [0, 1]")
        self.meta = dict(meta or {})
        self._mats: dict[float, HermitianMatrix] = {}
        self._eigs: dict[float, EigenDecomposition] = {}
        self._vals: dict[float, np.ndarray] = {}

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def knots(self) -> tuple[float, ...]:
        """Interior break points where a sampled path is non-smooth."""
        return self._knots

    def matrix(self, t: float) -> HermitianMatrix:
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise InputError(f"path parameter {t!r} outside [0, 1]")
        m = self._mats.get(t)
        if m is None:
            m = as_hermitian(self._evaluator(t))
            if m.dim != self._dim:
                raise DimensionMismatchError(
                    f"path evaluator returned dim {m.dim}, expected {self._dim}"
                )
            self._mats[t] = m
        return m

    def eig(self, t: float) -> EigenDecomposition:
        t = float(t)
        ed = self._eigs.get(t)
        if ed is None:
            ed = eigh(self.matrix(t))
            self._eigs[t] = ed
        return ed

    def values(self, t: float) -> np.ndarray:
        """Eigenvalues only (cheaper than a full, validated ``eig``).

        Always the eigvalsh route, even when a full decomposition is
        already cached: the two differ in final bits, and certificates
        must not depend on which methods ran earlier on the same path.
        """
        t = float(t)
        v = self._vals.get(t)
        if v is None:
            v = np.linalg.eigvalsh(self.matrix(t).mat)
            v.setflags(write=False)
            self._vals[t] = v
        return v

    def nonneg_count(self, t: float) -> int:
        return int(np.sum(self.values(t) >= 0.0))

    def endpoint_gaps(self) -> tuple[float, float]:
        return (
            float(np.min(np.abs(self.values(0.0)))),
            float(np.min(np.abs(self.values(1.0)))),
        )

    @classmethod
    def from_samples(cls, matrices: Sequence, *, meta: dict | None = None) -> "OperatorPath":
        """Uniformly spaced samples; the path is their linear interpolant."""
        mats = [as_hermitian(m) for m in matrices]
        if len(mats) < 2:
            raise InputError("a sampled path needs at least 2 samples")
        dim = mats[0].dim
        for m in mats[1:]:
            if m.dim != dim:
                raise DimensionMismatchError("sample dimensions differ")
        arr = [m.mat for m in mats]
        last = len(mats) - 1

        def evaluate(t: float) -> HermitianMatrix:
            x = t * last
            i = min(int(np.floor(x)), last - 1)
            frac = x - i
            return HermitianMatrix((1.0 - frac) * arr[i] + frac * arr[i + 1])

        knots = [i / last for i in range(1, last)]
        path = cls(evaluate, dim, kind="sampled", knots=knots, meta=meta)
        for i, m in enumerate(mats):
            path._mats[i / last] = m
        return path

    @classmethod
    def from_callable(
        cls,
        fn: Callable[[float], HermitianMatrix],
        dim: int,
        *,
        knots: Sequence[float] = (),
        meta: dict | None = None,
    ) -> "OperatorPath":
        return cls(fn, dim, kind="closed-form", knots=knots, meta=meta)

    def resample(self, samples: int) -> "OperatorPath":
        """A sampled snapshot of this path on a uniform grid."""
        if not isinstance(samples, int) or samples < 2:
            raise InputError(f"samples must be an int >= 2, got {samples!r}")
        ts = np.linspace(0.0, 1.0, samples)
        return OperatorPath.from_samples([self.matrix(t) for t in ts], meta=dict(self.meta))

    def __repr__(self) -> str:
        return f"OperatorPath(kind={self._kind!r}, dim={self._dim})"


@dataclass(frozen=True)
class SfSegment:
    """One certified subdivision segment.

    ``eps`` is the level avoided by the spectrum throughout the segment;
    ``weyl_margin`` is the worst certified slack (distance of +-eps to the
    sampled spectrum minus the neighboring operator-norm step for
    sf_phillips; one minus the worst projection jump for sf_pairsum).
    """

    t_left: float
    t_right: float
    eps: float
    rank_left: int
    rank_right: int
    weyl_margin: float


@dataclass(frozen=True)
class SfCertificate:
    """A spectral-flow value plus the subdivision evidence behind it."""

    method: str
    total: int
    segments: tuple[SfSegment, ...]
    endpoint_gaps: tuple[float, float]
    opts: SfOptions = field(default_factory=SfOptions)

    def __post_init__(self):
        if not self.segments:
            raise ConsistencyFault("certificate has no segments")
        tel = sum(s.rank_right - s.rank_left for s in self.segments)
        if tel != self.total:
            raise ConsistencyFault(
                f"certificate total {self.total} != telescoped ranks {tel}"
            )
        prev = 0.0
        for s in self.segments:
            if abs(s.t_left - prev) > 1e-12:
                raise ConsistencyFault("certificate segments are not contiguous")
            if s.t_right <= s.t_left:
                raise ConsistencyFault("certificate segment has nonpositive width")
            if not s.weyl_margin > 0.0:
                raise ConsistencyFault(
                    f"certificate segment has nonpositive margin {s.weyl_margin!r}"
                )
            prev = s.t_right
        if abs(prev - 1.0) > 1e-12:
            raise ConsistencyFault("certificate segments do not reach t = 1")


def _check_endpoints(path: OperatorPath, opts: SfOptions) -> tuple[float, float]:
    g0, g1 = path.endpoint_gaps()
    if g0 <= opts.endpoint_gap or g1 <= opts.endpoint_gap:
        raise EndpointError(
            f"path endpoints must be invertible: min |spec| = ({g0:.3e}, {g1:.3e}), "
            f"convention requires > {opts.endpoint_gap:.0e}"
        )
    return g0, g1


def _initial_grid(path: OperatorPath, samples: int) -> list[float]:
    ts = set(np.linspace(0.0, 1.0, samples).tolist())
    ts.update(path.knots)
    ts.update((0.0, 1.0))
    return sorted(ts)


def _steps(path: OperatorPath, ts: Sequence[float]) -> list[float]:
    return [
        op_norm(path.matrix(ts[k + 1]).mat - path.matrix(ts[k]).mat)
        for k in range(len(ts) - 1)
    ]


def _segment_level_and_margin(
    path: OperatorPath, ts: Sequence[float], top_width: float
) -> tuple[float, float]:
    """Pick eps in the widest gap of the sampled magnitude spectrum and
    return (eps, worst Weyl margin); margin <= 0 means not certified.

    Candidate gaps are the intervals between consecutive sampled
    |eigenvalue| levels (0 included), plus the region just above the
    largest level, which enters the contest with the fixed width
    ``top_width``.  That width is tied to the path's own invertibility
    scale, never to the local step sizes, so the margin test stays
    falsifiable: a segment whose steps exceed every gap half-width cannot
    certify at any eps and has to be subdivided instead.
    """
    steps = _steps(path, ts)
    mags = [np.abs(path.values(t)) for t in ts]
    pool = np.unique(np.concatenate([[0.0]] + mags))
    lows = pool
    highs = np.append(pool[1:], pool[-1] + top_width)
    widths = highs - lows
    # widest gap wins; argmax ties resolve toward the smaller (local) level
    best = int(np.argmax(widths))
    eps = float((lows[best] + highs[best]) / 2.0)
    margin = np.inf
    for k, m in enumerate(mags):
        dist = float(np.min(np.abs(m - eps)))
        near = 0.0
        if k > 0:
            near = max(near, steps[k - 1])
        if k < len(steps):
            near = max(near, steps[k])
        margin = min(margin, dist - near)
    return eps, float(margin)


def _refine(ts: Sequence[float]) -> list[float]:
    out: list[float] = []
    for k in range(len(ts) - 1):
        out.append(ts[k])
        out.append((ts[k] + ts[k + 1]) / 2.0)
    out.append(ts[-1])
    return out


def _rank_below(path: OperatorPath, t: float, eps: float) -> int:
    v = path.values(t)
    return int(np.sum((v >= 0.0) & (v < eps)))


def _certified_segments(
    path: OperatorPath, opts: SfOptions
) -> list[tuple[list[float], float, float]]:
    """Recursively subdivide until every segment certifies; returns a list
    of (sample grid, eps, margin) triples covering [0, 1] in order."""
    out: list[tuple[list[float], float, float]] = []
    # The above-the-spectrum candidate level gets half the smaller endpoint
    # spectral gap as its headroom, so certifying "eps above everything the
    # segment shows" demands steps finer than the path's invertibility scale.
    top_width = 0.5 * min(path.endpoint_gaps())

    def visit(ts: list[float], depth: int) -> None:
        eps, margin = _segment_level_and_margin(path, ts, top_width)
        if margin > 0.0:
            out.append((ts, eps, margin))
            return
        if depth >= opts.max_depth:
            raise CertificationError(
                f"subdivision exhausted at depth {depth}", window=(ts[0], ts[-1])
            )
        mid = (ts[0] + ts[-1]) / 2.0
        left = [t for t in ts if t < mid] + [mid]
        right = [mid] + [t for t in ts if t > mid]
        visit(_refine(left), depth + 1)
        visit(_refine(right), depth + 1)

    visit(_initial_grid(path, opts.samples), 0)
    return out


def sf_phillips(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> SfCertificate:
    """Certified-subdivision spectral flow (the defining formula).

    Per segment j the count of eigenvalues in [0, eps_j) is taken at both
    ends; the sum of the differences is the flow. Certification: at every
    sample of segment j the distance of +-eps_j to the spectrum exceeds the
    operator-norm step to the neighboring samples (a Weyl bound), so no
    eigenvalue can meet +-eps_j anywhere in the segment.
    """
    gaps = _check_endpoints(path, opts)
    segs = []
    for ts, eps, margin in _certified_segments(path, opts):
        segs.append(
            SfSegment(
                t_left=ts[0],
                t_right=ts[-1],
                eps=eps,
                rank_left=_rank_below(path, ts[0], eps),
                rank_right=_rank_below(path, ts[-1], eps),
                weyl_margin=margin,
            )
        )
    total = sum(s.rank_right - s.rank_left for s in segs)
    return SfCertificate(
        method="phillips",
        total=total,
        segments=tuple(segs),
        endpoint_gaps=gaps,
        opts=opts,
    )


def _upper_projection(path: OperatorPath, t: float, eps: float) -> np.ndarray:
    ed = path.eig(t)
    b = ed.vectors[:, ed.values > eps]
    return b @ b.conj().T


def sf_pairsum(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> SfCertificate:
    """Spectral flow as a sum of projection-pair indices over a subdivision.

    Starts from the sf_phillips segments and refines each one until the
    spectral projections above eps_j move by strictly less than 1 between
    the segment's samples (checked consecutively and against both ends).
    Each segment then contributes ind(P_+(t_j), P_+(t_{j-1})) computed by
    the three-route pair index.
    """
    gaps = _check_endpoints(path, opts)
    refined: list[tuple[list[float], float, float]] = []

    def settle(ts: list[float], eps: float, depth: int) -> None:
        projs = [_upper_projection(path, t, eps) for t in ts]
        worst = 0.0
        for k in range(len(ts) - 1):
            worst = max(worst, op_norm(projs[k + 1] - projs[k]))
        for k in range(len(ts)):
            worst = max(worst, op_norm(projs[k] - projs[0]))
            worst = max(worst, op_norm(projs[-1] - projs[k]))
        if worst < 1.0 - 1e-9:
            refined.append((ts, eps, 1.0 - worst))
            return
        if depth >= opts.max_depth:
            raise CertificationError(
                "projection-jump refinement exhausted", window=(ts[0], ts[-1])
            )
        mid = (ts[0] + ts[-1]) / 2.0
        left = [t for t in ts if t < mid] + [mid]
        right = [mid] + [t for t in ts if t > mid]
        settle(_refine(left), eps, depth + 1)
        settle(_refine(right), eps, depth + 1)

    for ts, eps, _margin in _certified_segments(path, opts):
        settle(ts, eps, 0)

    segs = []
    total = 0
    for ts, eps, proj_margin in refined:
        t0, t1 = ts[0], ts[-1]
        p_right = Projection(_nonneg_matrix(path, t1))
        p_left = Projection(_nonneg_matrix(path, t0))
        contrib = pair_index(p_right, p_left).value
        total += contrib
        segs.append(
            SfSegment(
                t_left=t0,
                t_right=t1,
                eps=eps,
                rank_left=path.nonneg_count(t0),
                rank_right=path.nonneg_count(t1),
                weyl_margin=proj_margin,
            )
        )
    cert = SfCertificate(
        method="pairsum",
        total=total,
        segments=tuple(segs),
        endpoint_gaps=gaps,
        opts=opts,
    )
    return cert


def _nonneg_matrix(path: OperatorPath, t: float) -> np.ndarray:
    ed = path.eig(t)
    b = ed.vectors[:, ed.values >= 0.0]
    return b @ b.conj().T


def sf_endpoints(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> int:
    """Rank difference of the nonnegative spectral projections at the ends."""
    _check_endpoints(path, opts)
    return path.nonneg_count(1.0) - path.nonneg_count(0.0)


def crossing_oracle_report(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> dict:
    """Dense signed tally of eigenvalue sign changes (the brute-force oracle).

    Consecutive samples are compared by their nonnegative-eigenvalue counts;
    every nonzero jump must be explained by eigenvalues within one
    operator-norm step of zero on both sides (otherwise the sampling is
    aliased and a SamplingError asks for more samples).
    """
    g0, g1 = _check_endpoints(path, opts)
    ts = sorted(set(np.linspace(0.0, 1.0, opts.oracle_samples).tolist()) | set(path.knots))
    counts = [path.nonneg_count(t) for t in ts]
    steps = _steps(path, ts)
    max_step = max(steps) if steps else 0.0
    if max_step >= 0.5 * min(g0, g1):
        raise SamplingError(
            f"oracle step {max_step:.3e} is not below half the endpoint gap "
            f"{min(g0, g1):.3e}; increase oracle_samples"
        )
    ups = 0
    downs = 0
    for k in range(len(ts) - 1):
        jump = counts[k + 1] - counts[k]
        if jump == 0:
            continue
        # slack covers the boundary case |eigenvalue| == step up to rounding
        step = steps[k] * (1.0 + 1e-9) + 1e-12
        movers_l = int(np.sum(np.abs(path.values(ts[k])) <= step))
        movers_r = int(np.sum(np.abs(path.values(ts[k + 1])) <= step))
        if abs(jump) > min(movers_l, movers_r):
            raise SamplingError(
                f"sign-count jump {jump} cannot be explained by eigenvalues "
                f"within one step ({step:.3e}) of zero; aliasing suspected",
                window=(ts[k], ts[k + 1]),
            )
        if jump > 0:
            ups += jump
        else:
            downs -= jump
    return {
        "total": ups - downs,
        "up_crossings": ups,
        "down_crossings": downs,
        "samples": len(ts),
        "max_step": max_step,
    }


def sf_crossing_oracle(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> int:
    return int(crossing_oracle_report(path, opts)["total"])


def sf_all_methods(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> dict:
    """Run all four methods and insist on exact agreement.

    Returns a dict with the common value and both certificates; raises
    ConsistencyFault if any two methods differ (that is a bug surface, not
    a property of the input).
    """
    cert_p = sf_phillips(path, opts)
    cert_s = sf_pairsum(path, opts)
    ends = sf_endpoints(path, opts)
    oracle = sf_crossing_oracle(path, opts)
    values = {
        "phillips": cert_p.total,
        "pairsum": cert_s.total,
        "endpoints": ends,
        "crossing_oracle": oracle,
    }
    if len(set(values.values())) != 1:
        raise ConsistencyFault(f"spectral-flow methods disagree: {values}")
    return {
        "value": ends,
        "methods": values,
        "phillips_certificate": cert_p,
        "pairsum_certificate": cert_s,
    }


def path_concat(f: OperatorPath, g: OperatorPath) -> OperatorPath:
    """Concatenation (f then g), requiring f(1) = g(0) within 1e-10."""
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dims differ: {f.dim} vs {g.dim}")
    mismatch = op_norm(f.matrix(1.0).mat - g.matrix(0.0).mat)
    scale = 1.0 + max(f.matrix(1.0).norm, g.matrix(0.0).norm)
    if mismatch > 1e-10 * scale:
        raise EndpointError(
            f"concatenation endpoints differ by {mismatch:.3e} (limit {1e-10 * scale:.3e})"
        )

    def evaluate(t: float) -> HermitianMatrix:
        if t <= 0.5:
            return f.matrix(2.0 * t)
        return g.matrix(2.0 * t - 1.0)

    knots = [k / 2.0 for k in f.knots] + [0.5] + [0.5 + k / 2.0 for k in g.knots]
    return OperatorPath(
        evaluate,
        f.dim,
        kind="closed-form",
        knots=knots,
        meta={"concat": [f.meta, g.meta]},
    )


def path_reverse(f: OperatorPath) -> OperatorPath:
    """Time reversal t -> f(1 - t); negates the spectral flow."""

    def evaluate(t: float) -> HermitianMatrix:
        return f.matrix(1.0 - t)

    knots = [1.0 - k for k in f.knots]
    return OperatorPath(
        evaluate, f.dim, kind="closed-form", knots=knots, meta={"reverse": f.meta}
    )


def certify_invertible(path: OperatorPath, opts: SfOptions = _DEFAULT_OPTS) -> dict:
    """Weyl-certify that a path stays invertible for every t in [0, 1].

    At every grid sample the spectral gap around 0 must exceed the
    operator-norm step to the neighboring samples. Returns a report with
    ``certified`` plus the worst margin; it does not raise on failure so
    sweep drivers can count and refine.
    """
    ts = _initial_grid(path, opts.samples)
    steps = _steps(path, ts)
    worst = np.inf
    min_gap = np.inf
    for k, t in enumerate(ts):
        gap = float(np.min(np.abs(path.values(t))))
        near = 0.0
        if k > 0:
            near = max(near, steps[k - 1])
        if k < len(steps):
            near = max(near, steps[k])
        worst = min(worst, gap - near)
        min_gap = min(min_gap, gap)
    return {
        "certified": bool(worst > 0.0),
        "margin": float(worst),
        "min_gap": float(min_gap),
        "max_step": float(max(steps) if steps else 0.0),
        "samples": len(ts),
    }
