"""File formats: matrix and path literals, report JSON, the metrics CSV.

Matrices travel as {"dim", "re", "im"} with row-major nested lists
(rectangular blocks as {"rows", "cols", "re", "im"}); paths either carry
explicit samples or name a seeded family; JSON output is canonical
(sorted keys, two-space indent, trailing newline) so identical inputs
produce byte-identical files. Floats in CSV are printed with %.17g so a
round trip through text loses nothing.
"""

from __future__ import annotations

import io
import json

import numpy as np

from .errors import InputError
from .graded import GradedOperator
from .matcore import HermitianMatrix, as_hermitian
from .metrics import MetricReport
from .opmodel import FAMILIES, DiagonalModel
from .specflow import OperatorPath, SfCertificate
from .generators import FAMILY_NAMES, family_path

__all__ = [
    "matrix_to_obj",
    "matrix_from_obj",
    "block_to_obj",
    "block_from_obj",
    "path_to_obj",
    "path_from_obj",
    "graded_to_obj",
    "graded_from_obj",
    "model_from_obj",
    "certificate_to_obj",
    "metrics_csv",
    "dumps_json",
    "read_json",
    "write_text",
]

CSV_COLUMNS = ("family", "n", "d_N", "d_W", "d_R", "d_G",
               "res_N", "res_W", "res_R", "res_G")


def matrix_to_obj(h) -> dict:
    """{"dim", "re", "im"} literal for a square complex matrix."""
    mat = h.mat if isinstance(h, HermitianMatrix) else np.asarray(h, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InputError(f"matrix literal needs a square array, got {mat.shape}")
    return {
        "dim": int(mat.shape[0]),
        "re": np.real(mat).tolist(),
        "im": np.imag(mat).tolist(),
    }


def _parts_to_array(obj: dict, shape: tuple[int, int], what: str) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{what} literal needs numeric 're' and 'im' parts") from exc
    if re.shape != shape or im.shape != shape:
        raise InputError(
            f"{what} parts must have shape {shape}, got {re.shape} and {im.shape}"
        )
    return re + 1j * im


def matrix_from_obj(obj: dict) -> HermitianMatrix:
    if not isinstance(obj, dict) or "dim" not in obj:
        raise InputError("matrix literal must be an object with a 'dim' field")
    n = int(obj["dim"])
    return HermitianMatrix(_parts_to_array(obj, (n, n), "matrix"))


def block_to_obj(a: np.ndarray) -> dict:
    """{"rows", "cols", "re", "im"} literal for a rectangular block."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise InputError(f"block literal needs a 2-d array, got ndim {a.ndim}")
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": np.real(a).tolist(),
        "im": np.imag(a).tolist(),
    }


def block_from_obj(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict) or "rows" not in obj or "cols" not in obj:
        raise InputError("block literal must be an object with 'rows' and 'cols'")
    shape = (int(obj["rows"]), int(obj["cols"]))
    return _parts_to_array(obj, shape, "block")


def _looks_like_matrix(value) -> bool:
    return isinstance(value, dict) and {"dim", "re", "im"} <= set(value)


def _revive_params(params: dict) -> dict:
    out = {}
    for key, value in params.items():
        out[key] = matrix_from_obj(value) if _looks_like_matrix(value) else value
    return out


def path_to_obj(path: OperatorPath, *, samples: int = 33) -> dict:
    """Sampled snapshot of a path (family paths round-trip exactly only
    when rebuilt from their family spec; this is the generic fallback)."""
    ts = np.linspace(0.0, 1.0, int(samples))
    return {
        "dim": path.dim,
        "kind": "sampled",
        "samples": [matrix_to_obj(path.matrix(t)) for t in ts],
    }


def path_from_obj(obj: dict) -> OperatorPath:
    if not isinstance(obj, dict):
        raise InputError("path spec must be an object")
    kind = obj.get("kind")
    if kind == "sampled":
        samples = obj.get("samples")
        if not isinstance(samples, list) or len(samples) < 2:
            raise InputError("sampled path needs a list of at least 2 samples")
        mats = [matrix_from_obj(s) for s in samples]
        path = OperatorPath.from_samples(mats)
    elif kind == "family":
        spec = obj.get("family")
        if not isinstance(spec, dict) or "name" not in spec:
            raise InputError("family path needs a 'family' object with a 'name'")
        path = family_path(
            spec["name"],
            _revive_params(spec.get("params", {})),
            seed=spec.get("seed"),
            dim=obj.get("dim"),
        )
    else:
        raise InputError(f"path kind must be 'sampled' or 'family', got {kind!r}")
    if "dim" in obj and int(obj["dim"]) != path.dim:
        raise InputError(
            f"declared dim {obj['dim']} does not match path dim {path.dim}"
        )
    return path


def graded_to_obj(g: GradedOperator) -> dict:
    return {"p": g.p, "q": g.q, "A": block_to_obj(g.block)}


def graded_from_obj(obj: dict) -> GradedOperator:
    if not isinstance(obj, dict) or not {"p", "q", "A"} <= set(obj):
        raise InputError("graded spec needs 'p', 'q' and the block 'A'")
    return GradedOperator(int(obj["p"]), int(obj["q"]), block_from_obj(obj["A"]))


def model_from_obj(obj: dict) -> tuple[DiagonalModel, list[str], list[int] | None]:
    """Diagonal-model spec {"N", "law", "family"?, "n"?} -> (model,
    families to tabulate, explicit index list or None for the default)."""
    if not isinstance(obj, dict):
        raise InputError("model spec must be an object")
    model = DiagonalModel(int(obj.get("N", 64)), obj.get("law", "linear"))
    fam = obj.get("family")
    if fam is None:
        families = list(FAMILIES)
    elif isinstance(fam, str):
        families = [fam]
    else:
        families = [str(f) for f in fam]
    n = obj.get("n")
    if n is None:
        ns = None
    elif isinstance(n, list):
        ns = [int(v) for v in n]
    else:
        ns = [int(n)]
    return model, families, ns


def certificate_to_obj(cert: SfCertificate) -> dict:
    return {
        "method": cert.method,
        "total": cert.total,
        "endpoint_gaps": list(cert.endpoint_gaps),
        "options": {
            "samples": cert.opts.samples,
            "oracle_samples": cert.opts.oracle_samples,
            "max_depth": cert.opts.max_depth,
            "endpoint_gap": cert.opts.endpoint_gap,
        },
        "segments": [
            {
                "t_left": seg.t_left,
                "t_right": seg.t_right,
                "eps": seg.eps,
                "rank_left": seg.rank_left,
                "rank_right": seg.rank_right,
                "weyl_margin": seg.weyl_margin,
            }
            for seg in cert.segments
        ],
    }


def _coerce(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON-serializable: {type(value).__name__}")


def dumps_json(obj) -> str:
    """Canonical JSON: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_coerce) + "\n"


def read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _g17(value: float | None) -> str:
    return "" if value is None else "%.17g" % value


def metrics_csv(rows: list[MetricReport]) -> str:
    """The separation table with residual columns; %.17g floats, empty
    cells where no closed form applies."""
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        cells = [
            row.family,
            str(row.n),
            _g17(row.d_N),
            _g17(row.d_W),
            _g17(row.d_R),
            _g17(row.d_G),
            _g17(row.res_N),
            _g17(row.res_W),
            _g17(row.res_R),
            _g17(row.res_G),
        ]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
