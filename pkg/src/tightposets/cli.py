"""Command-line interface.

Every verb reads JSON, writes a JSON report (to ``--out`` or stdout) and,
for poset-valued results, optionally a Graphviz file (``--dot``).  Reports
carry a ``meta`` block with the input hashes, package version, seed and
tolerance, and contain nothing time- or environment-dependent.

Exit status: 0 success, 2 invalid input, 3 resource cap reached,
4 inconclusive heuristic.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .arith import DEFAULT_TOL, Tolerance, scalar_to_json
from .errors import (
    InconclusiveError,
    LimitExceededError,
    TightPosetError,
    ValidationError,
)
from .io import (
    dumps,
    frame_from_json,
    frame_to_json,
    poset_from_json,
    polytope_to_json,
    scaling_from_json,
    sha256_of,
)

EXIT_OK, EXIT_INVALID, EXIT_LIMIT, EXIT_INCONCLUSIVE = 0, 2, 3, 4


class _Inputs:
    """Loads JSON inputs and remembers their hashes for the report."""

    def __init__(self):
        self.hashes: dict[str, str] = {}

    def load(self, path: str):
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise ValidationError(f"{path}: cannot read ({exc.strerror})") from exc
        self.hashes[path] = sha256_of(data)
        try:
            return json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _tol(args, default: Tolerance = DEFAULT_TOL) -> Tolerance:
    if args.tol is not None and args.tol <= 0:
        raise ValidationError("--tol must be positive")
    tol = default if args.tol is None else Tolerance(args.tol, args.tol)
    args._tol_used = tol
    return tol


def _load_frame(inputs: _Inputs, path: str):
    try:
        return frame_from_json(inputs.load(path))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _load_poset_or_frame(inputs: _Inputs, path: str, tol: Tolerance):
    """Poset JSON, or a frame JSON whose factor poset is taken."""
    from .factor_poset import factor_poset

    obj = inputs.load(path)
    try:
        if isinstance(obj, dict) and "vectors" in obj:
            return factor_poset(frame_from_json(obj), tol=tol)
        return poset_from_json(obj)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _floats(x) -> list:
    import numpy as np

    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        return [{"re": float(z.real), "im": float(z.imag)} for z in arr.reshape(-1)]
    return [float(z) for z in arr.reshape(-1)]


# -- verbs ----------------------------------------------------------------
def cmd_poset(args, inputs: _Inputs) -> dict:
    from .factor_poset import factor_poset, hasse_dot, strip_zero_vectors

    tol = _tol(args)
    F = _load_frame(inputs, args.frame)
    kept = None
    if args.strip_zeros:
        F, kept = strip_zero_vectors(F, tol)
    P = factor_poset(F, tol=tol)
    report = {"poset": P.to_json(), "size": len(P)}
    if kept is not None:
        report["kept_indices"] = kept
    args._dot = hasse_dot(P)
    return report


def cmd_empty_cover(args, inputs: _Inputs) -> dict:
    from .factor_poset import empty_cover, hasse_dot
    from .poset import indices_from_mask

    P = _load_poset_or_frame(inputs, args.input, _tol(args))
    ec = empty_cover(P)
    args._dot = hasse_dot(P)
    return {
        "poset": P.to_json(),
        "empty_cover": [indices_from_mask(m) for m in ec],
        "size": len(ec),
    }


def cmd_signings(args, inputs: _Inputs) -> dict:
    from .factor_poset import all_signings, forced_sign_relations, satisfies_closure_condition
    from .poset import indices_from_mask

    P = _load_poset_or_frame(inputs, args.input, _tol(args))
    closure = satisfies_closure_condition(P)
    report = {
        "poset": P.to_json(),
        "closure_condition": {
            "ok": closure.ok,
            "witness": None if closure.witness is None else indices_from_mask(closure.witness),
            "reason": closure.reason,
        },
    }
    signs = all_signings(P, limit=args.limit)
    report["signings"] = [str(s) for s in signs]
    if signs:
        forced = forced_sign_relations(P)
        report["forced"] = {
            "equal_pairs": [list(p) for p in forced.equal_pairs],
            "unequal_pairs": [list(p) for p in forced.unequal_pairs],
            "unique_signing": forced.unique_signing,
        }
    return report


def cmd_inverse(args, inputs: _Inputs) -> dict:
    from .feasibility import build_feasibility_system, solve_heuristic
    from .inverse import inverse_frame_r2
    from .projections import dimension_upper_bound

    tol = _tol(args)
    P = _load_poset_or_frame(inputs, args.poset, tol)
    if args.dim == 2:
        res = inverse_frame_r2(
            P, args.rows, full_spark=args.full_spark, max_norm=args.max_norm, tol=tol
        )
        report = {"poset": P.to_json(), "frame": frame_to_json(res.frame), "v": list(res.v)}
        if res.w is not None:
            report["w"] = list(res.w)
        return report
    if args.dim < 2:
        raise ValidationError("--dim must be at least 2")
    system = build_feasibility_system(P, args.dim)
    res = solve_heuristic(
        P, args.dim, seed=args.seed, restarts=args.restarts, tol=Tolerance(1e-8, 1e-8)
    )
    report = {
        "poset": P.to_json(),
        "system": system.counts(),
        "status": res.status,
        "attempts": res.attempts,
    }
    if P.nonempty:
        report["dimension_upper_bound"] = dimension_upper_bound(P)
    if res.frame is None:
        args._exit = EXIT_INCONCLUSIVE
    else:
        report["frame"] = frame_to_json(res.frame)
    if args.emit_system:
        report["system_json"] = system.to_json()
    return report


def cmd_project(args, inputs: _Inputs) -> dict:
    from .factor_poset import factor_poset
    from .projections import find_tight_projections, reduce_dimension_preserving_poset

    tol = _tol(args, Tolerance(1e-8, 1e-8))
    F = _load_frame(inputs, args.frame).to_float()
    report: dict = {}
    if F.n >= 3:
        rep = find_tight_projections(F, tol)
        report["tight_projections"] = {
            "eigenvalues": list(rep.eigenvalues),
            "case": rep.case,
            "normals": [_floats(x) for x in rep.normals],
            "tight_bounds": list(rep.tight_bounds),
            "family_basis": [_floats(x) for x in rep.family_basis],
        }
    if args.to_dim is not None:
        G = reduce_dimension_preserving_poset(F, args.to_dim, args.seed, tol=tol)
        report["reduced"] = {
            "frame": frame_to_json(G),
            "poset": factor_poset(G, tol=tol).to_json(),
        }
    return report


def cmd_scalings(args, inputs: _Inputs) -> dict:
    from .scalability import minimal_scalings, scalability_poset

    tol = _tol(args)
    F = _load_frame(inputs, args.frame)
    poly = minimal_scalings(F, limit=args.limit, tol=tol)
    P = scalability_poset(F, polytope=poly, tol=tol)
    return {"polytope": polytope_to_json(poly), "scalability_poset": P.to_json()}


def _load_w(inputs: _Inputs, arg: str):
    if Path(arg).is_file():
        return scaling_from_json(inputs.load(arg))
    try:
        return scaling_from_json(json.loads(arg))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--w: not a file and not JSON ({exc.msg})") from exc


def cmd_classify_scaling(args, inputs: _Inputs) -> dict:
    from .poset import indices_from_mask
    from .scalability import classify_scaling, exists_orthogonal_partition

    tol = _tol(args)
    F = _load_frame(inputs, args.frame)
    w = _load_w(inputs, args.w)
    if len(w) != F.k:
        raise ValidationError(f"--w has {len(w)} entries, the frame has {F.k} vectors")
    cls = classify_scaling(F, w, tol)
    split, parts = exists_orthogonal_partition(F, w, tol=tol)
    return {
        "w": [scalar_to_json(x) for x in w],
        "verdict": "prime" if cls.prime else "non-prime",
        "witness": None if cls.witness is None else indices_from_mask(cls.witness),
        "orthogonal_partition": (
            [indices_from_mask(parts[0]), indices_from_mask(parts[1])] if split else None
        ),
    }


def cmd_enumerate(args, inputs: _Inputs) -> dict:
    from .enumeration import enumerate_factor_posets_r2

    census = enumerate_factor_posets_r2(args.k, method=args.method, order_seed=args.order_seed)
    return {"census": census.to_json()}


def cmd_census_check(args, inputs: _Inputs) -> dict:
    from .enumeration import (
        check_ec_conjecture,
        check_furedi_census,
        ec_bound,
        enumerate_factor_posets_r2,
        furedi_bound,
    )

    census = enumerate_factor_posets_r2(args.k)
    ec = check_ec_conjecture(census)
    fu = check_furedi_census(census)
    return {
        "k": args.k,
        "census_size": census.count,
        "empty_cover_bound": {
            "bound": ec_bound(args.k),
            "checked": ec.checked,
            "counterexamples": ec.verdict,
            "violations": [P.index_sets() for P in ec.violations],
        },
        "tight_size_bound": {
            "bound": furedi_bound(args.k),
            "checked": fu.checked,
            "counterexamples": fu.verdict,
            "violations": [P.index_sets() for P in fu.violations],
        },
    }


# -- parser ---------------------------------------------------------------
def _common(p: argparse.ArgumentParser, seed: bool = False) -> None:
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--tol", type=float, help="absolute and relative tolerance for float data")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="seed for all random choices (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tightposets", description="Factor posets of finite frames."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("poset", help="factor poset of a frame")
    p.add_argument("frame", help="frame JSON file")
    p.add_argument("--dot", help="also write the Hasse diagram (Graphviz) here")
    p.add_argument("--strip-zeros", action="store_true", help="drop zero vectors first")
    _common(p)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("empty-cover", help="minimal nonempty elements of a poset")
    p.add_argument("input", help="poset JSON or frame JSON file")
    p.add_argument("--dot", help="also write the Hasse diagram (Graphviz) here")
    _common(p)
    p.set_defaults(func=cmd_empty_cover)

    p = sub.add_parser("signings", help="closure condition, signings and forced sign relations")
    p.add_argument("input", help="poset JSON or frame JSON file")
    p.add_argument("--limit", type=int, default=24, help="largest k handled (default 24)")
    _common(p)
    p.set_defaults(func=cmd_signings)

    p = sub.add_parser("inverse", help="frame realizing a poset")
    p.add_argument("poset", help="poset JSON file")
    p.add_argument("--rows", type=int, choices=(1, 2), default=2, help="witness rows in R^2 (default 2)")
    p.add_argument("--full-spark", action="store_true", help="require a full spark frame (R^2)")
    p.add_argument("--dim", type=int, default=2, help="target dimension; above 2 runs the heuristic")
    p.add_argument("--max-norm", type=int, help="largest witness entry to try")
    p.add_argument("--restarts", type=int, default=20, help="heuristic restarts (dim > 2)")
    p.add_argument("--emit-system", action="store_true", help="include the quadratic system (dim > 2)")
    _common(p, seed=True)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("project", help="tight hyperplane projections and dimension reduction")
    p.add_argument("frame", help="frame JSON file")
    p.add_argument("--to-dim", type=int, help="project down to this dimension keeping the poset")
    _common(p, seed=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("scalings", help="minimal scalings (vertices of the scaling polytope)")
    p.add_argument("frame", help="frame JSON file")
    p.add_argument("--limit", type=int, default=14, help="largest k handled (default 14)")
    _common(p)
    p.set_defaults(func=cmd_scalings)

    p = sub.add_parser("classify-scaling", help="prime / non-prime verdict for a scaling")
    p.add_argument("frame", help="frame JSON file")
    p.add_argument("--w", required=True, help="scaling: JSON file or inline JSON list")
    _common(p)
    p.set_defaults(func=cmd_classify_scaling)

    p = sub.add_parser("enumerate", help="census of planar factor posets on k indices")
    p.add_argument("--k", type=int, required=True, help="number of vectors (2..7)")
    p.add_argument("--method", choices=("vectorized", "mitm"), default="vectorized")
    p.add_argument("--order-seed", type=int, help="shuffle the scan order (result unchanged)")
    _common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("census-check", help="check the size bounds over the census")
    p.add_argument("--k", type=int, required=True, help="number of vectors (2..7)")
    _common(p)
    p.set_defaults(func=cmd_census_check)
    return parser


def _meta(args, inputs: _Inputs) -> dict:
    tol = args._tol_used
    return {
        "verb": args.verb,
        "version": __version__,
        "inputs": dict(sorted(inputs.hashes.items())),
        "seed": getattr(args, "seed", None),
        "tolerance": None if tol is None else {"absolute": tol.absolute, "relative": tol.relative},
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._dot = None
    args._exit = EXIT_OK
    args._tol_used = None
    inputs = _Inputs()
    try:
        report = args.func(args, inputs)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except LimitExceededError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except TightPosetError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report["meta"] = _meta(args, inputs)
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    dot_path = getattr(args, "dot", None)
    if dot_path and args._dot is not None:
        Path(dot_path).write_text(args._dot)
    return args._exit


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
