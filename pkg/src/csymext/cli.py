"""Command-line front end: JSON instance files in, JSON reports out.

Instance schema::

    {
      "dim": n,
      "conjugation": <n x n matrix>,
      "domain_basis": <n x m matrix>,
      "action": <n x m matrix>,
      "lambda": [re, im]          # optional
    }

Complex entries are two-element [re, im] arrays, matrices are row-major
nested arrays. Reports use the same encoding; floats are serialized with
17 significant digits so every emitted value round-trips exactly at
double precision. Exit codes: 0 success, 1 validation failure, 2 parse
failure, 3 numerical failure (e.g. a parameter that puts 1 into the
spectrum of the extended contraction).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .conjugation import Conjugation
from .dissipative import (
    cayley_forward,
    cayley_inverse,
    check_defect_identities,
    dissipation_margin,
    dissipative_uniqueness,
    glazman_extend,
    make_dissipative,
)
from .errors import ParseError, ToolkitError
from .extensions import (
    BoundedParam,
    ContractiveParam,
    UniquenessReport,
    bounded_extend,
    central_extension,
    cself_contractive_extend,
    operator_ball,
    uniqueness_report,
)
from .linalg import Subspace, Tolerance, operator_norm
from .oracle import ProblemInstance, coverage_search, grid_enumerate_2x2
from .partial_ops import PartialOperator, check_c_symmetric

COMMANDS = (
    "validate", "extend-bounded", "extend-contractive", "center", "ball",
    "unique", "cayley", "glazman", "fuzz",
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------------------
# JSON encoding

def _decode_entry(obj) -> complex:
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2
            and all(isinstance(x, (int, float)) for x in obj)):
        raise ParseError(f"complex entry must be [re, im], got {obj!r}")
    return complex(obj[0], obj[1])


def decode_matrix(obj, rows: int | None = None,
                  cols: int | None = None) -> np.ndarray:
    if not isinstance(obj, list):
        raise ParseError("matrix must be a nested array")
    if rows is not None and len(obj) != rows:
        raise ParseError(f"expected {rows} rows, got {len(obj)}")
    data = []
    width = cols
    for row in obj:
        if not isinstance(row, list):
            raise ParseError("matrix rows must be arrays")
        if width is None:
            width = len(row)
        if len(row) != width:
            raise ParseError("matrix rows have inconsistent lengths")
        data.append([_decode_entry(e) for e in row])
    if not data:
        return np.zeros((0, 0 if width is None else width),
                        dtype=np.complex128)
    return np.array(data, dtype=np.complex128)


def encode_matrix(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=np.complex128)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def _format_float(x: float) -> str:
    if x != x:
        return '"nan"'
    if x == float("inf"):
        return '"inf"'
    if x == float("-inf"):
        return '"-inf"'
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ",".join(
            json.dumps(str(k)) + ":" + dumps(v) for k, v in obj.items()
        ) + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


# ---------------------------------------------------------------------------
# instance / parameter loading

def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}")


def load_instance(path: str):
    """Raw instance pieces: (conjugation, partial operator, lambda)."""
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ParseError("instance file must be a JSON object")
    try:
        n = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise ParseError('instance needs an integer "dim"')
    if n <= 0:
        raise ParseError('"dim" must be positive')
    for key in ("conjugation", "domain_basis", "action"):
        if key not in doc:
            raise ParseError(f'instance needs "{key}"')
    conj = Conjugation(decode_matrix(doc["conjugation"], n, n))
    basis = decode_matrix(doc["domain_basis"], rows=None)
    if basis.size == 0:
        basis = np.zeros((n, 0), dtype=np.complex128)
    if basis.shape[0] != n:
        raise ParseError(f'"domain_basis" must have {n} rows')
    action = decode_matrix(doc["action"], rows=None)
    if action.size == 0:
        action = np.zeros((n, 0), dtype=np.complex128)
    if action.shape != basis.shape:
        raise ParseError('"action" shape must match "domain_basis"')
    lam = None
    if "lambda" in doc:
        lam = _decode_entry(doc["lambda"])
    partial = PartialOperator(Subspace(basis), action)
    return conj, partial, lam


def load_param(path: str):
    """Parameter file: a bare matrix, or {"matrix": ..., "variant": ...}."""
    doc = _load_json(path)
    variant = None
    if isinstance(doc, dict):
        if "matrix" not in doc:
            raise ParseError('parameter object needs "matrix"')
        variant = doc.get("variant")
        if variant is not None and not isinstance(variant, str):
            raise ParseError('"variant" must be a string')
        matrix = decode_matrix(doc["matrix"])
    else:
        matrix = decode_matrix(doc)
    return matrix, variant


def _parse_lambda(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError('--lambda expects "RE,IM"')
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ParseError('--lambda expects "RE,IM" with numeric parts')


# ---------------------------------------------------------------------------
# commands

def _residual_entry(name: str, value: float, tol: float) -> dict:
    return {name: value, f"{name}_ok": bool(value <= tol)}


def _extension_report(name: str, matrix: np.ndarray, partial: PartialOperator,
                      conj: Conjugation, tol: Tolerance) -> dict:
    ext = partial.extension_residual(matrix)
    csa = conj.self_adjoint_residual(matrix)
    report = {name: encode_matrix(matrix), "norm": operator_norm(matrix)}
    report.update(_residual_entry("extension_residual", ext, tol.residual_tol))
    report.update(
        _residual_entry("c_self_adjoint_residual", csa, tol.residual_tol)
    )
    return report


def _uniqueness_payload(rep: UniquenessReport) -> dict:
    return {
        "unique": rep.unique,
        "intersection_dim": rep.intersection_dim,
        "coisometry_residual": rep.coisometry_residual,
        "core_is_full": rep.core_is_full,
        "radius_norm": rep.radius_norm,
        "radius_zero": rep.radius_zero,
        "probes": [
            {"id": pid, "value": value, "verdict": verdict}
            for pid, value, verdict in rep.probes
        ],
    }


def _cmd_validate(args, tol: Tolerance) -> dict:
    conj, partial, _ = load_instance(args.input)
    cert = conj.check(tol)
    if not cert.ok:
        raise ToolkitError("conjugation is not symmetric unitary",
                           residual=cert.residual)
    basis_res = partial.domain.check(tol)
    if basis_res > tol.residual_tol:
        raise ToolkitError("domain basis is not orthonormal",
                           residual=basis_res)
    sym = check_c_symmetric(partial, conj, tol)
    if not sym.ok:
        raise ToolkitError("operator is not C-symmetric",
                           residual=sym.residual)
    norm = partial.norm()
    return {
        "dim": partial.ambient_dim,
        "domain_dim": partial.domain_dim,
        "c_symmetric": True,
        "c_symmetry_residual": sym.residual,
        "contraction": bool(norm <= 1.0 + tol.residual_tol),
        "norm": norm,
        "dissipation_margin": dissipation_margin(partial),
    }


def _contraction_instance(args, tol: Tolerance) -> ProblemInstance:
    conj, partial, _ = load_instance(args.input)
    return ProblemInstance(partial.ambient_dim, conj, partial,
                           seed=args.seed, tol=tol)


def _cmd_extend_contractive(args, tol: Tolerance) -> dict:
    inst = _contraction_instance(args, tol)
    kit = inst.kit()
    n = inst.dim
    if args.param:
        matrix, _ = load_param(args.param)
        if matrix.shape != (n, n):
            raise ParseError(f"parameter must be {n} x {n}")
        param = ContractiveParam(matrix)
    else:
        param = ContractiveParam.zero(n)
    w = cself_contractive_extend(kit, param)
    report = _extension_report("extension", w, inst.partial, inst.conj, tol)
    report.update(_residual_entry("contraction_excess",
                                  max(0.0, operator_norm(w) - 1.0),
                                  tol.residual_tol))
    return report


def _cmd_extend_bounded(args, tol: Tolerance) -> dict:
    inst = _contraction_instance(args, tol)
    kit = inst.kit()
    n = inst.dim
    if args.param:
        matrix, variant = load_param(args.param)
        if matrix.shape != (n, n):
            raise ParseError(f"parameter must be {n} x {n}")
        param = BoundedParam(variant or "tz", matrix)
    else:
        param = BoundedParam("tz", np.zeros((n, n), dtype=np.complex128))
    t = bounded_extend(kit, param)
    report = _extension_report("extension", t, inst.partial, inst.conj, tol)
    report["variant"] = param.variant
    return report


def _cmd_center(args, tol: Tolerance) -> dict:
    inst = _contraction_instance(args, tol)
    w0 = central_extension(inst.kit())
    report = _extension_report("center", w0, inst.partial, inst.conj, tol)
    report.update(_residual_entry("contraction_excess",
                                  max(0.0, operator_norm(w0) - 1.0),
                                  tol.residual_tol))
    return report


def _cmd_ball(args, tol: Tolerance) -> dict:
    inst = _contraction_instance(args, tol)
    ball = operator_ball(inst.kit())
    left = operator_norm(ball.left_radius)
    right = operator_norm(ball.right_radius)
    return {
        "center": encode_matrix(ball.center),
        "left_radius": encode_matrix(ball.left_radius),
        "right_radius": encode_matrix(ball.right_radius),
        "left_radius_norm": left,
        "right_radius_norm": right,
        "radius_zero": bool(left <= tol.residual_tol),
    }


def _cmd_unique(args, tol: Tolerance) -> dict:
    inst = _contraction_instance(args, tol)
    rep = uniqueness_report(inst.kit(), probes=args.trials_probe_count(),
                            seed=args.seed)
    return _uniqueness_payload(rep)


def _dissipative_instance(args, tol: Tolerance):
    conj, partial, lam_file = load_instance(args.input)
    cert = conj.check(tol)
    if not cert.ok:
        raise ToolkitError("conjugation is not symmetric unitary",
                           residual=cert.residual)
    t = make_dissipative(partial, tol)
    lam = args.lam if args.lam_given else (lam_file or complex(0.0, 1.0))
    return conj, t, lam


def _cmd_cayley(args, tol: Tolerance) -> dict:
    conj, t, lam = _dissipative_instance(args, tol)
    sym = check_c_symmetric(t.op, conj, tol)
    cd = cayley_forward(t, lam, conj if sym.ok else None, tol)
    back = cayley_inverse(cd.transform, lam, tol)
    dom_res = operator_norm(
        back.op.domain.projector() - t.op.domain.projector()
    )
    act_res = operator_norm(back.matrix() - t.matrix())
    report = {
        "lambda": [lam.real, lam.imag],
        "transform_domain_dim": cd.transform.domain_dim,
        "transform_norm": cd.transform.norm(),
        "deficiency_dim": cd.deficiency.dim,
        "roundtrip_domain_residual": dom_res,
        "roundtrip_action_residual": act_res,
        "c_symmetric": sym.ok,
        "c_symmetry_residual": sym.residual,
    }
    if t.is_full_domain:
        cert = check_defect_identities(t, lam, samples=args.trials, seed=args.seed,
                                       tol=tol)
        report["defect_identity_residual"] = cert.residual
    if sym.ok:
        rep = dissipative_uniqueness(t, conj, lam, seed=args.seed, tol=tol)
        report["uniqueness"] = _uniqueness_payload(rep)
    return report


def _cmd_glazman(args, tol: Tolerance) -> dict:
    conj, t, lam = _dissipative_instance(args, tol)
    n = t.ambient_dim
    if args.param:
        matrix, _ = load_param(args.param)
        if matrix.shape != (n, n):
            raise ParseError(f"parameter must be {n} x {n}")
        param = ContractiveParam(matrix)
    else:
        param = ContractiveParam.zero(n)
    extended, cert = glazman_extend(t, conj, lam, param, tol)
    return {
        "result": encode_matrix(extended.matrix()),
        "lambda": [lam.real, lam.imag],
        "full_domain": extended.is_full_domain,
        "extension_residual": cert.checks["extension"],
        "c_self_adjoint_residual": cert.checks["c_self_adjoint"],
        "dissipation_margin": cert.checks["margin"],
        "ok": cert.ok,
    }


def _cmd_fuzz(args, tol: Tolerance) -> dict:
    inst = _contraction_instance(args, tol)
    report = coverage_search(inst, args.trials, tol=args.tol)
    payload = {
        "trials": report.trials,
        "accepted": report.accepted,
        "max_distance": report.max_distance,
        "witness_count": len(report.witnesses),
        "witnesses": [encode_matrix(w) for w in report.witnesses[:5]],
        "ok": report.ok,
    }
    if args.grid_step:
        grid = grid_enumerate_2x2(inst, args.grid_step)
        payload["grid"] = {
            "trials": grid.trials,
            "accepted": grid.accepted,
            "max_distance": grid.max_distance,
            "witness_count": len(grid.witnesses),
            "ok": grid.ok,
        }
    return payload


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csymext",
        description="C-self-adjoint extensions of C-symmetric partial "
                    "operators",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="instance JSON file")
    parser.add_argument("--param", help="parameter matrix JSON file")
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="residual tolerance (default 1e-9)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--lambda", dest="lam_text", default=None,
                        metavar="RE,IM",
                        help="upper-half-plane point (default 0,1)")
    parser.add_argument("--grid-step", type=float, default=None)
    return parser


class _Args:
    """Typed view over parsed arguments."""

    def __init__(self, ns: argparse.Namespace):
        self.command = ns.command
        self.input = ns.input
        self.param = ns.param
        self.tol = ns.tol
        self.seed = ns.seed
        self.trials = ns.trials
        self.lam_given = ns.lam_text is not None
        self.lam = _parse_lambda(ns.lam_text) if ns.lam_text else complex(0, 1)
        self.grid_step = ns.grid_step

    def trials_probe_count(self) -> int:
        return min(self.trials, 64)


_DISPATCH = {
    "validate": _cmd_validate,
    "extend-contractive": _cmd_extend_contractive,
    "extend-bounded": _cmd_extend_bounded,
    "center": _cmd_center,
    "ball": _cmd_ball,
    "unique": _cmd_unique,
    "cayley": _cmd_cayley,
    "glazman": _cmd_glazman,
    "fuzz": _cmd_fuzz,
}


def run(argv) -> tuple[int, str]:
    """Execute one command; returns (exit code, JSON report text)."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_PARSE if exc.code else EXIT_OK), ""
    try:
        args = _Args(ns)
        if args.tol <= 0:
            raise ParseError("--tol must be positive")
        tol = Tolerance(residual_tol=args.tol)
        payload = _DISPATCH[args.command](args, tol)
        return EXIT_OK, dumps(payload)
    except ToolkitError as exc:
        payload = {"error": {
            "code": exc.code,
            "message": exc.message,
            "residual": exc.residual,
        }}
        category = {
            "validation": EXIT_VALIDATION,
            "parse": EXIT_PARSE,
            "numerical": EXIT_NUMERICAL,
        }[exc.exit_category]
        return category, dumps(payload)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
