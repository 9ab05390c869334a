"""hyperstate command-line interface.

Usage:
    hyperstate build graph.hg --out state.json
    hyperstate invariants w:4
    hyperstate lme prop2:4
    hyperstate compare graph.hg w:3
    hyperstate encode phases.json --out weighted.hg
    hyperstate atlas --n 3 --out atlas3.csv

State arguments accept a hypergraph file, a state dump (JSON), or one of
the builtins ``w:N``, ``plus:N``, ``prop2:N``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from hyperstate import atlas, hypercore, lme, qstate, reduct
from hyperstate.errors import HyperstateError
from hyperstate.hypercore import (
    BooleanFunction,
    Hypergraph,
    PhaseFunction,
    WeightedHypergraph,
)

_BUILTIN = re.compile(r"^(w|plus|prop2):(\d+)$")


def _load_source(spec: str):
    """Return ``(state, phase_function_or_None, label)``."""
    m = _BUILTIN.match(spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "w":
            return qstate.w_state(n), None, spec
        if kind == "plus":
            return qstate.plus_state(n), PhaseFunction(n, np.zeros(1 << n, dtype=np.int64)), spec
        s = qstate.prop2_state(n)
        values = np.zeros(1 << n)
        values[0] = s.meta["alpha"]
        return s, PhaseFunction(n, values), spec
    path = Path(spec)
    if not path.is_file():
        raise HyperstateError(f"no such file or builtin: {spec}")
    text = path.read_text()
    if text.lstrip().startswith("{"):
        record = json.loads(text)
        if "amps" in record:
            return qstate.StateVector.from_dump(record), None, spec
        f = _read_function(record)
        return qstate.phase_state(f), f, spec
    g = hypercore.parse_hypergraph_text(text)
    if isinstance(g, Hypergraph):
        g = g.to_weighted()
    f = hypercore.zeta_transform(g)
    return qstate.phase_state(f), f, spec


def _read_function(record: dict) -> PhaseFunction:
    kind = record.get("kind", "phase")
    n = int(record["n"])
    if kind == "boolean":
        b = BooleanFunction(n, record["table"])
        return PhaseFunction(n, b.table.astype(np.int64))
    if kind == "phase":
        return PhaseFunction(n, np.asarray(record["values"], dtype=np.float64))
    raise HyperstateError(f"unknown function kind {kind!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_build(args) -> int:
    text = Path(args.hgfile).read_text()
    g = hypercore.parse_hypergraph_text(text)
    if isinstance(g, Hypergraph):
        s = qstate.hypergraph_state(g)
    else:
        s = qstate.weighted_hypergraph_state(g)
    _emit(s.dumps() + "\n", args.out)
    return 0


def cmd_invariants(args) -> int:
    s, f, _ = _load_source(args.state)
    report = reduct.invariant_report(s, f)
    report["tolerances"] = {"fingerprint": reduct.FINGERPRINT_TOL}
    _emit(_json(report), args.out)
    return 0


def cmd_lme(args) -> int:
    s, _, _ = _load_source(args.state)
    tol = args.tol if args.tol is not None else lme.CERT_TOL
    verdict = lme.lme_decide(s, resolution=args.resolution, tol=tol)
    out = verdict.to_json()
    out["tolerances"] = {"certificate": tol, "modulus": lme.MODULUS_TOL, "gap": lme.GAP_TOL}
    _emit(_json(out), args.out)
    return 0


def compare_states(a: qstate.StateVector, b: qstate.StateVector, resolution: int = 16, tol: float = lme.CERT_TOL) -> dict:
    """Screen two states for LU inequivalence.

    ``distinguished`` means some LU invariant differs; ``inconclusive``
    means every invariant checked agrees (which does not prove equivalence).
    """
    reasons = []
    if a.n != b.n:
        return {"result": "distinguished", "reasons": [f"qubit counts differ ({a.n} vs {b.n})"]}
    fa, fb = reduct.lu_fingerprint(a), reduct.lu_fingerprint(b)
    det_equal = [
        l for l in range(1, a.n + 1)
        if abs(reduct.det_invariant(reduct.reduced_single(a, l)) - reduct.det_invariant(reduct.reduced_single(b, l))) <= reduct.FINGERPRINT_TOL
    ]
    if not fa.matches(fb):
        differing = [l for l, (x, y) in enumerate(zip(fa.per_qubit, fb.per_qubit), start=1) if not x.close(y)]
        reasons.append({"route": "fingerprint", "differing_qubits": differing})
        if 1 in det_equal:
            reasons.append({"route": "det", "note": "qubit-1 determinant alone is insufficient: equal on qubit 1",
                            "det_equal_qubits": det_equal})
    va = lme.lme_decide(a, resolution=resolution, tol=tol).verdict
    vb = lme.lme_decide(b, resolution=resolution, tol=tol).verdict
    if {va, vb} == {"LME", "NotLME"}:
        reasons.append({"route": "lme", "verdicts": [va, vb],
                        "note": "LME is invariant under local unitaries"})
    return {
        "result": "distinguished" if reasons else "inconclusive",
        "reasons": reasons,
        "verdicts": [va, vb],
        "fingerprints": [fa.digest(), fb.digest()],
    }


def cmd_compare(args) -> int:
    a, _, _ = _load_source(args.a)
    b, _, _ = _load_source(args.b)
    res = compare_states(a, b, resolution=args.resolution,
                         tol=args.tol if args.tol is not None else lme.CERT_TOL)
    _emit(_json(res), args.out)
    return 0


def cmd_encode(args) -> int:
    path = Path(args.input)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        record = json.loads(text)
        if record.get("kind") == "boolean":
            g = hypercore.hypergraph_from_boolean(BooleanFunction(int(record["n"]), record["table"]))
            _emit(hypercore.format_hypergraph(g), args.out)
        else:
            w = hypercore.mobius_transform(_read_function(record))
            _emit(hypercore.format_hypergraph(w), args.out)
        return 0
    g = hypercore.parse_hypergraph_text(text)
    if isinstance(g, Hypergraph) and args.to == "boolean":
        b = hypercore.boolean_from_hypergraph(g)
        _emit(json.dumps({"kind": "boolean", "n": g.n, "table": [int(v) for v in b.table]}) + "\n", args.out)
        return 0
    w = g if isinstance(g, WeightedHypergraph) else g.to_weighted()
    f = hypercore.zeta_transform(w)
    vals = [float(v) for v in f.values]
    _emit(json.dumps({"kind": "phase", "n": w.n, "values": vals}) + "\n", args.out)
    return 0


def cmd_atlas(args) -> int:
    n = args.n
    entries = atlas.build_atlas(n, allow_large=args.allow_large)
    reports = {"n": n, "entries": len(entries), "classes": len(atlas.classify(entries))}
    if 2 <= n <= atlas.MAX_ATLAS_QUBITS:
        reports["prop2"] = atlas.prop2_separation_report(n, entries)
    if 3 <= n <= atlas.MAX_ATLAS_QUBITS:
        reports["prop4"] = atlas.prop4_separation_report(n, entries)
    if args.format == "csv" or args.out:
        _emit(atlas.atlas_csv(entries), args.out)
    if args.report:
        Path(args.report).write_text(_json(reports))
    if args.out or args.format == "json":
        sys.stdout.write(_json(reports))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="certificate tolerance")
    common.add_argument("--max-qubits", type=int, default=None, help="capacity guard (env HYPERSTATE_MAX_QUBITS)")
    common.add_argument("--resolution", type=int, default=32, help="angle-search grid per axis")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    p = argparse.ArgumentParser(prog="hyperstate", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build", parents=[common], help="hypergraph file -> state dump")
    s.add_argument("hgfile")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("invariants", parents=[common], help="single-qubit invariant report")
    s.add_argument("state")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("lme", parents=[common], help="decide local maximal entangleability")
    s.add_argument("state")
    s.set_defaults(func=cmd_lme)

    s = sub.add_parser("compare", parents=[common], help="screen two states for LU inequivalence")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("encode", parents=[common], help="phase/boolean function <-> hypergraph file")
    s.add_argument("input")
    s.add_argument("--to", choices=["phase", "boolean"], default="phase",
                   help="target when the input is a hypergraph file")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("atlas", parents=[common], help="enumerate all hypergraph states for small n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--report", default=None, help="write the JSON reports here")
    s.add_argument("--allow-large", action="store_true", help="lift the n <= 4 guard")
    s.set_defaults(func=cmd_atlas)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 1
    if args.max_qubits is not None:
        qstate.set_max_qubits(args.max_qubits)
    try:
        return args.func(args)
    except (HyperstateError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    finally:
        if args.max_qubits is not None:
            qstate.set_max_qubits(None)


if __name__ == "__main__":
    sys.exit(main())
