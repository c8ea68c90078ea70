"""Command line front end: `parorbit <subcommand> ...`.

Exit codes: 0 on success, 1 on a domain error (message printed verbatim), 2 on
a usage error.  `--json` output is canonical (sorted keys, fixed indentation)
so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from .exact import QQ, GF, ExactMatrix, FieldTag, Subspace


class UsageError(Exception):
    pass


def _bv(s: str):
    from .parabolic import BlockVector

    try:
        return BlockVector.parse(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _field(q: int | None) -> FieldTag:
    return QQ if q is None else GF(q)


def _scalar(F: FieldTag, s) -> object:
    return F(Fraction(str(s)))


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, human-readable text)


def cmd_classify(a):
    from .classifier import classify_P_on_Np

    v = classify_P_on_Np(a.bv)
    payload = {"bv": list(a.bv.blocks), **v.to_json()}
    lines = [f"{a.bv}: {v.verdict}"]
    for step in v.witness.get("chain", []):
        lines.append("  " + ", ".join(f"{k}={step[k]}" for k in sorted(step)))
    return payload, "\n".join(lines)


def cmd_levi_classify(a):
    from .classifier import classify_levi

    v = classify_levi(a.bv, a.target)
    return {"bv": list(a.bv.blocks), "target": a.target, **v.to_json()}, f"{a.bv} ({a.target}): {v.verdict}"


def cmd_orbits(a):
    from .oracle import DEFAULT_BUDGET, enumerate_orbits

    if a.q is None:
        raise UsageError("orbits needs --q")
    tab = enumerate_orbits(a.bv, a.q, a.target, a.acting, a.x, a.budget or DEFAULT_BUDGET, a.threads)
    payload = tab.to_json()
    if a.reps_out:
        with open(a.reps_out, "w") as fh:
            fh.write(_dump([r.to_json() for r in tab.representatives]) + "\n")
    return payload, f"{a.bv} over GF({a.q}), {a.acting} on {a.target}: {tab.orbit_count} orbits"


def _pair_from_json(obj) -> tuple:
    from .young import LabeledYoungDiagram, diagram_from_pair

    if "lambda" in obj:
        return LabeledYoungDiagram.from_json(obj)
    if "bv" in obj:
        l, rest = obj["bv"]
        N = ExactMatrix.from_json(obj["N"])
        U = Subspace(N.field, l + rest, ExactMatrix.identity(N.field, l + rest).to_rows()[:l])
        return diagram_from_pair(U, l + rest, N)
    f = ExactMatrix.from_json(obj["f"])
    U = ExactMatrix.from_json(obj["U"])
    return diagram_from_pair(Subspace(f.field, f.rows, U.T.to_rows()), f.rows, f)


def cmd_normalize(a):
    from .young import check_reduced, diagram_from_pair, random_pair, reduce_with_log, LabeledYoungDiagram

    if a.input:
        d = _pair_from_json(_read_json(a.input))
    elif a.random_k:
        F = _field(a.q)
        U, f = random_pair(a.random_k, F, random.Random(a.seed))
        d = diagram_from_pair(U, a.random_k, f)
    else:
        raise UsageError("normalize needs --input or --random-k")
    log = reduce_with_log(d)
    ok, bad = check_reduced(LabeledYoungDiagram.from_json(log["output"]))
    log["reduced"] = ok
    log["violated_clauses"] = bad
    text = (f"lambda={list(d.lam)} mu={list(d.mu)} case {log['case']}\n"
            f"moves: {' '.join(m['label'] for m in log['moves']) or '(none)'}\n"
            f"{LabeledYoungDiagram.from_json(log['output']).pretty()}\nreduced: {ok}")
    return log, text


def cmd_family(a):
    from .families import FamilySpec, build_family_member, certify_family

    F = _field(a.q)
    spec = FamilySpec(a.name, a.k, a.n, a.variant)
    payload = {"family": spec.to_json(), "field": str(F)}
    lines = [f"{a.name} bv={list(spec.bv)} over {F}"]
    if a.t is not None:
        t = _scalar(F, a.t)
        m = build_family_member(spec, t, F)
        if isinstance(m, tuple):
            payload["member"] = {"t": F.scalar_to_json(t), "x": m[0].to_json(), "y": m[1].to_json()}
        else:
            payload["member"] = {"t": F.scalar_to_json(t), "matrix": m.to_json()}
        lines.append(f"member at t={F.scalar_to_json(t)} built")
    if a.certify:
        if a.sample:
            sample = [_scalar(F, s) for s in a.sample.split(",")]
        else:
            base = _scalar(F, a.t if a.t is not None else 1)
            sample = [F(base + i) for i in range(3)]
        cert = certify_family(spec, sample, F, a.threads)
        payload["certificate"] = cert.to_json()
        lines.append("certificate: " + ", ".join(f"{k}={'pass' if v['pass'] else 'FAIL'}"
                                                 for k, v in cert.checks.items()))
        payload["status"] = "ok" if cert.passed else "certificate_failed"
    return payload, "\n".join(lines)


def cmd_distinguished(a):
    from .families import distinguished_census, is_distinguished

    if a.census:
        c = distinguished_census(a.bv, a.q or 2, a.budget)
        return c.to_json(), f"{a.bv}: {c.count} distinguished of {c.orbit_count} orbits over GF({c.q})"
    if not a.input:
        raise UsageError("distinguished needs --input or --census")
    x = ExactMatrix.from_json(_read_json(a.input))
    r = is_distinguished(a.bv, x)
    return {"bv": list(a.bv.blocks), **r.to_json()}, f"distinguished: {r.distinguished} ({r.method})"


def cmd_rep(a):
    from .quiver import QuiverRep, is_isomorphic, matrix_to_rep, rep_to_matrix

    if a.from_matrix:
        if a.bv is None:
            raise UsageError("rep --from-matrix needs --bv")
        N = ExactMatrix.from_json(_read_json(a.from_matrix))
        r = matrix_to_rep(a.bv, N, a.x)
        payload = r.to_json()
        text = f"Q_{a.bv.p} representation of dimension {list(r.dim_vector)}"
        if a.assert_roundtrip:
            shape, back = rep_to_matrix(r)
            ok = is_isomorphic(matrix_to_rep(shape, back, a.x), r)
            if not ok:
                raise AssertionError("round trip is not P-conjugate to the input")
            text += "\nround trip: P-conjugate"
        return payload, text
    if a.to_matrix:
        r = QuiverRep.from_json(_read_json(a.to_matrix))
        shape, N = rep_to_matrix(r)
        return {"bv": list(shape.bv.blocks), "matrix": N.to_json()}, f"bv={shape.bv}\n{N.to_rows()}"
    raise UsageError("rep needs --from-matrix or --to-matrix")


def cmd_delta(a):
    from .quiver import QuiverRep, delta_filtration, phi_quotient

    if not a.input:
        raise UsageError("delta needs --input")
    r = QuiverRep.from_json(_read_json(a.input))
    filt = delta_filtration(r)
    phi = phi_quotient(r)
    payload = {"filtration": [list(p) for p in filt], "phi": phi.to_json()}
    return payload, "Delta-filtration: " + " ".join(f"D{p}" for p in filt)


COMMANDS = {
    "classify": cmd_classify,
    "levi-classify": cmd_levi_classify,
    "orbits": cmd_orbits,
    "normalize": cmd_normalize,
    "family": cmd_family,
    "distinguished": cmd_distinguished,
    "rep": cmd_rep,
    "delta": cmd_delta,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--q", type=int, default=None, help="prime field size (default: rationals)")
    common.add_argument("--x", type=int, default=None, help="nilpotency bound")

    p = argparse.ArgumentParser(prog="parorbit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common])
    s.add_argument("--bv", type=_bv, required=True)

    s = sub.add_parser("levi-classify", parents=[common])
    s.add_argument("--bv", type=_bv, required=True)
    s.add_argument("--target", choices=["nilradical", "cone"], default="nilradical")

    s = sub.add_parser("orbits", parents=[common])
    s.add_argument("--bv", type=_bv, required=True)
    s.add_argument("--target", choices=["cone", "cone_x", "nilradical"], default="cone")
    s.add_argument("--acting", choices=["P", "L"], default="P")
    s.add_argument("--reps-out", default=None)

    s = sub.add_parser("normalize", parents=[common])
    s.add_argument("--input", default=None, help="pair or diagram JSON ('-' for stdin)")
    s.add_argument("--random-k", type=int, default=None, help="normalize a random pair on K^k")

    s = sub.add_parser("family", parents=[common])
    s.add_argument("--name", required=True)
    s.add_argument("--t", default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--variant", choices=["corrected", "printed"], default="corrected")
    s.add_argument("--certify", action="store_true")
    s.add_argument("--sample", default=None, help="comma-separated parameter values")

    s = sub.add_parser("distinguished", parents=[common])
    s.add_argument("--bv", type=_bv, required=True)
    s.add_argument("--input", default=None)
    s.add_argument("--census", action="store_true")

    s = sub.add_parser("rep", parents=[common])
    s.add_argument("--bv", type=_bv, default=None)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--from-matrix", default=None)
    g.add_argument("--to-matrix", default=None)
    s.add_argument("--assert", dest="assert_roundtrip", action="store_true",
                   help="check that matrix -> rep -> matrix is P-conjugate to the input")

    s = sub.add_parser("delta", parents=[common])
    s.add_argument("--input", default=None)
    return p


def run(argv=None) -> tuple[int, dict]:
    """Parse, dispatch and print; returns (exit code, command result)."""
    parser = build_parser()
    a = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        payload, text = COMMANDS[a.command](a)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"parorbit {a.command}: error: {exc}", file=sys.stderr)
        return 2, {"command": a.command, "status": "usage_error", "payload": None}
    except Exception as exc:  # domain errors surface verbatim
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1, {"command": a.command, "status": "error", "payload": {"error": type(exc).__name__,
                                                                         "message": str(exc)}}
    status = payload.get("status", "ok") if isinstance(payload, dict) else "ok"
    result = {"command": a.command, "status": status, "payload": payload}
    if a.json:
        print(_dump(payload))
    else:
        print(text)
        print(f"({time.perf_counter() - start:.2f}s)")
    return (0 if status == "ok" else 1), result


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
