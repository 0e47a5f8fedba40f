"""Command-line entry point: ``redux normalize | reduce | verify | oracle | selftest``.

Reports go to stdout as JSON; a one-line human summary goes to stderr.
Exit codes: 0 success / verdict true, 1 verdict false, 2 usage or input
error, 3 enumeration guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, biquadratic, hyperbolic, polyproj, sparseshift
from . import serialize as ser
from . import verifiers as V
from .field import QQ
from .normalizer import normalize
from .poly import LayoutError, evaluate

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


class Run:
    """Collects inputs, summary and verdicts for the JSON report."""

    def __init__(self, argv, args):
        self.argv = list(argv)
        self.seed = getattr(args, "seed", None)
        self.inputs: dict[str, str] = {}
        self.summary: dict = {}
        self.verdicts: list = []
        self.t0 = time.perf_counter()

    def read_json(self, path):
        if path is None:
            raise InputError("missing input file")
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
        self.inputs[str(path)] = ser.digest(data)
        try:
            return json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON in {path}: {exc}") from exc

    def report(self) -> dict:
        return {
            "command": self.argv,
            "version": __version__,
            "seed": self.seed,
            "inputs": self.inputs,
            "summary": self.summary,
            "verdicts": self.verdicts,
            "elapsed": round(time.perf_counter() - self.t0, 6),
        }


def _write(path, obj):
    Path(path).write_text(ser.dumps(obj) + "\n")


def _cfg(args) -> V.SampleConfig:
    return V.SampleConfig(args.samples, args.seed, args.bound)


# ---------------------------------------------------------------------------
# artifacts


def _artifact_doc(kind: str, source: dict, **fields) -> dict:
    return {"kind": kind, "version": __version__, "source": source, **fields}


def _load_artifact(run: Run, path, kind: str):
    doc = run.read_json(path)
    if doc.get("kind") != kind:
        raise InputError(f"{path} holds a {doc.get('kind')!r} artifact, expected {kind!r}")
    built = _rebuild(doc)
    return doc, built


def _rebuild(doc: dict):
    """Rebuild from the embedded source and check the stored polynomial matches."""
    kind = doc["kind"]
    if kind == "sparseshift":
        art = sparseshift.build(ser.system_from_json(doc["source"]))
        stored = ser.poly_from_json(doc["QS"])
        ok = stored == art.QS
    elif kind == "polyproj":
        art = polyproj.build(ser.system_from_json(doc["source"]))
        ok = ser.poly_from_json(doc["f"]) == art.f and ser.poly_from_json(doc["g"]) == art.g
    elif kind == "biquadratic":
        art = biquadratic.build(ser.system_from_json(doc["source"]), int(doc["m"]))
        ok = ser.poly_from_json(doc["Q"]) == art.Q
    elif kind == "hyperbolicity":
        art = hyperbolic.build_hyperbolicity(ser.poly_from_json(doc["source"]))
        ok = ser.poly_from_json(doc["p"]) == art.p
    elif kind == "stability":
        art = hyperbolic.build_stability(hyperbolic.build_hyperbolicity(ser.poly_from_json(doc["source"])))
        ok = ser.poly_from_json(doc["ptilde"]) == art.ptilde
    elif kind == "convexity":
        b = ser.poly_from_json(doc["source"])
        f = hyperbolic.build_convexity(b, doc["parts"][0], doc["parts"][1])
        art, ok = f, ser.poly_from_json(doc["f"]) == f
    else:
        raise InputError(f"unknown artifact kind {kind!r}")
    if not ok:
        raise InputError(f"{kind} artifact does not match a rebuild from its source")
    return art


# ---------------------------------------------------------------------------
# normalize


def cmd_normalize(run: Run, args) -> int:
    system = ser.system_from_json(run.read_json(args.inp))
    out, trace = normalize(system)
    run.summary = {"vars_in": len(system.layout), "vars_out": len(out.layout),
                   "polys_in": len(system.polys), "polys_out": len(out.polys), "degree_out": out.degree()}
    doc = ser.system_to_json(out)
    doc["trace"] = trace.to_json(out.field)
    if args.out:
        _write(args.out, doc)
    else:
        run.summary["system"] = doc
    return EXIT_OK


# ---------------------------------------------------------------------------
# reduce


def _solution(run: Run, args, fld):
    if not args.solution:
        return None
    return ser.vector_from_json(fld, run.read_json(args.solution))


def cmd_reduce(run: Run, args) -> int:
    target = args.target
    doc = None
    if target == "hn-to-sparseshift":
        system = ser.system_from_json(run.read_json(args.inp))
        art = sparseshift.build(system)
        doc = _artifact_doc("sparseshift", ser.system_to_json(system), params=art.params,
                            QS=ser.poly_to_json(art.QS), PS=ser.poly_to_json(art.PS),
                            gammas=ser.vector_to_json(system.field, art.gammas),
                            constraints=[ser.terms_to_json(L) for L in art.constraints])
        run.summary = {**art.params, "vars": len(art.layout), "monomials": len(art.QS)}
        sol = _solution(run, args, system.field)
        if sol is not None:
            shift = sparseshift.forward_witness(art, sol)
            before, after = sparseshift.count_change(art, shift)
            run.verdicts.append({"witness": "shift", "before": before, "after": after})
            if args.shift_out:
                _write(args.shift_out, ser.vector_to_json(system.field, shift))
    elif target == "hn-to-polyproj":
        system = ser.system_from_json(run.read_json(args.inp))
        art = polyproj.build(system)
        doc = _artifact_doc("polyproj", ser.system_to_json(system), params=art.params,
                            f=ser.poly_to_json(art.f), g=ser.poly_to_json(art.g))
        run.summary = {**art.params, "vars": len(art.layout), "deg_f": art.f.degree(), "deg_g": art.g.degree()}
        sol = _solution(run, args, system.field)
        if sol is not None:
            A, b = polyproj.forward_witness(art, sol)
            run.verdicts.append({"witness": "projection", "verified": polyproj.verify_projection(art, A, b)})
            if args.A_out:
                _write(args.A_out, ser.matrix_to_json(system.field, A))
            if args.b_out:
                _write(args.b_out, ser.vector_to_json(system.field, b))
    elif target == "quad-to-biquadratic":
        system = ser.system_from_json(run.read_json(args.inp))
        art = biquadratic.build(system, args.m)
        doc = _artifact_doc("biquadratic", ser.system_to_json(system), m=args.m, params=art.params,
                            partition=[list(p) for p in art.partition], Q=ser.poly_to_json(art.Q))
        run.summary = art.params
        sol = _solution(run, args, QQ)
        if sol is not None:
            point = biquadratic.forward_witness(art, sol)
            vec = biquadratic.point_vector(art, point)
            run.verdicts.append({"witness": "point", "Q": str(evaluate(art.Q, vec))})
            if args.point_out:
                _write(args.point_out, ser.rationals_to_json(vec))
    elif target == "biquadratic-to-hyperbolic":
        Q = ser.poly_from_json(run.read_json(args.inp))
        art = hyperbolic.build_hyperbolicity(Q)
        doc = _artifact_doc("hyperbolicity", ser.poly_to_json(Q), beta=str(art.beta), C=str(art.C),
                            e=ser.rationals_to_json(art.e), p=ser.poly_to_json(art.p))
        run.summary = art.params
    elif target == "hyperbolic-to-stable":
        src = run.read_json(args.inp)
        if src.get("kind") == "hyperbolicity":
            hyp = _rebuild(src)
            Q = hyp.sourceQ
        else:
            Q = ser.poly_from_json(src)
            hyp = hyperbolic.build_hyperbolicity(Q)
        st = hyperbolic.build_stability(hyp)
        doc = _artifact_doc("stability", ser.poly_to_json(Q), eps=str(st.eps),
                            M=[ser.rationals_to_json(r) for r in st.M], ptilde=ser.poly_to_json(st.ptilde))
        run.summary = st.params
    elif target == "biquadratic-to-convexity":
        b = ser.poly_from_json(run.read_json(args.inp))
        if args.parts:
            px, py = (s.split(",") for s in args.parts.split("|"))
        else:
            px, py = hyperbolic._default_parts(b)
        f = hyperbolic.build_convexity(b, px, py)
        gamma = hyperbolic.convexity_gamma(b, px, py)
        doc = _artifact_doc("convexity", ser.poly_to_json(b), parts=[list(px), list(py)],
                            gamma=str(gamma), f=ser.poly_to_json(f))
        run.summary = {"n": len(px), "gamma": str(gamma), "monomials": len(f)}
    if args.out:
        _write(args.out, doc)
    else:
        run.summary["artifact"] = doc
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _points(run: Run, path) -> list:
    if not path:
        return []
    return [ser.rationals_from_json(p) if isinstance(p, list) else p for p in run.read_json(path)]


def _verdict_exit(run: Run, v: V.Verdict) -> int:
    run.verdicts.append(v.to_json())
    return EXIT_OK if v.ok else EXIT_FALSE


def cmd_verify(run: Run, args) -> int:
    what = args.what
    if what == "sparseshift":
        _, art = _load_artifact(run, args.artifact, "sparseshift")
        shift = ser.vector_from_json(art.QS.field, run.read_json(args.shift))
        if len(shift) != len(art.layout):
            raise InputError(f"shift has length {len(shift)}, artifact layout has {len(art.layout)}")
        before, after = sparseshift.count_change(art, shift)
        verdict = {"ok": after < before, "before": before, "after": after,
                   "parts": sparseshift.monomial_delta_parts(art, shift).to_json()}
        if after < before:
            sol = sparseshift.extract_solution(art, shift)
            verdict["solution"] = {k: art.QS.field.format(v) for k, v in sol.items()}
        else:
            verdict["violatedConstraints"] = sparseshift.violated_constraints(art, shift)[:20]
        run.verdicts.append(verdict)
        return EXIT_OK if verdict["ok"] else EXIT_FALSE
    if what == "polyproj":
        _, art = _load_artifact(run, args.artifact, "polyproj")
        fld = art.f.field
        A = ser.matrix_from_json(fld, run.read_json(args.A))
        b = ser.vector_from_json(fld, run.read_json(args.b))
        ok = polyproj.verify_projection(art, A, b)
        verdict = {"ok": ok}
        if ok:
            verdict["solution"] = ser.vector_to_json(fld, polyproj.extract_solution(art, A, b))
        run.verdicts.append(verdict)
        return EXIT_OK if ok else EXIT_FALSE
    if what == "hyperbolicity":
        _, art = _load_artifact(run, args.artifact, "hyperbolicity")
        run.summary = art.params
        v = V.sample_hyperbolicity(art.p, art.e, _cfg(args), _points(run, args.directed), args.threads)
        return _verdict_exit(run, v)
    if what == "stability":
        _, st = _load_artifact(run, args.artifact, "stability")
        run.summary = st.params
        directed = [(ser.rationals_from_json(d["a"]), ser.rationals_from_json(d["b"]))
                    for d in (run.read_json(args.directed) if args.directed else [])]
        v = V.sample_real_stability(st.ptilde, _cfg(args), directed, args.threads)
        return _verdict_exit(run, v)
    if what == "convexity":
        _, f = _load_artifact(run, args.artifact, "convexity")
        v = V.sample_convexity(f, _cfg(args), (), args.threads)
        return _verdict_exit(run, v)
    if what == "chain":
        if args.ys or args.zs:
            ys, zs = _chain_values(run, args.ys), _chain_values(run, args.zs)
        elif args.witness == "canonical":
            ys, zs = biquadratic.canonical_chain(args.m)
        else:
            raise InputError("give --ys/--zs files or --witness canonical")
        res = biquadratic.check_chain(ys, zs)
        run.summary = {"m": len(ys) - 1}
        run.verdicts.append({"ok": res.consistent, **res.to_json()})
        ok = res.consistent
        if args.witness == "canonical":
            ok = ok and res.hypothesis_holds and res.side_conditions and res.bound_holds
        if args.samples_given:
            v = V.sample_chain(len(ys) - 1, _cfg(args), args.threads)
            ok = ok and v.ok
            run.verdicts.append(v.to_json())
        return EXIT_OK if ok else EXIT_FALSE
    raise InputError(f"unknown verify target {what!r}")


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(run: Run, args) -> int:
    what = args.what
    if what == "hn":
        system = ser.system_from_json(run.read_json(args.inp))
        sol = V.brute_force_hn(system, args.threads)
        run.verdicts.append({"ok": sol is not None,
                             "solution": "none" if sol is None else ser.vector_to_json(system.field, sol)})
        return EXIT_OK if sol is not None else EXIT_FALSE
    if what == "sturm":
        if args.coeffs:
            coeffs = [Fraction(c) for c in args.coeffs.split(",")]
        else:
            coeffs = V.as_univariate(ser.poly_from_json(run.read_json(args.inp)))
        rooted = V.sturm_real_rooted(coeffs)
        run.verdicts.append({"ok": rooted, "realRooted": rooted, "degree": len(V._trim(list(coeffs))) - 1,
                             "distinctRealRoots": V.count_real_roots(coeffs)})
        return EXIT_OK if rooted else EXIT_FALSE
    p = ser.poly_from_json(run.read_json(args.inp))
    if what == "sparseshift":
        shift = V.brute_force_sparseshift(p, args.threads)
        run.verdicts.append({"ok": shift is not None,
                             "shift": "none" if shift is None else ser.vector_to_json(p.field, shift)})
        return EXIT_OK if shift is not None else EXIT_FALSE
    cfg = _cfg(args)
    if what == "nonneg":
        return _verdict_exit(run, V.sample_nonneg(p, cfg, args.region, (), args.threads))
    if what == "stability":
        return _verdict_exit(run, V.sample_real_stability(p, cfg, (), args.threads))
    if what == "hyperbolicity":
        e = ([Fraction(c) for c in args.e.split(",")] if args.e
             else [1] + [0] * (len(p.layout) - 1))
        return _verdict_exit(run, V.sample_hyperbolicity(p, e, cfg, (), args.threads))
    if what == "convexity":
        return _verdict_exit(run, V.sample_convexity(p, cfg, (), args.threads))
    raise InputError(f"unknown oracle {what!r}")


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(run: Run, args) -> int:
    from .acceptance import run_all

    numbers = [int(k) for k in args.only.split(",")] if args.only else None
    results = run_all(numbers, echo=lambda line: print(line, file=sys.stderr))
    run.verdicts = [r.to_json() for r in results]
    run.summary = {"passed": sum(r.passed for r in results), "total": len(results)}
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


# ---------------------------------------------------------------------------
# parser


def _sampling(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redux", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"redux {__version__}")
    parser.add_argument("--format", choices=("json", "pretty"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="degree <= 2 with at most one constant term")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")

    p = sub.add_parser("reduce", help="build a reduction artifact")
    p.add_argument("target", choices=("hn-to-sparseshift", "hn-to-polyproj", "quad-to-biquadratic",
                                      "biquadratic-to-hyperbolic", "hyperbolic-to-stable",
                                      "biquadratic-to-convexity"))
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--m", type=int, default=6, help="chain length (quad-to-biquadratic)")
    p.add_argument("--parts", help="convexity partition as 'X1,X2|Y1,Y2'")
    p.add_argument("--solution", help="known root; also emit the forward witness")
    p.add_argument("--shift-out", dest="shift_out")
    p.add_argument("--A-out", dest="A_out")
    p.add_argument("--b-out", dest="b_out")
    p.add_argument("--point-out", dest="point_out")

    for name in ("verify", "check"):
        p = sub.add_parser(name, help="check a witness or sample an artifact's property")
        p.add_argument("what", choices=("sparseshift", "polyproj", "hyperbolicity", "stability",
                                        "convexity", "chain"))
        p.add_argument("--artifact")
        p.add_argument("--shift")
        p.add_argument("--A")
        p.add_argument("--b")
        p.add_argument("--directed", help="JSON list of directed candidates tried first")
        p.add_argument("--m", type=int, default=4)
        p.add_argument("--witness", choices=("canonical",))
        p.add_argument("--ys")
        p.add_argument("--zs")
        _sampling(p)

    p = sub.add_parser("oracle", help="independent ground-truth checks")
    p.add_argument("what", choices=("hn", "sparseshift", "sturm", "stability", "hyperbolicity",
                                    "convexity", "nonneg"))
    p.add_argument("--in", dest="inp")
    p.add_argument("--coeffs", help="sturm: comma-separated coefficients, constant term first")
    p.add_argument("--e", help="hyperbolicity direction, comma-separated")
    p.add_argument("--region", choices=("all", "positiveOrthant"), default="all")
    _sampling(p)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    _add_format(parser)
    return parser


def _add_format(parser: argparse.ArgumentParser):
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.add_argument("--format", choices=("json", "pretty"), default=argparse.SUPPRESS)


def _chain_values(run, text):
    """A file of rationals, or an inline comma-separated list such as ``1/4,1/16``."""
    if text is None:
        raise InputError("--ys and --zs must be given together")
    if Path(text).exists():
        return _points(run, text)
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except ValueError:
        raise InputError(f"cannot read {text}: not a file or a comma-separated list of rationals") from None


COMMANDS = {"normalize": cmd_normalize, "reduce": cmd_reduce, "verify": cmd_verify,
            "check": cmd_verify, "oracle": cmd_oracle, "selftest": cmd_selftest}


def _pretty(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        return "\n".join(f"{pad}{k}:" + ("\n" + _pretty(v, indent + 1) if isinstance(v, (dict, list)) and v
                                           else f" {v}") for k, v in obj.items())
    if isinstance(obj, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in obj)
    return f"{pad}{obj}"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if hasattr(args, "samples"):
        args.samples_given = args.samples is not None
        if args.samples is None:
            args.samples = 1000
    run = Run(argv, args)
    try:
        code = COMMANDS[args.command](run, args)
    except V.EnumerationTooLarge as exc:
        print(f"redux: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, LayoutError, ValueError, KeyError, sparseshift.Refusal,
            polyproj.PreconditionError) as exc:
        print(f"redux: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except sparseshift.InvariantViolation as exc:
        print(f"redux: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run.report()
    if args.format == "pretty":
        print(_pretty(report))
    else:
        print(ser.dumps(report))
    status = {EXIT_OK: "ok", EXIT_FALSE: "verdict false"}[code]
    print(f"redux {args.command}: {status} ({report['elapsed']:.2f}s)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
