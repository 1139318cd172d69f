"""Command-line front end: one verb per operation, JSON in and JSON out.

Documents are read from ``--input FILE`` (or standard input when a verb needs
one and no file is given) and written to standard output with sorted keys, so
identical requests give byte-identical answers.  Domain errors exit with

    2 parse-error   3 precondition   4 not-invertible   5 cap-exceeded

and a JSON error object on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable

from . import enveloping as env_mod
from . import lie3, matrices, roby, scalars
from .errors import ParseError, PreconditionError, TernaryError

# ---------------------------------------------------------------------------
# input helpers


def _load(args) -> dict:
    try:
        if args.input and args.input != "-":
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    return doc


def _maybe_load(args) -> dict:
    """The input document, or {} when none was given on a terminal."""
    if args.input:
        return _load(args)
    if sys.stdin is None or sys.stdin.isatty():
        return {}
    text = sys.stdin.read()
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    return doc


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ParseError(f"bad {what}: {text!r}") from exc


def _range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise ParseError(f"bad range {text!r}") from exc
    return _ints(text, "k list")


def _field(doc: dict, key: str):
    if key not in doc:
        raise ParseError(f"input document lacks {key!r}")
    return doc[key]


def _algebra(args, doc: dict) -> lie3.LieOrder3Algebra:
    if "algebra" in doc:
        return lie3.LieOrder3Algebra.from_json(doc["algebra"])
    if args.algebra:
        return _algebra_from_descriptor(args.algebra)
    if "n0" in doc and "n1" in doc:
        return lie3.LieOrder3Algebra.from_json(doc)
    raise ParseError("no algebra given (use an 'algebra' field or --algebra)")


def _algebra_from_descriptor(text: str) -> lie3.LieOrder3Algebra:
    kind, _, params = text.partition(":")
    nums = _ints(params, "algebra parameters")
    if kind == "gl" and len(nums) == 3:
        return lie3.build_gl(*nums)[0]
    if kind == "gl-el" and len(nums) == 3:
        return lie3.build_gl_el(*nums)[0]
    if kind == "poincare" and len(nums) == 1:
        return lie3.build_poincare_cubic(nums[0])
    if kind == "trivial" and len(nums) == 2:
        return env_mod.trivial_algebra(*nums)
    raise ParseError(f"unknown algebra descriptor {text!r} (gl:m1,m2,m3 | gl-el:m1,m2,m3 | poincare:D | trivial:n0,n1)")


def _roby(doc, n: int | None = None) -> roby.RobyElement:
    if isinstance(doc, dict) and "n" not in doc and n is not None:
        doc = {"n": n, **doc}
    return roby.RobyElement.from_json(doc)


def _u(env: env_mod.EnvelopingAlgebra, doc) -> env_mod.UElement:
    if isinstance(doc, list):
        return env.normalize(doc)
    return env_mod.UElement.from_json(env, doc)


def _dual(doc) -> env_mod.DualMonomial:
    try:
        return env_mod.DualMonomial(tuple(int(a) for a in doc["alpha"]), tuple(int(t) for t in doc["theta"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed dual monomial: {exc}") from exc


def _graded(doc) -> matrices.GradedMatrix:
    return matrices.GradedMatrix.from_json(doc)


def _cap(args, default: int) -> int:
    return default if args.cap is None else args.cap


# ---------------------------------------------------------------------------
# verbs


def v_scalar(args):
    op = args.op
    if op == "qpow":
        if args.k is None:
            raise PreconditionError("qpow needs --k")
        try:
            k = int(args.k)
        except ValueError as exc:
            raise ParseError(f"bad exponent {args.k!r}") from exc
        return {"op": op, "k": k, "value": str(scalars.qpow(k))}
    if args.a is None:
        raise PreconditionError(f"{op} needs --a")
    a = scalars.parse_cyc(args.a)
    if op == "inv":
        if not a:
            raise PreconditionError("inverse of zero")
        return {"op": op, "a": str(a), "value": str(scalars.cyc_inv(a))}
    if args.b is None:
        raise PreconditionError(f"{op} needs --b")
    b = scalars.parse_cyc(args.b)
    value = scalars.cyc_add(a, b) if op == "add" else scalars.cyc_mul(a, b)
    return {"op": op, "a": str(a), "b": str(b), "value": str(value)}


def v_rise(args):
    word = _ints(args.word, "word")
    return {"word": word, "position": roby.has_rise(word)}


def v_reduce(args):
    if args.word is not None:
        word = _ints(args.word, "word")
        n = args.n or max(word, default=1)
        return roby.reduce(word, n).to_json()
    return _roby(_load(args), args.n).to_json()


def v_mul(args):
    doc = _load(args)
    a, b = _roby(_field(doc, "a"), doc.get("n")), _roby(_field(doc, "b"), doc.get("n"))
    return roby.lam_mul(a, b).to_json()


def v_grade(args):
    a = _roby(_load(args), args.n)
    return {
        "grades": sorted(roby.grade(a)),
        "components": {str(i): roby.homogeneous_component(a, i).to_json() for i in sorted(roby.grade(a))},
    }


def v_dims(args):
    ks = _range(args.k)
    return {"n": args.n, "k": ks, "dims": [roby.roby_dim(args.n, k) for k in ks]}


def v_basis(args):
    words = roby.enumerate_basis(args.n, args.k)
    return {"n": args.n, "k": args.k, "count": len(words), "words": [list(w) for w in words]}


def v_nilpotency(args):
    if args.word is not None:
        word = _ints(args.word, "word")
        a = roby.reduce(word, args.n or max(word, default=1))
    else:
        a = _roby(_load(args), args.n)
    cap = _cap(args, 8)
    return {"element": a.to_json(), "cap": cap, "order": roby.nilpotency_order(a, cap)}


def v_build(args):
    shape = _ints(args.shape, "shape") if args.shape else None
    if args.kind in ("gl", "gl-el"):
        if not shape or len(shape) != 3:
            raise PreconditionError("--shape m1,m2,m3 required")
        alg, rep = (lie3.build_gl if args.kind == "gl" else lie3.build_gl_el)(*shape)
        return {"algebra": alg.to_json(), "rep": rep.to_json()}
    if args.D is None:
        raise PreconditionError("--D required for poincare")
    if args.D < 2:
        raise PreconditionError("D must be >= 2")
    return {"algebra": lie3.build_poincare_cubic(args.D).to_json()}


def v_jacobi(args):
    return lie3.check_axioms(_algebra(args, _maybe_load(args))).to_json()


def v_rep_check(args):
    doc = _load(args)
    return lie3.check_representation(_algebra(args, doc), lie3.MatrixRep.from_json(_field(doc, "rep"))).to_json()


def v_grade_auto(args):
    doc = _load(args)
    A = _algebra(args, doc)
    try:
        element = {(int(e["sector"]), int(e["index"])): scalars.parse_cyc(str(e["coeff"])) for e in _field(doc, "element")}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed element: {exc}") from exc
    out = lie3.apply_grade_automorphism(A, element, int(doc.get("times", args.times)))
    return {"element": [{"sector": s, "index": i, "coeff": str(c)} for (s, i), c in sorted(out.items())]}


def _env(args, doc):
    return env_mod.EnvelopingAlgebra(_algebra(args, doc))


def v_u_normalize(args):
    doc = _load(args)
    return _env(args, doc).normalize(_field(doc, "word")).to_json()


def v_u_mul(args):
    doc = _load(args)
    E = _env(args, doc)
    return env_mod.u_mul(_u(E, _field(doc, "a")), _u(E, _field(doc, "b"))).to_json()


def v_coproduct(args):
    doc = _load(args)
    E = _env(args, doc)
    return env_mod.coproduct(_u(E, _field(doc, "u"))).to_json()


def v_antipode(args):
    doc = _load(args)
    E = _env(args, doc)
    return env_mod.antipode(_u(E, _field(doc, "u")), braided=args.braided).to_json()


def v_counit(args):
    doc = _load(args)
    E = _env(args, doc)
    return {"counit": str(env_mod.counit(_u(E, _field(doc, "u"))))}


def v_bracket_coproduct(args):
    doc = _maybe_load(args)
    return env_mod.check_bracket_coproduct(_algebra(args, doc), twist=not args.ungraded).to_json()


def v_exp(args):
    doc = _load(args)
    E = _env(args, doc)
    u = _u(E, _field(doc, "u"))
    cap = _cap(args, 3)
    return {"exp": env_mod.truncated_exp(u, cap).to_json(), "report": env_mod.group_like_report(u, cap).to_json()}


def v_dual_mul(args):
    doc = _load(args)
    if "algebra" in doc or args.algebra:
        A = _algebra(args, doc)
    else:
        u = _dual(_field(doc, "u"))
        A = env_mod.trivial_algebra(len(u.alpha), args.n1 or max(max(u.theta, default=1), max(_dual(doc["v"]).theta, default=1)))
    E = env_mod.EnvelopingAlgebra(A)
    cap = _cap(args, 3)
    out = env_mod.dual_multiply(E, _dual(_field(doc, "u")), _dual(_field(doc, "v")), cap)
    return {"cap": cap, "terms": [{**m.to_json(), "coeff": str(c)} for m, c in sorted(out.items())]}


def v_derive_theta(args):
    return env_mod.derive_theta_relations(args.n1, _cap(args, 3)).to_json()


def v_invert(args):
    doc = _load(args)
    A = matrices.LambdaMatrix.from_json(doc)
    cap = _cap(args, 3 * A.p * max(A.rows, 1))
    stats = matrices.InversionStats()
    B = matrices.invert_lambda0(A, cap, stats)
    return {"inverse": B.to_json(), "cap": cap, "stats": stats.to_json()}


def v_mat_mul(args):
    doc = _load(args)
    return matrices.mat_mul(_graded(_field(doc, "M")), _graded(_field(doc, "N"))).to_json()


def v_block_invert(args):
    M = _graded(_load(args))
    cap = _cap(args, matrices.default_cap(M.shape, M.p))
    stats = matrices.InversionStats()
    N = matrices.invert_block(M, cap, stats)
    return {
        "M": M.to_json(),
        "N": N.to_json(),
        "cap": cap,
        "MN_is_identity": (M @ N).is_identity(),
        "NM_is_identity": (N @ M).is_identity(),
        "stats": stats.to_json(),
    }


def v_glf_check(args):
    M = matrices.GradedMatrix.from_json(_load(args), validate=False)
    return matrices.is_glf_member(M, _cap(args, matrices.default_cap(M.shape, M.p))).to_json()


def v_mat_exp(args):
    return matrices.exp_nilpotent(_graded(_load(args)), _cap(args, 12)).to_json()


def v_group_element(args):
    cap = _cap(args, 12)
    if args.seed is not None:
        if not args.shape:
            raise PreconditionError("--shape is required with --seed")
        shape = _ints(args.shape, "shape")
        M, G0, Bs = matrices.random_group_element(shape, args.p, args.seed, factors=args.factors, cap=cap)
        return {"element": M.to_json(), "G0": G0.to_json(), "Bs": [B.to_json() for B in Bs], "seed": args.seed}
    doc = _load(args)
    G0 = _graded(_field(doc, "G0"))
    Bs = [_graded(b) for b in doc.get("Bs", [])]
    return {"element": matrices.group_element(G0, Bs, cap).to_json()}


def v_tangent(args):
    return matrices.infinitesimal_limit(matrices.GradedMatrix.from_json(_load(args), validate=False)).to_json()


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Verb:
    name: str
    handler: Callable
    ops: tuple[str, ...]
    help: str
    options: tuple[str, ...] = ()


VERBS: tuple[Verb, ...] = (
    Verb("scalar", v_scalar, ("cyc_add", "cyc_mul", "cyc_inv", "qpow"), "arithmetic in Q(q)", ("op", "a", "b", "k")),
    Verb("rise", v_rise, ("has_rise",), "leftmost rise of a word", ("word!",)),
    Verb("reduce", v_reduce, ("reduce",), "canonical Roby form of a word or element", ("n", "word")),
    Verb("mul", v_mul, ("lam_mul",), "product of two Roby elements {a, b}"),
    Verb("grade", v_grade, ("grade",), "grades and homogeneous components", ("n",)),
    Verb("dims", v_dims, ("roby_dim",), "dimensions of the degree-k pieces", ("n!", "k!")),
    Verb("basis", v_basis, ("enumerate_basis",), "rise-free words of length k", ("n!", "kint!")),
    Verb("nilpotency", v_nilpotency, ("nilpotency_order",), "smallest vanishing power", ("n", "word", "cap")),
    Verb("build", v_build, ("build_gl", "build_gl_el", "build_poincare_cubic"), "built-in algebras", ("kind", "shape", "D")),
    Verb("jacobi", v_jacobi, ("check_axioms",), "verify the axioms of an algebra", ("algebra",)),
    Verb("rep-check", v_rep_check, ("check_representation",), "verify a matrix representation {algebra, rep}", ("algebra",)),
    Verb("grade-auto", v_grade_auto, ("apply_grade_automorphism",), "apply the grade automorphism", ("algebra", "times")),
    Verb("u-normalize", v_u_normalize, ("u_normalize",), "PBW normal form of {word}", ("algebra",)),
    Verb("u-mul", v_u_mul, ("u_mul",), "product in the enveloping algebra {a, b}", ("algebra",)),
    Verb("coproduct", v_coproduct, ("coproduct",), "coproduct of {u}", ("algebra",)),
    Verb("antipode", v_antipode, ("antipode",), "antipode of {u}", ("algebra", "braided")),
    Verb("counit", v_counit, ("counit",), "counit of {u}", ("algebra",)),
    Verb("bracket-coproduct", v_bracket_coproduct, ("check_bracket_coproduct",), "compatibility of the 3-bracket with the coproduct", ("algebra", "ungraded")),
    Verb("exp", v_exp, ("truncated_exp", "group_like_report"), "truncated exponential and group-like report", ("algebra", "cap")),
    Verb("dual-mul", v_dual_mul, ("dual_multiply",), "product of dual basis elements {u, v}", ("algebra", "cap", "n1")),
    Verb("derive-theta", v_derive_theta, ("derive_theta_relations",), "products of the dual theta variables", ("n1!", "cap")),
    Verb("invert", v_invert, ("invert_lambda0",), "order-by-order inverse of a grade-0 matrix", ("cap",)),
    Verb("mat-mul", v_mat_mul, ("mat_mul",), "product of graded matrices {M, N}"),
    Verb("block-invert", v_block_invert, ("invert_block",), "blockwise inverse of a graded matrix", ("cap",)),
    Verb("glf-check", v_glf_check, ("is_glf_member",), "GL_f membership with certificate", ("cap",)),
    Verb("mat-exp", v_mat_exp, ("exp_nilpotent",), "exponential of a nilpotent graded matrix", ("cap",)),
    Verb("group-element", v_group_element, ("group_element",), "G0 times exponentials, from {G0, Bs} or --seed", ("cap", "seed", "shape", "p", "factors")),
    Verb("tangent", v_tangent, ("infinitesimal_limit",), "constant and theta-linear parts of a graded matrix"),
)

REGISTRY = {v.name: v for v in VERBS}


def _add_option(p: argparse.ArgumentParser, name: str):
    required = name.endswith("!")
    name = name.rstrip("!")
    if name == "n":
        p.add_argument("--n", type=int, required=required, help="number of theta generators")
    elif name == "k":
        p.add_argument("--k", required=required, help="degree list, e.g. 0..4 or 1,3")
    elif name == "kint":
        p.add_argument("--k", type=int, required=required, help="degree")
    elif name == "word":
        p.add_argument("--word", required=required, help="comma-separated letters, e.g. 1,1,2")
    elif name == "cap":
        p.add_argument("--cap", type=int, help="degree or power cap")
    elif name == "op":
        p.add_argument("--op", choices=("add", "mul", "inv", "qpow"), required=True)
    elif name in ("a", "b"):
        p.add_argument(f"--{name}", help="scalar such as 1/2-q")
    elif name == "kind":
        p.add_argument("kind", choices=("gl", "gl-el", "poincare"))
    elif name == "shape":
        p.add_argument("--shape", help="block sizes m1,m2,m3")
    elif name == "D":
        p.add_argument("--D", type=int, help="space-time dimension")
    elif name == "algebra":
        p.add_argument("--algebra", help="gl:m1,m2,m3 | gl-el:m1,m2,m3 | poincare:D | trivial:n0,n1")
    elif name == "times":
        p.add_argument("--times", type=int, default=1)
    elif name == "braided":
        p.add_argument("--braided", action="store_true", help="use the graded anti-morphism rule")
    elif name == "ungraded":
        p.add_argument("--ungraded", action="store_true", help="drop the q-sign rule (for comparison)")
    elif name == "n1":
        p.add_argument("--n1", type=int, required=required, help="dimension of the grade-one sector")
    elif name == "seed":
        p.add_argument("--seed", type=int, help="seed for a random group element")
    elif name == "p":
        p.add_argument("--p", type=int, default=2, help="number of theta generators")
    elif name == "factors":
        p.add_argument("--factors", type=int, default=1, help="grade-one exponential factors")
    else:  # pragma: no cover
        raise KeyError(name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ternary", description="Exact algebra of order three: Roby algebra, enveloping algebras, graded matrices.")
    parser.add_argument("--format", choices=("json",), default="json")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb in VERBS:
        p = sub.add_parser(verb.name, help=verb.help, description=verb.help)
        p.add_argument("--input", "-i", help="input JSON file ('-' for standard input)")
        p.add_argument("--format", choices=("json",), default="json")
        for opt in verb.options:
            _add_option(p, opt)
        p.set_defaults(verb_obj=verb)
    return parser


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.verb_obj.handler(args)
    except TernaryError as exc:
        sys.stderr.write(dumps({"error": exc.code, "message": str(exc)}))
        return exc.exit_code
    except RecursionError as exc:  # pragma: no cover
        sys.stderr.write(dumps({"error": "error", "message": f"recursion limit: {exc}"}))
        return 1
    sys.stdout.write(dumps(result))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
