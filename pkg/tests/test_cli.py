import io
import json
import subprocess
import sys

import pytest

from ternary_algebra.cli import REGISTRY, VERBS, main
from ternary_algebra.enveloping import EnvelopingAlgebra, UElement
from ternary_algebra.lie3 import LieOrder3Algebra, build_gl_el
from ternary_algebra.matrices import GradedMatrix, LambdaMatrix, random_group_element
from ternary_algebra.roby import RobyElement, reduce

OPERATIONS = {
    "cyc_add", "cyc_mul", "cyc_inv", "qpow",
    "has_rise", "reduce", "lam_mul", "grade", "roby_dim", "enumerate_basis", "nilpotency_order",
    "check_axioms", "build_gl", "build_gl_el", "build_poincare_cubic", "check_representation", "apply_grade_automorphism",
    "u_normalize", "u_mul", "coproduct", "antipode", "counit", "check_bracket_coproduct",
    "truncated_exp", "group_like_report", "dual_multiply", "derive_theta_relations",
    "invert_lambda0", "mat_mul", "invert_block", "is_glf_member", "exp_nilpotent", "group_element", "infinitesimal_limit",
}


def run(capsys, monkeypatch, argv, doc=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO("" if doc is None else (doc if isinstance(doc, str) else json.dumps(doc))))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None), out


@pytest.fixture
def cli(capsys, monkeypatch):
    return lambda argv, doc=None: run(capsys, monkeypatch, argv, doc)


def test_registry_covers_each_operation_once():
    seen = [op for verb in VERBS for op in verb.ops]
    assert len(seen) == len(set(seen))
    assert set(seen) == OPERATIONS
    assert len(REGISTRY) == len(VERBS)


def test_listed_verbs_exist():
    listed = "reduce mul dims basis nilpotency jacobi build rep-check coproduct bracket-coproduct dual-mul derive-theta exp invert block-invert group-element glf-check tangent"
    assert set(listed.split()) <= set(REGISTRY)


class TestRoby:
    def test_reduce_word(self, cli):
        code, out, _, _ = cli(["reduce", "--n", "2", "--word", "1,1,2"])
        assert code == 0
        assert out == {"n": 2, "terms": [{"word": [1, 2, 1], "coeff": "-1"}, {"word": [2, 1, 1], "coeff": "-1"}]}

    def test_dims(self, cli):
        assert cli(["dims", "--n", "2", "--k", "0..4"])[1]["dims"] == [1, 2, 4, 4, 5]

    def test_basis(self, cli):
        out = cli(["basis", "--n", "2", "--k", "3"])[1]
        assert out["count"] == 4 and [1, 2, 1] in out["words"]

    def test_rise(self, cli):
        assert cli(["rise", "--word", "1,2,1,1,2,1"])[1]["position"] == 2

    def test_mul_and_grade(self, cli):
        t = reduce((2, 2, 1)).to_json()
        assert cli(["mul"], {"a": t, "b": t})[1]["terms"] == []
        out = cli(["grade", "--n", "2"], {"terms": [{"word": [1], "coeff": "1"}, {"word": [1, 2], "coeff": "q"}]})[1]
        assert out["grades"] == [1, 2]

    def test_nilpotency(self, cli):
        assert cli(["nilpotency", "--word", "2,2,1", "--cap", "5"])[1]["order"] == 2
        assert cli(["nilpotency", "--word", "3,2,1", "--cap", "4"])[1]["order"] is None

    def test_scalar(self, cli):
        assert cli(["scalar", "--op", "mul", "--a", "q", "--b", "q"])[1]["value"] == "-1-q"
        assert cli(["scalar", "--op", "add", "--a", "1", "--b", "q"])[1]["value"] == "1+q"
        assert cli(["scalar", "--op", "inv", "--a", "q"])[1]["value"] == "-1-q"
        assert cli(["scalar", "--op", "qpow", "--k", "5"])[1]["value"] == "-1-q"


class TestAlgebras:
    def test_build_and_check(self, cli, tmp_path):
        code, out, _, _ = cli(["build", "gl-el", "--shape", "1,1,1"])
        assert code == 0 and out["algebra"]["n1"] == 3
        path = tmp_path / "alg.json"
        path.write_text(json.dumps(out))
        assert cli(["jacobi", "-i", str(path)])[1]["passed"] is True
        assert cli(["rep-check", "-i", str(path)])[1]["passed"] is True

    def test_poincare(self, cli):
        out = cli(["build", "poincare", "--D", "4"])[1]
        assert out["algebra"]["n0"] == 10
        assert cli(["jacobi", "--algebra", "poincare:3"])[1]["passed"] is True

    def test_grade_auto(self, cli):
        doc = {"element": [{"sector": 1, "index": 0, "coeff": "1"}, {"sector": 0, "index": 2, "coeff": "3"}]}
        out = cli(["grade-auto", "--algebra", "gl-el:1,1,1"], doc)[1]
        assert out["element"] == [{"sector": 0, "index": 2, "coeff": "3"}, {"sector": 1, "index": 0, "coeff": "q"}]


class TestEnveloping:
    def test_normalize_and_mul(self, cli):
        out = cli(["u-normalize", "--algebra", "gl-el:1,1,1"], {"word": ["Y1", "X1"]})[1]
        assert {"x": [1, 0, 0], "y": [1], "coeff": "1"} in out["terms"]
        prod = cli(["u-mul", "--algebra", "gl-el:1,1,1"], {"a": ["Y1"], "b": ["X1"]})[1]
        assert prod == out

    def test_coproduct_antipode_counit(self, cli):
        d = cli(["coproduct", "--algebra", "trivial:1,2"], {"u": ["Y1", "Y2", "Y1"]})[1]
        assert len(d["terms"]) == 8
        s = cli(["antipode", "--algebra", "trivial:1,2"], {"u": ["Y1", "Y2"]})[1]
        assert s["terms"] == [{"x": [0], "y": [2, 1], "coeff": "1"}]
        assert cli(["counit", "--algebra", "gl-el:1,1,1"], {"u": {"n0": 3, "n1": 3, "terms": [{"x": [0, 0, 0], "y": [], "coeff": "1"}, {"x": [1, 0, 0], "y": [], "coeff": "1"}]}})[1] == {"counit": "1"}

    def test_bracket_coproduct(self, cli):
        assert cli(["bracket-coproduct", "--algebra", "gl-el:1,1,1"])[1]["passed"] is True
        assert cli(["bracket-coproduct", "--algebra", "gl-el:1,1,1", "--ungraded"])[1]["passed"] is False

    def test_exp(self, cli):
        out = cli(["exp", "--algebra", "trivial:1,2", "--cap", "3"], {"u": ["Y1"]})[1]
        assert out["report"]["delta_exp_equals_exp_delta"] is True

    def test_dual_mul(self, cli):
        out = cli(["dual-mul", "--n1", "2"], {"u": {"alpha": [0], "theta": [1]}, "v": {"alpha": [0], "theta": [2]}})[1]
        assert out["terms"] == [{"alpha": [0], "theta": [1, 2], "coeff": "1"}, {"alpha": [0], "theta": [2, 1], "coeff": "q"}]

    def test_derive_theta(self, cli):
        out = cli(["derive-theta", "--n1", "2", "--cap", "3"])[1]
        assert out["passed"] is True
        assert out["expansions"]["t1 t1 t2"] == "(-1)theta(1,2,1) + (-q)theta(2,1,1)"
        assert set(out["relation_sums"].values()) == {"0"}


class TestMatrices:
    def test_group_element_pipeline(self, cli, tmp_path):
        code, out, _, _ = cli(["group-element", "--shape", "1,1,1", "--seed", "3"])
        assert code == 0
        M = out["element"]
        cert = cli(["glf-check"], M)[1]
        assert cert["member"] and cert["MN_is_identity"] and cert["NM_is_identity"]
        inv = cli(["block-invert"], M)[1]
        assert inv["MN_is_identity"] and inv["NM_is_identity"]
        assert cli(["mat-mul"], {"M": M, "N": inv["N"]})[1] == GradedMatrix.identity((1, 1, 1), 2).to_json()
        assert cli(["tangent"], M)[1]["passed"] is True
        rebuilt = cli(["group-element"], {"G0": out["G0"], "Bs": out["Bs"]})[1]["element"]
        assert rebuilt == M

    def test_invert_and_exp(self, cli):
        A = {"rows": 1, "cols": 1, "p": 2, "entries": [[[{"word": [], "coeff": "2"}, {"word": [2, 2, 1], "coeff": "1"}]]]}
        out = cli(["invert"], A)[1]
        assert out["inverse"]["entries"] == [[[{"word": [], "coeff": "1/2"}, {"word": [2, 2, 1], "coeff": "-1/4"}]]]
        B = GradedMatrix.zero((1, 1, 1), 2).to_json()
        assert cli(["mat-exp"], B)[1] == GradedMatrix.identity((1, 1, 1), 2).to_json()


class TestErrors:
    def test_parse_error(self, cli):
        code, _, err, _ = cli(["mul"], "{not json")
        assert code == 2 and err["error"] == "parse-error"

    def test_precondition(self, cli):
        code, _, err, _ = cli(["scalar", "--op", "inv", "--a", "0"])
        assert code == 3 and err["error"] == "precondition"

    def test_not_invertible(self, cli):
        doc = GradedMatrix.zero((1, 1, 1), 2).to_json()
        code, _, err, _ = cli(["block-invert"], doc)
        assert code == 4 and err["error"] == "not-invertible"

    def test_cap_exceeded(self, cli):
        A = {"rows": 1, "cols": 1, "p": 3, "entries": [[[{"word": [], "coeff": "1"}, {"word": [3, 2, 1], "coeff": "1"}]]]}
        code, _, err, _ = cli(["invert", "--cap", "4"], A)
        assert code == 5 and err["error"] == "cap-exceeded"

    def test_cap_exceeded_dual(self, cli):
        doc = {"u": {"alpha": [0], "theta": [1, 2]}, "v": {"alpha": [0], "theta": [1]}}
        assert cli(["dual-mul", "--n1", "2", "--cap", "2"], doc)[0] == 5


class TestRoundTrip:
    def test_documents_reparse(self, cli):
        out = cli(["reduce", "--n", "3", "--word", "1,2,3,1"])[1]
        assert RobyElement.from_json(out) == reduce((1, 2, 3, 1), 3)
        alg = cli(["build", "gl-el", "--shape", "2,1,1"])[1]["algebra"]
        assert LieOrder3Algebra.from_json(alg) == build_gl_el(2, 1, 1)[0]
        env = EnvelopingAlgebra(build_gl_el(1, 1, 1)[0])
        u = cli(["u-normalize", "--algebra", "gl-el:1,1,1"], {"word": ["Y2", "X1", "Y1", "Y3"]})[1]
        assert UElement.from_json(env, u).to_json() == u
        M = cli(["group-element", "--shape", "2,1,2", "--seed", "1"])[1]["element"]
        assert GradedMatrix.from_json(M).to_json() == M
        inv = cli(["invert"], {"rows": 1, "cols": 1, "p": 2, "entries": [[[{"word": [], "coeff": "3"}]]]})[1]["inverse"]
        assert LambdaMatrix.from_json(inv).to_json() == inv

    def test_byte_identical_output(self):
        argv = [sys.executable, "-m", "ternary_algebra", "group-element", "--shape", "1,2,1", "--seed", "7"]
        first = subprocess.run(argv, capture_output=True, check=True).stdout
        second = subprocess.run(argv, capture_output=True, check=True).stdout
        assert first == second and first.endswith(b"\n")

    def test_seeded_generator_matches_library(self, cli):
        M, _, _ = random_group_element((1, 1, 1), 2, 5)
        assert cli(["group-element", "--shape", "1,1,1", "--seed", "5"])[1]["element"] == M.to_json()
