"""Exit-code contract, output formats, and schema validation for `ig`."""

import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from igate.cli import dispatch
from igate.learn import dump_episodes_jsonl, generate_planted_episodes

PROGRAMS = Path(__file__).parent.parent / "demos" / "programs"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def schema(name: str) -> dict:
    return json.loads(
        resources.files("igate.schemas").joinpath(name).read_text()
    )


class TestExitCodes:
    def test_success(self, tmp_path):
        code, out = dispatch(["parse", write(tmp_path, "p.ig", "a.")])
        assert code == 0 and "1 statements" in out

    def test_missing_file_is_usage_error(self):
        code, out = dispatch(["parse", "missing.ig"])
        assert code == 1 and out == ""

    def test_unknown_flag_is_usage_error(self):
        code, _ = dispatch(["models", "--frobnicate", "x.ig"])
        assert code == 1

    def test_missing_subcommand(self):
        assert dispatch([])[0] == 1

    def test_syntax_error_is_semantic_error(self, tmp_path):
        code, _ = dispatch(["parse", write(tmp_path, "p.ig", "p :- not q.")])
        assert code == 2

    def test_guard_exceeded_is_semantic_error(self, tmp_path):
        source = " ".join(f"1{{x{i}; -x{i}}}1." for i in range(30))
        code, _ = dispatch(["models", write(tmp_path, "p.ig", source)])
        assert code == 2

    def test_zero_mass_conditional_is_semantic_error(self, tmp_path):
        path = write(tmp_path, "p.ig", "0.7 :: c.")
        code, _ = dispatch(["prob", path, "--query", "c", "--given", "d"])
        assert code == 2

    def test_help_exits_zero(self):
        code, out = dispatch(["--help"])
        assert code == 0 and "COMMAND" in out


class TestSubcommands:
    def test_format_canonicalizes(self, tmp_path):
        path = write(tmp_path, "p.ig", "q :- a.   p :- b,a.")
        assert dispatch(["format", path]) == (0, "p :- a, b.\nq :- a.\n")

    def test_ground(self, tmp_path):
        path = write(tmp_path, "p.ig", "#entity c1, c2.\np(X) :- a(X).")
        code, out = dispatch(["ground", path])
        assert code == 0
        assert "p(c1) :- a(c1)." in out and "p(c2) :- a(c2)." in out

    def test_complete_reference_constraint(self):
        code, out = dispatch(
            ["complete", str(PROGRAMS / "implication_constraint.ig")]
        )
        assert code == 0
        assert out == "-a :- b, -p.\n-b :- a, -p.\np :- a, b.\n"

    def test_compile_summary_and_dot(self, tmp_path):
        dot_path = tmp_path / "out.dot"
        code, out = dispatch(
            [
                "compile",
                str(PROGRAMS / "implication_classical.ig"),
                "--dot",
                str(dot_path),
            ]
        )
        assert code == 0
        assert "channels: 6" in out and "gates: 3" in out and "generators: 3" in out
        assert dot_path.read_text().startswith("digraph circuit {")

    def test_models_classical(self):
        code, out = dispatch(
            ["models", "--classical", str(PROGRAMS / "implication_classical.ig")]
        )
        assert code == 0
        assert len(out.splitlines()) == 7

    def test_models_json_lines_match_schema(self, tmp_path):
        path = write(tmp_path, "p.ig", "p :- a, b. 1{a; -a}1. 1{b; -b}1.")
        code, out = dispatch(["models", "--json", path])
        assert code == 0
        validator = schema("model.schema.json")
        lines = [json.loads(line) for line in out.splitlines()]
        assert len(lines) == 4
        for line in lines:
            jsonschema.validate(line, validator)

    def test_eval_with_inputs(self, tmp_path):
        path = write(tmp_path, "p.ig", "p :- a, b.")
        code, out = dispatch(["eval", path, "--set", "a=true,b=true"])
        assert code == 0 and "p: true" in out
        code, out = dispatch(["eval", path, "--set", "a=true"])
        assert "p: unknown" in out
        code, out = dispatch(["eval", path, "--set", "a=false"])
        assert "a: false" in out

    def test_eval_unresolved_generator(self, tmp_path):
        path = write(tmp_path, "p.ig", "a. p; q :- a.")
        code, _ = dispatch(["eval", path])
        assert code == 2

    def test_classify_json_matches_schema(self, tmp_path):
        path = write(tmp_path, "p.ig", "m :- a, b. g :- a; b. x; y :- g.")
        code, out = dispatch(["classify", "--json", path])
        assert code == 0
        jsonschema.validate(json.loads(out), schema("classification.schema.json"))

    def test_prob_output_format(self):
        code, out = dispatch(
            ["prob", str(PROGRAMS / "prob.ig"), "--query", "c"]
        )
        assert (code, out) == (0, "0.700000000000\n")
        code, out = dispatch(
            ["prob", str(PROGRAMS / "prob.ig"), "--query", "b", "--given", "a"]
        )
        assert (code, out) == (0, "0.300000000000\n")

    def test_formulas_compare_json_matches_schema(self, tmp_path):
        table = {
            "a=1,b=0,p=1": 0.25,
            "a=1,b=0,p=0": 0.25,
            "a=0,b=1,p=1": 0.25,
            "a=0,b=1,p=0": 0.25,
        }
        path = write(tmp_path, "t.json", json.dumps(table))
        code, out = dispatch(["formulas", "--table", path, "--compare", "--json"])
        assert code == 0
        payload = json.loads(out)
        jsonschema.validate(payload, schema("formulas.schema.json"))
        form5 = next(e for e in payload if e["form"] == 5)
        assert form5["deviation"] == pytest.approx(0.5)

    def test_formulas_single_form(self, tmp_path):
        table = {
            "a=1,p=1": 0.3,
            "a=1,p=0": 0.3,
            "a=0,p=0": 0.4,
        }
        # form 1 needs b as well: report the usage error cleanly
        path = write(tmp_path, "t.json", json.dumps(table))
        code, _ = dispatch(["formulas", "--table", path, "--form", "1"])
        assert code == 2

    def test_parse_json_matches_schema(self, tmp_path):
        path = write(tmp_path, "p.ig", "#entity rex.\ndog(rex).\np :- a, b.")
        code, out = dispatch(["parse", "--json", path])
        assert code == 0
        jsonschema.validate(json.loads(out), schema("parse.schema.json"))

    def test_bom_tolerated(self, tmp_path):
        path = tmp_path / "bom.ig"
        path.write_text("﻿a.", encoding="utf-8")
        assert dispatch(["parse", str(path)])[0] == 0

    def test_vec_outputs_match_schema(self, tmp_path):
        path = write(
            tmp_path, "v.json", json.dumps({"a": [1, 3], "b": [3, 1]})
        )
        validator = schema("vector_result.schema.json")
        for argv in (
            ["vec", "merge", "--vectors", path, "--parts", "a,b"],
            ["vec", "fuse", "--vectors", path, "--pair", "a,b"],
            ["vec", "contrast", "--vectors", path, "--target", "a",
             "--dictionary", "b"],
        ):
            code, out = dispatch(argv)
            assert code == 0
            jsonschema.validate(json.loads(out), validator)

    def test_vec_operations(self, tmp_path):
        path = write(
            tmp_path,
            "v.json",
            json.dumps({"a": [1, 3], "b": [3, 1], "c": [2, 2], "e": [1, 1]}),
        )
        code, out = dispatch(["vec", "merge", "--vectors", path, "--parts", "a,b"])
        assert code == 0 and json.loads(out)["components"] == [4.0, 4.0]
        code, out = dispatch(
            ["vec", "fuse", "--vectors", path, "--pair", "a,b"]
        )
        assert json.loads(out) == {"center": [2.0, 2.0], "extent": [1.0, 1.0]}
        code, out = dispatch(
            [
                "vec", "detach", "--vectors", path,
                "--center", "c", "--extent", "e", "--direction=-1,1",
            ]
        )
        assert json.loads(out)["components"] == [1.0, 3.0]
        code, out = dispatch(
            [
                "vec", "contrast", "--vectors", path,
                "--target", "c", "--dictionary", "a,b",
            ]
        )
        payload = json.loads(out)
        assert payload["extracted"] and "residual" in payload

    def test_learn_pipeline(self, tmp_path):
        episodes = generate_planted_episodes(n_episodes=400, seed=7)
        ep_path = write(tmp_path, "eps.jsonl", dump_episodes_jsonl(episodes))
        out_path = tmp_path / "proposals.ig"
        code, out = dispatch(
            ["learn", ep_path, "--dual", "--emit", str(out_path)]
        )
        assert code == 0
        assert "m_flame_spark :- flame, spark." in out
        assert out_path.read_text() == out
        sidecar = json.loads((tmp_path / "proposals.ig.evidence.json").read_text())
        jsonschema.validate(sidecar, schema("evidence.schema.json"))

    def test_learn_json_output(self, tmp_path):
        episodes = generate_planted_episodes(n_episodes=400, seed=7)
        ep_path = write(tmp_path, "eps.jsonl", dump_episodes_jsonl(episodes))
        code, out = dispatch(["learn", ep_path, "--json"])
        assert code == 0
        jsonschema.validate(json.loads(out), schema("evidence.schema.json"))


class TestGuardOverrides:
    def test_max_choices_flag(self, tmp_path):
        source = " ".join(f"1{{x{i}; -x{i}}}1." for i in range(5))
        path = write(tmp_path, "p.ig", source)
        code, _ = dispatch(["models", path, "--max-choices", "3"])
        assert code == 2
        code, out = dispatch(["models", path, "--max-choices", "5"])
        assert code == 0 and len(out.splitlines()) == 32

    def test_env_var_override(self, tmp_path, monkeypatch):
        source = " ".join(f"1{{x{i}; -x{i}}}1." for i in range(5))
        path = write(tmp_path, "p.ig", source)
        monkeypatch.setenv("IG_MAX_CHOICES", "3")
        code, _ = dispatch(["models", path])
        assert code == 2
        monkeypatch.setenv("IG_MAX_CHOICES", "6")
        code, out = dispatch(["models", path])
        assert code == 0 and len(out.splitlines()) == 32
        # an explicit flag beats the environment
        monkeypatch.setenv("IG_MAX_CHOICES", "3")
        code, _ = dispatch(["models", path, "--max-choices", "6"])
        assert code == 0

    def test_max_ground_flag(self, tmp_path):
        source = "#entity c1, c2, c3, c4.\n" + "\n".join(
            f"p{i}(X, Y) :- q{i}(X, Z), r{i}(Y, W)." for i in range(4)
        )
        path = write(tmp_path, "p.ig", source)
        code, _ = dispatch(["ground", path, "--max-ground", "10"])
        assert code == 2
        code, _ = dispatch(["ground", path, "--max-ground", "2000"])
        assert code == 0


class TestNeverCrashes:
    def test_malformed_inputs_yield_exit_codes_not_tracebacks(self, tmp_path):
        import random

        rng = random.Random(2026)
        alphabet = "ab XY(){};,.:-%^\n01.9#entity::﻿\\\"'"
        for i in range(60):
            junk = "".join(
                rng.choice(alphabet) for _ in range(rng.randint(0, 40))
            )
            path = write(tmp_path, f"junk{i}.ig", junk)
            for argv in (
                ["parse", path],
                ["models", path],
                ["complete", path],
                ["classify", path],
                ["prob", path, "--query", "a"],
            ):
                code, _ = dispatch(argv)
                assert code in (0, 1, 2), (argv, junk)

    def test_malformed_json_inputs(self, tmp_path):
        bad = write(tmp_path, "bad.json", "{not json")
        assert dispatch(["formulas", "--table", bad, "--compare"])[0] == 2
        assert dispatch(
            ["vec", "merge", "--vectors", bad, "--parts", "a"]
        )[0] == 2
        bad_eps = write(tmp_path, "bad.jsonl", '{"a": 1}\n')
        assert dispatch(["learn", bad_eps])[0] == 2


class TestDeterminism:
    def test_byte_identical_repeat_runs(self, tmp_path):
        episodes = generate_planted_episodes(n_episodes=300, seed=5)
        ep_path = write(tmp_path, "eps.jsonl", dump_episodes_jsonl(episodes))
        invocations = [
            ["models", "--classical", str(PROGRAMS / "implication_classical.ig")],
            ["complete", str(PROGRAMS / "implication_constraint.ig")],
            ["ground", str(PROGRAMS / "car.ig")],
            ["classify", "--json", str(PROGRAMS / "mammal.ig")],
            ["prob", str(PROGRAMS / "prob.ig"), "--query", "b"],
            ["learn", ep_path],
        ]
        for argv in invocations:
            first = dispatch(argv)
            second = dispatch(argv)
            assert first == second and first[0] == 0
