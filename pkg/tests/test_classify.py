"""Form labels, mechanism report, duality pairs, emergence order."""

from igate.classify import classify_rule, mechanism_report
from igate.dsl import parse_program
from igate.grounding import ground_program


def rule_of(text):
    return parse_program(text).statements[0]


def label_of(text):
    return classify_rule(rule_of(text))


class TestClassifyRule:
    def test_conjunctive_body(self):
        label = label_of("p :- a, b.")
        assert (label.form, label.mechanism) == (1, "comprehension")
        assert label.merge_kind == "morphism"

    def test_disjunctive_body(self):
        label = label_of("p :- a; b.")
        assert (label.form, label.mechanism) == (2, "generalization")

    def test_conjunctive_head(self):
        label = label_of("p, q :- a.")
        assert (label.form, label.mechanism) == (3, "description")
        assert label.sublabel == "individuation"

    def test_disjunctive_head(self):
        assert (label_of("p; q :- a.").form, label_of("p; q :- a.").mechanism) == (
            4,
            "specification",
        )
        assert label_of("dog(X); cat(X) :- mammal(X).").form == 4

    def test_exclusive_head_is_also_specification(self):
        assert label_of("p ^ q :- a.").mechanism == "specification"

    def test_composition_by_binary_predicates(self):
        label = label_of("car(X) :- engine(Y), wheels(Z), has(X, Y), has(X, Z).")
        assert (label.form, label.merge_kind) == (1, "composition")

    def test_composition_by_body_existential(self):
        assert label_of("p(X) :- a(Y).").merge_kind == "composition"

    def test_degenerate_single_literal_rule(self):
        label = label_of("p :- a.")
        assert (label.form, label.merge_kind) == (1, "morphism")
        assert label_of("a.").form == 1

    def test_relational_head_extraction_is_instantiation(self):
        label = label_of("engine(Y), has(X, Y) :- car(X).")
        assert (label.form, label.sublabel) == (3, "instantiation")

    def test_head_wins_over_body_when_both_compound(self):
        assert label_of("p, q :- a; b.").form == 3

    def test_invariant_under_grounding(self):
        sources = [
            "#entity c1, c2.\nangry(X), dog(X) :- angrydog(X).",
            "#entity c1, c2.\nmammal(X) :- dog(X); cat(X).",
            "#entity c1, c2.\np(X) :- a(X), b(X).",
            "#entity c1, c2.\nd(X); c(X) :- m(X).",
        ]
        for source in sources:
            program = parse_program(source)
            original = classify_rule(program.statements[0])
            for stmt in ground_program(program).statements:
                ground = classify_rule(stmt)
                assert (ground.form, ground.mechanism) == (
                    original.form,
                    original.mechanism,
                )


class TestMechanismReport:
    def test_forms_one_two_four(self):
        report = mechanism_report(
            parse_program("m :- a, b. g :- a; b. x; y :- g.")
        )
        assert report.forms_present == (1, 2, 4)
        assert report.emergence_order == (
            "comprehension",
            "generalization",
            "specification",
        )
        assert ("generalization", "specification") in report.duality_pairs
        assert report.missing_prerequisites == (3,)

    def test_empty_program(self):
        report = mechanism_report(parse_program(""))
        assert report.entries == ()
        assert report.emergence_order == ()
        assert report.duality_pairs == ()

    def test_form_four_alone_flags_missing_prerequisites(self):
        report = mechanism_report(parse_program("p; q :- a."))
        assert report.forms_present == (4,)
        assert report.missing_prerequisites == (1, 3)

    def test_all_four_forms_order(self):
        report = mechanism_report(
            parse_program("m :- a, b. g :- a; b. x, y :- m. u; v :- g.")
        )
        assert report.emergence_order == (
            "comprehension",
            "generalization",
            "description",
            "specification",
        )
        assert report.duality_pairs == (
            ("comprehension", "description"),
            ("generalization", "specification"),
        )
        assert report.missing_prerequisites == ()

    def test_split_rules_noted_for_duality(self):
        report = mechanism_report(
            parse_program("p :- a. p :- b. u; v :- p.")
        )
        # the two single-body rules jointly realize a form-2 disjunction,
        # so the generalization/specification duality is preserved
        assert report.forms_present == (1, 4)
        assert 2 in report.implicit_forms
        assert ("generalization", "specification") in report.duality_pairs
        assert any("form-2" in note for note in report.notes)

    def test_emergence_order_invariants_over_all_form_subsets(self):
        samples = {
            1: "m :- a, b.",
            2: "g :- a; b.",
            3: "x, y :- m.",
            4: "u; v :- g.",
        }
        for mask in range(1, 16):
            forms = [f for f in (1, 2, 3, 4) if mask >> (f - 1) & 1]
            source = " ".join(samples[f] for f in forms)
            order = mechanism_report(parse_program(source)).emergence_order
            position = {m: i for i, m in enumerate(order)}
            if "comprehension" in position:
                assert position["comprehension"] == 0
            if {"description", "specification"} <= set(position):
                assert position["description"] < position["specification"]
            if {"generalization", "specification"} <= set(position):
                assert position["generalization"] < position["specification"]

    def test_non_rule_statements_listed_unlabeled(self):
        report = mechanism_report(parse_program(":- a, b. 1{a; -a}1. p :- a."))
        unlabeled = [text for text, label in report.entries if label is None]
        assert len(unlabeled) == 2

    def test_json_shape(self):
        report = mechanism_report(parse_program("p :- a, b."))
        payload = report.to_json()
        assert payload["rules"][0]["mechanism"] == "comprehension"
        assert payload["forms_present"] == [1]
