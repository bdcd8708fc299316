from dataclasses import replace

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from app.core.exceptions import KBValidationError
from app.models.assertions import ConceptAssertion
from app.models.axioms import ConjCI, DiamCI, ExistsLHS, ExistsRHS, RoleCI, RoleInclusion
from app.models.concepts import BOT, FRESH_PREFIX, TOP, And, Exists, Name, render_concept
from app.services.kb_parser_service import parse_kb
from app.services.normalizer_service import normalize
from app.services.oracle_service import OracleService, full_expansion_depth, is_cyclic
from tests.conftest import CANCER_KB, CHEMO_KB, concept_holds, service_for


def test_normal_shapes_need_no_fresh_names():
    kb = normalize(parse_kb("A SUB B\nA AND B SUB C\nA SUB some r . B\nsome r . A SUB B\nrole r SUB s\n"))
    assert kb.normalized
    assert kb.fresh_names == frozenset()
    assert set(kb.tbox) == {
        ConjCI("A", TOP, "B"),
        ConjCI("A", "B", "C"),
        ExistsRHS("A", "r", "B"),
        ExistsLHS("r", "A", "B"),
        RoleCI("r", "s"),
    }


def test_conjunctive_right_hand_side_is_split():
    kb = normalize(parse_kb("A SUB B AND C\n"))
    assert set(kb.tbox) == {ConjCI("A", TOP, "B"), ConjCI("A", TOP, "C")}


def test_nested_existential_gets_a_fresh_name():
    kb = normalize(parse_kb("A SUB some r . (B AND C)\n"))
    (fresh,) = kb.fresh_names
    assert fresh.startswith(FRESH_PREFIX)
    assert ExistsRHS("A", "r", fresh) in kb.tbox
    assert ConjCI(fresh, TOP, "B") in kb.tbox
    assert ConjCI(fresh, TOP, "C") in kb.tbox


def test_identical_subconcepts_share_one_name():
    kb = normalize(parse_kb(CANCER_KB))
    names = list(kb.name_map.values())
    assert len(names) == len(set(names))


def test_bot_inclusion():
    kb = normalize(parse_kb("A AND B SUB bot\n"))
    assert kb.tbox == (ConjCI("A", "B", BOT),)


def test_diamond_inclusion_keeps_its_operator():
    kb = normalize(parse_kb(CHEMO_KB))
    diamonds = sorted((a for a in kb.tbox if isinstance(a, DiamCI)), key=lambda a: a.op.n)
    assert [(a.op.n, a.sub, a.sup) for a in diamonds] == [
        (120, "ChemotherapyPatient", "ChemotherapyPatient"),
        (365, "CancerPatient", "CancerPatient"),
    ]


def test_complex_assertion_is_named():
    kb = normalize(parse_kb("(A AND some r . B)(c)\n"))
    (assertion,) = kb.abox
    assert assertion.concept_name in kb.fresh_names


def test_user_names_with_reserved_prefix_are_rejected():
    kb = parse_kb("A SUB B\n")
    clash = replace(kb, abox=(ConceptAssertion(Name(f"{FRESH_PREFIX}7"), "a"),))
    with pytest.raises(KBValidationError):
        normalize(clash)


def test_normalizing_twice_is_a_no_op():
    once = normalize(parse_kb(CANCER_KB))
    assert normalize(once) is once


atomic = st.sampled_from([Name("A"), Name("B"), Name("C")])
complex_concepts = st.recursive(
    atomic,
    lambda inner: st.one_of(st.builds(And, inner, inner), st.builds(Exists, st.sampled_from(["r", "s"]), inner)),
    max_leaves=4,
)


def assertion_text(concept, individual: str) -> str:
    text = render_concept(concept)
    return f"{text}({individual})" if isinstance(concept, Name) else f"({text})({individual})"


@given(st.lists(st.tuples(complex_concepts, complex_concepts), min_size=1, max_size=3), st.booleans())
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
def test_canonical_model_of_the_normal_form_satisfies_the_raw_axioms(inclusions, role_axiom):
    lines = [f"{render_concept(lhs)} SUB {render_concept(rhs)}" for lhs, rhs in inclusions]
    if role_axiom:
        lines.append("role r SUB s")
    lines += [assertion_text(lhs, f"w{k}") for k, (lhs, _) in enumerate(inclusions)]
    lines += [f"{name}(n{name})" for name in "ABC"]
    service = service_for("\n".join(lines) + "\n")
    assume(not is_cyclic(service.table))

    model = OracleService(service.normalized, service.table).expanded_named_part(full_expansion_depth(service.table))
    raw = parse_kb("\n".join(lines) + "\n")
    for axiom in raw.raw_tbox:
        if isinstance(axiom, RoleInclusion):
            assert all(model.holds(axiom.sup, d, e) for d in model.domain for e in model.successors(axiom.sub, d))
            continue
        for d in model.domain:
            if concept_holds(model, d, axiom.lhs):
                assert concept_holds(model, d, axiom.rhs), (axiom.render(), d)
    for assertion in raw.abox:
        assert concept_holds(model, assertion.individual, assertion.concept), assertion.render()
