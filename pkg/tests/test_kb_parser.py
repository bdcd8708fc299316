import pytest

from app.core.exceptions import KBValidationError, ParseError
from app.models.assertions import ConceptAssertion, RoleAssertion
from app.models.axioms import ConceptInclusion, RoleInclusion
from app.models.concepts import And, Diam, Exists, Name
from app.models.diamond import DiamondKind, DiamondOp
from app.models.knowledge_base import KBMode
from app.services.kb_parser_service import parse_kb, serialize_kb
from tests.conftest import CANCER_KB, CHEMO_KB


def test_parses_equivalences_into_two_inclusions():
    kb = parse_kb("BreastCancer EQV Cancer AND some findingSite . BreastStructure\n")
    assert len(kb.raw_tbox) == 2
    forward, backward = kb.raw_tbox
    assert forward.lhs == Name("BreastCancer")
    assert forward.rhs == And(Name("Cancer"), Exists("findingSite", Name("BreastStructure")))
    assert backward.lhs == forward.rhs


def test_parses_role_inclusions_and_assertions():
    kb = parse_kb("role hasPart SUB hasComponent\nA(a)\nr(a, b)\n")
    assert kb.raw_tbox == (RoleInclusion("hasPart", "hasComponent"),)
    assert kb.abox == (ConceptAssertion(Name("A"), "a"), RoleAssertion("r", "a", "b"))
    assert kb.individuals == {"a", "b"}


def test_parses_complex_concept_assertion():
    kb = parse_kb("(Cancer AND some findingSite . SkinStructure)(c4)\n")
    (assertion,) = kb.abox
    assert assertion.is_complex
    assert assertion.individual == "c4"


def test_parses_diamond_axioms_and_time_stamps():
    kb = parse_kb(CHEMO_KB)
    assert kb.mode == KBMode.TEMPORAL
    assert kb.tem == [0, 167, 258]
    conv = [a for a in kb.raw_tbox if isinstance(a, ConceptInclusion) and isinstance(a.lhs, Diam)]
    assert {(a.lhs.op.kind, a.lhs.op.n) for a in conv} == {
        (DiamondKind.CONVEX_N, 365),
        (DiamondKind.CONVEX_N, 120),
    }


def test_atemporal_kb_mode():
    assert parse_kb(CANCER_KB).mode == KBMode.ATEMPORAL


def test_comments_and_blank_lines_are_skipped():
    kb = parse_kb("# a comment\n\n   \nA SUB B\n")
    assert len(kb.raw_tbox) == 1


def test_syntax_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_kb("A SUB B\nA SUB SUB\n", source="bad.txt")
    assert info.value.location.file == "bad.txt"
    assert info.value.location.line == 2


def test_diamond_on_right_hand_side_is_rejected():
    with pytest.raises(KBValidationError):
        parse_kb("A SUB diaP B\n")


def test_diamond_in_equivalence_is_rejected():
    with pytest.raises(KBValidationError):
        parse_kb("diaF A EQV B\n")


def test_mixed_timed_and_untimed_assertions_are_rejected():
    with pytest.raises(KBValidationError):
        parse_kb("A(a) @ 3\nB(a)\n")


def test_untimed_data_with_diamonds_is_rejected():
    with pytest.raises(KBValidationError):
        parse_kb("diaP A SUB B\nA(a)\n")


def test_temporal_tbox_without_data_parses():
    kb = parse_kb("conv[3] A SUB A\n")
    assert kb.is_temporal
    assert kb.tem == []


def test_time_stamp_outside_64_bit_range():
    with pytest.raises(KBValidationError):
        parse_kb(f"A(a) @ {2 ** 63}\n")


def test_serialize_reparses_to_same_kb():
    kb = parse_kb(CANCER_KB)
    again = parse_kb(serialize_kb(kb))
    assert again.raw_tbox == kb.raw_tbox
    assert again.abox == kb.abox


def test_convex_diamond_with_bound_parses():
    kb = parse_kb("conv[120] X SUB Y\n")
    (axiom,) = kb.raw_tbox
    assert axiom.lhs == Diam(DiamondOp.convex(120), Name("X"))
    assert axiom.rhs == Name("Y")


def test_unbounded_convex_diamond_parses():
    (axiom,) = parse_kb("conv X SUB Y\n").raw_tbox
    assert axiom.lhs.op == DiamondOp.convex()


def test_parsed_names_are_plain_strings():
    kb = parse_kb("role r SUB s\nr(a, b)\nA(a)\n")
    (inclusion,) = kb.raw_tbox
    assert isinstance(inclusion.sub, str) and isinstance(inclusion.sup, str)
    role, concept = kb.abox
    for value in (role.role, role.subject, role.object, concept.individual, concept.concept.name):
        assert type(value) is str
