import pytest

from app.core.exceptions import KBValidationError
from app.models.interpretation import FiniteInterpretation
from app.models.query import Filter, FilteredQuery, Var
from app.services.query_eval_service import (
    QueryEvalService,
    eval_filtered,
    eval_ncq_direct,
    filter_holds,
    mwa_atemporal,
)
from app.services.query_parser_service import parse_query
from tests.conftest import service_for


@pytest.fixture
def small_model():
    return FiniteInterpretation.build(
        ["a", "b"],
        {"A": {"a"}, "B": {"b", "e"}, "D": {"e"}},
        {"r": {("a", "b"), ("a", "e")}},
        anonymous=["e"],
        depth={"a": 0, "b": 0, "e": 1},
        parent={"e": "a"},
    )


def answer(service, text):
    return QueryEvalService(service.normalized, service.table).answer(parse_query(text))


def test_cancer_answers(cancer_service, cancer_query):
    result = QueryEvalService(cancer_service.normalized, cancer_service.table).answer(cancer_query)
    assert result.tuples() == [("p1",), ("p2",)]
    assert not result.temporal


def test_boolean_combination_is_evaluated_over_individuals(cancer_service):
    result = answer(cancer_service, "q(x) := {CancerPatient(x)} AND NOT {SkinCancerPatient(x)}")
    assert result.tuples() == [("p1",)]


def test_or_and_true(cancer_service):
    result = answer(cancer_service, "q(x) := {SkinCancer(x)} OR {SkinCancerPatient(x)}")
    assert result.tuples() == [("c3",), ("p2",), ("p3",)]
    assert len(answer(cancer_service, "q(x) := TRUE")) == 4


def test_boolean_query_answers_with_empty_tuple(cancer_service):
    assert answer(cancer_service, 'q() := {diagnosedWith("p3",y), Cancer(y)}').tuples() == [()]
    assert answer(cancer_service, 'q() := {diagnosedWith("p1",y), SkinStructure(y)}').tuples() == []


def test_temporal_operator_needs_temporal_kb(cancer_service):
    with pytest.raises(KBValidationError):
        answer(cancer_service, "q(x) := NEXT {CancerPatient(x)}")


def test_negation_as_minimal_world():
    service = service_for("A SUB some r . B\nA(a)\n")
    # the anonymous r-successor of a is only a B
    assert answer(service, "q(x) := {r(x,y), B(y), not C(y)}").tuples() == [("a",)]
    assert answer(service, "q(x) := {r(x,y), not B(y)}").tuples() == []


def test_answer_variables_range_over_named_elements(small_model):
    query = parse_query("q(y) := {B(y)}").leaves[0].query
    assert eval_ncq_direct(query, small_model) == {("b",)}
    assert eval_filtered(query, small_model) == {("b",)}


def test_quantified_variables_reach_anonymous_elements(small_model):
    query = parse_query("q(x) := {r(x,y), D(y)}").leaves[0].query
    assert eval_ncq_direct(query, small_model) == {("a",)}


def test_filter_holds_when_no_successor_meets_the_guard(small_model):
    f = Filter(Var("x"), "r", frozenset({"C"}))
    assert filter_holds(f, "a", small_model)


def test_filter_needs_one_guarded_successor_satisfying_the_body(small_model):
    only_b = Filter(Var("x"), "r", frozenset({"B"}), neg_concepts=frozenset({"D"}))
    assert filter_holds(only_b, "a", small_model)
    neither = Filter(Var("x"), "r", frozenset({"B"}), neg_concepts=frozenset({"B"}))
    assert not filter_holds(neither, "a", small_model)


def test_filtered_query_checks_filters(small_model):
    query = FilteredQuery(
        head=(Var("x"),),
        atoms=parse_query("q(x) := {A(x)}").leaves[0].query.atoms,
        filters=frozenset({Filter(Var("x"), "r", frozenset({"B"}), neg_roles=frozenset({"r"}))}),
    )
    assert eval_filtered(query, small_model) == set()


def test_mwa_atemporal_unions_the_rewritings(cancer_service, cancer_query):
    leaf = cancer_query.leaves[0].query
    kb, table = cancer_service.normalized, cancer_service.table
    assert mwa_atemporal(leaf, kb, table) == {("p1",), ("p2",)}
    assert eval_ncq_direct(leaf, QueryEvalService(kb, table).named_part) == set()
