import pytest

from app.core.config import settings
from app.models.query import NESTED_SUBJECT, Var, nested_filter_depth
from app.services.canonical_model_service import CanonicalModelService
from app.services.oracle_service import OracleService, locality_depth
from app.services.query_eval_service import eval_filtered
from app.services.query_parser_service import parse_query
from app.services.rewriter_service import RewriterService, is_contradictory
from tests.conftest import service_for


def rewritings_for(service, text):
    query = parse_query(text)
    rewriter = RewriterService.for_kb(service.normalized, service.table)
    return rewriter, rewriter.all_rewritings(query.leaves[0].query)


def test_cancer_rewritings(cancer_service, cancer_query):
    rewriter = RewriterService.for_kb(cancer_service.normalized, cancer_service.table)
    leaf = cancer_query.leaves[0].query
    rewritings = rewriter.all_rewritings(leaf)
    assert len(rewritings) == 3
    assert rewritings[0].atoms == leaf.atoms
    assert not rewritings[0].filters

    named = CanonicalModelService(cancer_service.normalized, cancer_service.table).build_named_part()
    answers = [eval_filtered(q, named) for q in rewritings]
    assert answers == [set(), set(), {("p1",), ("p2",)}]
    assert [nested_filter_depth(q) for q in rewritings] == [0, 1, 2]


def test_rewritings_keep_the_head(cancer_service, cancer_query):
    rewriter = RewriterService.for_kb(cancer_service.normalized, cancer_service.table)
    for rewriting in rewriter.all_rewritings(cancer_query.leaves[0].query):
        assert rewriting.head == (Var("x"),)


def test_step_installs_filter_on_merged_predecessor():
    service = service_for("A SUB some r . B\n")
    _, rewritings = rewritings_for(service, "q(x) := {r(x,y), B(y)}")
    assert len(rewritings) == 2
    rewritten = rewritings[1]
    assert {a.render() for a in rewritten.atoms} == {"A(x)"}
    (f,) = rewritten.filters
    assert f.subject == Var("x") and f.role == "r" and f.concepts == {"B"}


def test_negated_atom_moves_into_the_filter():
    service = service_for("A SUB some r . B\nC SUB some r . (B AND D)\n")
    _, rewritings = rewritings_for(service, "q(x) := {r(x,y), B(y), not D(y)}")
    filtered = [q for q in rewritings if q.filters]
    assert filtered
    for rewriting in filtered:
        (f,) = rewriting.filters
        assert f.neg_concepts == {"D"}


def test_atypical_witnesses_are_excluded():
    # a C-witness satisfies D, so rewriting through A must exclude C
    service = service_for("A SUB some r . B\nC SUB some r . (B AND D)\nC SUB A\n")
    _, rewritings = rewritings_for(service, "q(x) := {r(x,y), B(y), not D(y)}")
    through_a = [q for q in rewritings if any(a.render() == "A(x)" for a in q.atoms)]
    assert through_a
    assert all(any(a.render() == "not C(x)" for a in q.atoms) for q in through_a)


def test_nested_filters_come_from_chains():
    service = service_for("A SUB some r . B\nB SUB some s . C\n")
    _, rewritings = rewritings_for(service, "q(x) := {r(x,y), s(y,z), C(z)}")
    depths = sorted(nested_filter_depth(q) for q in rewritings)
    assert depths[-1] == 2
    deepest = max(rewritings, key=nested_filter_depth)
    (outer,) = deepest.filters
    (inner,) = outer.nested
    assert inner.subject == NESTED_SUBJECT and inner.role == "s"


def test_witness_entailing_a_negated_atom_gives_no_rewriting():
    service = service_for("A SUB some r . B\nB SUB D\n")
    _, rewritings = rewritings_for(service, "q(x) := {r(x,y), B(y), not D(y)}")
    assert len(rewritings) == 1
    assert is_contradictory(parse_query("q(x) := {B(x), not D(x)}").leaves[0].query, service.table)


def test_cyclic_tbox_terminates_within_depth_bound():
    service = service_for("A SUB some r . B\nB SUB some r . A\n")
    rewriter = RewriterService.for_kb(service.normalized, service.table)
    query = parse_query("q() := {A(x), not B(x)}").leaves[0].query
    # one variable, four concept names counting top and bot, one role
    assert rewriter.depth_bound(query) == 1 + 4 * 4 * 1
    rewritings = rewriter.all_rewritings(query)
    assert all(nested_filter_depth(q) <= rewriter.depth_bound(query) for q in rewritings)


def test_constant_predecessors_merge_into_the_constant():
    service = service_for("A SUB some r . B\n")
    _, rewritings = rewritings_for(service, 'q() := {r("a",y), B(y)}')
    rewritten = rewritings[1]
    assert {a.render() for a in rewritten.atoms} == {'A("a")'}


CYCLIC_DATA_KB = "A SUB some r . B\nB SUB some r . A\nA(a)\nB(b)\nC(c)\nr(c, a)\nr(b, c)\n"


@pytest.mark.parametrize(
    "text",
    [
        "q(x) := {r(x,y), r(y,z), A(z)}",
        "q(x) := {r(x,y), B(y), not A(x)}",
        'q() := {r("c",y), r(y,z), r(z,w), B(w)}',
    ],
)
def test_cyclic_answers_are_stable_past_the_depth_bound(text):
    service = service_for(CYCLIC_DATA_KB)
    rewriter = RewriterService.for_kb(service.normalized, service.table)
    query = parse_query(text).leaves[0].query
    named = CanonicalModelService(service.normalized, service.table).build_named_part()
    bound = rewriter.depth_bound(query)

    def answers(depth_bound):
        return set().union(*(eval_filtered(q, named) for q in rewriter.all_rewritings(query, depth_bound)))

    assert answers(bound) == answers(bound + 3)
    depth = max(settings.ORACLE_DEPTH, locality_depth(query))
    assert answers(bound) == OracleService(service.normalized, service.table, depth=depth).oracle_atemporal(query)
