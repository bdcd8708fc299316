import pytest

from app.core.exceptions import RefusalError
from app.core.config import settings
from app.models.interpretation import FiniteInterpretation
from app.models.interval_set import IntervalSet
from app.models.mtncq import MTNCQ, Box, Dia, Next, Prev, expand_derived, walk
from app.services.instance_generator_service import random_instance
from app.services.kb_service import KBService
from app.services.mtncq_service import MtncqService
from app.services.oracle_service import (
    OracleService,
    default_window,
    endomorphism_test,
    full_expansion_depth,
    is_cyclic,
    locality_depth,
)
from app.services.query_parser_service import parse_query
from tests.conftest import service_for

CYCLIC_KB = "A SUB some r . B\nB SUB some r . A\nA(a)\n"


def oracle(service, **options):
    return OracleService(service.normalized, service.table, **options)


def test_cancer_oracle_agrees_with_rewriting(cancer_service, cancer_query):
    assert oracle(cancer_service).answer(cancer_query).tuple_set() == {("p1",), ("p2",)}


def test_acyclic_expansion_depth(cancer_service):
    assert not is_cyclic(cancer_service.table)
    assert full_expansion_depth(cancer_service.table) == 2


def test_locality_depth(cancer_query):
    assert locality_depth(cancer_query.leaves[0].query) == 4


def test_cyclic_tbox_is_detected():
    assert is_cyclic(service_for(CYCLIC_KB).table)


def test_cyclic_tbox_with_unrooted_query_is_refused():
    with pytest.raises(RefusalError):
        oracle(service_for(CYCLIC_KB)).answer(parse_query("q() := {B(x)}"))


def test_cyclic_tbox_below_locality_bound_is_refused():
    query = parse_query("q(x) := {r(x,y), r(y,z), A(z)}")
    with pytest.raises(RefusalError):
        oracle(service_for(CYCLIC_KB), depth=1).answer(query)
    assert oracle(service_for(CYCLIC_KB), depth=4).answer(query).tuple_set() == {("a",)}


def test_chemotherapy_oracle(chemo_service, chemo_query):
    assert default_window(chemo_service.normalized, chemo_query) == 637
    assert oracle(chemo_service).answer(chemo_query).as_dict() == {("p1",): IntervalSet.of([(257, 258)])}


def test_temporal_oracle_agrees_inside_its_window(chemo_service):
    query = parse_query("q(x) := {CancerPatient(x)} U[1,3] {ChemotherapyPatient(x)}")
    window = 10
    expected = oracle(chemo_service).answer(query, window)
    pipeline = MtncqService(chemo_service.normalized, chemo_service.table).answer_intervals(query)
    lo, hi = -window, 258 + window
    assert pipeline.as_points(lo, hi) == expected.as_points(lo, hi)


def tree(children_of_a, concepts):
    anonymous = sorted(children_of_a)
    return FiniteInterpretation.build(
        ["a"],
        concepts,
        {"r": {("a", d) for d in anonymous}},
        anonymous=anonymous,
        depth={"a": 0, **{d: 1 for d in anonymous}},
        parent={d: "a" for d in anonymous},
    )


def test_endomorphism_test_accepts_a_minimal_model(cancer_service):
    model = oracle(cancer_service).expanded_named_part(2)
    assert endomorphism_test(model)


def test_endomorphism_test_finds_a_redundant_child():
    model = tree({"e1", "e2"}, {"A": {"a"}, "B": {"e1", "e2"}})
    assert not endomorphism_test(model)


def test_endomorphism_test_keeps_incomparable_children():
    model = tree({"e1", "e2"}, {"A": {"a"}, "B": {"e1"}, "C": {"e2"}})
    assert endomorphism_test(model)


def test_endomorphism_test_refuses_large_domains():
    children = {f"e{k}" for k in range(settings.ORACLE_MAX_DOMAIN + 1)}
    with pytest.raises(RefusalError):
        endomorphism_test(tree(children, {"B": children}))


EDGE_KB = "role s SUB r\nB SUB A\nC SUB some s . A\nC AND B SUB B\nA(a6) @ 0\nC(a7) @ 3\n"


def test_box_near_the_horizon_is_not_vacuous():
    service = service_for(EDGE_KB)
    query = parse_query('q() := DIA[-4,inf] (BOX[2,4] ({r("a6",y1)}))')
    assert oracle(service).answer(query).as_dict() == {}
    assert MtncqService(service.normalized, service.table).answer_intervals(query).as_dict() == {}


@pytest.mark.parametrize(
    "text, expected",
    [
        ("q(x) := DIA[0,inf] {A(x)}", [(-5, 3)]),
        ("q(x) := BOX[-inf,-1] NOT {A(x)}", [(-5, 0)]),
        ("q(x) := BOX[0,inf] NOT {A(x)}", [(4, 8)]),
        ("q(x) := TRUE U[0,inf] {A(x)}", [(-5, 3)]),
        ("q(x) := TRUE S[0,inf] {A(x)}", [(0, 8)]),
    ],
)
def test_unbounded_operators_use_the_edge_values(text, expected):
    service = service_for("A(a) @ 0\nA(a) @ 3\n")
    query = parse_query(text)
    answers = oracle(service).answer(query, 5)
    assert answers.as_dict() == {("a",): IntervalSet.of(expected)}
    pipeline = MtncqService(service.normalized, service.table).answer_intervals(query)
    assert pipeline.as_points(-5, 8) == answers.as_points(-5, 8)


def test_full_expansions_of_random_acyclic_kbs_are_minimal():
    checked = 0
    for seed in range(400):
        service = KBService(random_instance(seed).kb)
        if is_cyclic(service.table):
            continue
        expanded = oracle(service).expanded_named_part(full_expansion_depth(service.table))
        if len(expanded) > settings.ORACLE_MAX_DOMAIN:
            continue
        assert endomorphism_test(expanded), seed
        checked += 1
        if checked == 50:
            break
    assert checked == 50


def test_derived_operators_evaluate_like_their_expansions():
    checked = 0
    for seed in range(30):
        instance = random_instance(seed, temporal=True)
        query = instance.query
        if not any(isinstance(node, (Box, Dia, Next, Prev)) for node in walk(query.formula)):
            continue
        service = KBService(instance.kb)
        depth = max([settings.ORACLE_DEPTH] + [locality_depth(leaf.query) for leaf in query.leaves])
        engine = OracleService(service.normalized, service.table, depth=depth)
        window = default_window(service.normalized, query)
        expanded = MTNCQ(query.head, expand_derived(query.formula))
        try:
            direct = engine.oracle_temporal(query, window)
        except RefusalError:
            continue
        assert engine.oracle_temporal(expanded, window).as_dict() == direct.as_dict(), instance.query_text
        checked += 1
    assert checked >= 5
