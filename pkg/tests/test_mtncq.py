import re

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from app.core.exceptions import KBValidationError
from app.models.interval_set import NEG_INF, POS_INF, IntervalSet
from app.models.temporal import VirtualPoint
from app.services.instance_generator_service import random_instance
from app.services.mtncq_service import (
    BitComparator,
    IntegerComparator,
    MtncqService,
    Timeline,
    compute_n,
    rep_check,
)
from app.services.query_parser_service import parse_query
from tests.conftest import service_for

CHEMO_REPS = [-1, 0, 1, 166, 167, 168, 257, 258, 259]


def answers(service, text, **options):
    engine = MtncqService(service.normalized, service.table, **options)
    return engine.answer_intervals(parse_query(text)).as_dict()


def test_compute_n():
    assert compute_n(parse_query("q() := TRUE U[2,5] {A(x)}").formula) == 7
    assert compute_n(parse_query("q(x) := NEXT PREV {A(x)}").formula) == 4
    assert compute_n(parse_query("q(x) := DIA[-3,inf] {A(x)}").formula) == 3


def test_compute_n_of_chemotherapy_query(chemo_query):
    assert compute_n(chemo_query.formula) == 270


def test_rep_check():
    assert rep_check(1, 1, CHEMO_REPS)
    assert not rep_check(0, 1, CHEMO_REPS)
    assert rep_check(259, 1000, CHEMO_REPS)
    assert not rep_check(259, -2, CHEMO_REPS)
    assert rep_check(5, 0, CHEMO_REPS)


def test_timeline_covers_integers_without_gaps():
    timeline = Timeline.build([0, 10], 1)
    slots = timeline.slots
    for (_, hi), (lo, _) in zip(slots, slots[1:]):
        assert lo == hi + 1
    assert timeline.slot_of(-1000) == 0
    assert timeline.is_point(timeline.slot_of(2))
    assert not timeline.is_point(timeline.slot_of(5))


def test_chemotherapy_answer(chemo_service, chemo_query):
    engine = MtncqService(chemo_service.normalized, chemo_service.table)
    result = engine.answer_intervals(chemo_query)
    assert result.temporal
    assert result.as_dict() == {("p1",): IntervalSet.of([(257, 258)])}


def test_bit_comparator_gives_the_same_answers(chemo_service, chemo_query):
    integer = MtncqService(chemo_service.normalized, chemo_service.table).answer_intervals(chemo_query)
    bits = MtncqService(chemo_service.normalized, chemo_service.table, comparator="bits").answer_intervals(chemo_query)
    assert bits.as_dict() == integer.as_dict()


def test_answers_do_not_depend_on_a_larger_n(chemo_service, chemo_query):
    base = MtncqService(chemo_service.normalized, chemo_service.table).answer_intervals(chemo_query)
    shifted = MtncqService(chemo_service.normalized, chemo_service.table, n_override=280).answer_intervals(chemo_query)
    assert shifted.as_dict() == base.as_dict()


def test_leaf_answers_follow_the_saturation(chemo_service):
    result = answers(chemo_service, "q(x) := {CancerPatient(x)}")
    assert result == {("p1",): IntervalSet.of([(0, 258)])}


def test_next_and_prev(chemo_service):
    assert answers(chemo_service, "q(x) := NEXT {ChemotherapyPatient(x)}") == {
        ("p1",): IntervalSet.of([(-1, -1), (166, 257)])
    }
    assert answers(chemo_service, "q(x) := PREV {ChemotherapyPatient(x)}") == {
        ("p1",): IntervalSet.of([(1, 1), (168, 259)])
    }


def test_until_and_since_are_mirror_images(chemo_service):
    expected = {("p1",): IntervalSet.of([(0, 258)])}
    assert answers(chemo_service, "q(x) := {CancerPatient(x)} U[0,inf] {ChemotherapyPatient(x)}") == expected
    assert answers(chemo_service, "q(x) := {CancerPatient(x)} S[0,inf] {ChemotherapyPatient(x)}") == expected


def test_bounded_until(chemo_service):
    # a session within the next 2 days, under treatment until then
    result = answers(chemo_service, "q(x) := {CancerPatient(x)} U[1,2] {ChemotherapyPatient(x)}")
    assert result == {("p1",): IntervalSet.of([(165, 257)])}


def test_unbounded_diamond_reaches_to_infinity(chemo_service):
    result = answers(chemo_service, "q(x) := DIA[0,inf] {ChemotherapyPatient(x)}")
    assert result[("p1",)].to_list() == [["-inf", 258]]


def test_negation_is_taken_over_all_integers(chemo_service):
    result = answers(chemo_service, "q(x) := NOT {CancerPatient(x)}")
    assert result[("p1",)].to_list() == [["-inf", -1], [259, "inf"]]


def test_eval_at_virtual_points(chemo_service, chemo_query):
    engine = MtncqService(chemo_service.normalized, chemo_service.table)
    lifted = engine.lift_rewrite(chemo_query)
    assert engine.eval_at(lifted, ("p1",), VirtualPoint(257, 0))
    assert engine.eval_at(lifted, ("p1",), VirtualPoint(258, 0))
    assert not engine.eval_at(lifted, ("p1",), VirtualPoint(259, 5))
    with pytest.raises(KBValidationError):
        engine.eval_at(lifted, ("p1",), VirtualPoint(166, 2))


def test_unrooted_leaf_is_rejected(chemo_service):
    engine = MtncqService(chemo_service.normalized, chemo_service.table)
    with pytest.raises(KBValidationError):
        engine.lift_rewrite(parse_query("q() := NEXT {ChemotherapyPatient(y)}"))


def test_skeleton_lists_n(chemo_service, chemo_query):
    skeleton = MtncqService(chemo_service.normalized, chemo_service.table).skeleton(chemo_query)
    assert skeleton.splitlines()[-1] == "N = 270"
    assert skeleton.startswith("q(x) := ")


def test_unknown_comparator(chemo_service):
    with pytest.raises(KBValidationError):
        MtncqService(chemo_service.normalized, chemo_service.table, comparator="float")


@pytest.mark.parametrize("lo,hi", [(0, 0), (-3, 2), (2, 7), (-5, -1)])
def test_comparators_agree_on_offsets(lo, hi):
    bits = BitComparator(8)
    integer = IntegerComparator()
    for u in range(-20, 21, 3):
        for v in range(-20, 21):
            assert bits.offset_within(u, v, lo, hi) == integer.offset_within(u, v, lo, hi)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_truth_values_are_constant_away_from_the_data(seed):
    instance = random_instance(seed, temporal=True)
    spread = re.sub(r"@ (-?\d+)", lambda m: f"@ {int(m.group(1)) * 100}", instance.kb_text)
    service = service_for(spread)
    assume(service.consistent())
    n = compute_n(instance.query.formula)
    tem = sorted(set(service.normalized.tem))
    regions = [IntervalSet.of([(NEG_INF, tem[0] - n - 1)]), IntervalSet.of([(tem[-1] + n + 1, POS_INF)])]
    regions += [IntervalSet.of([(x + n + 1, y - n - 1)]) for x, y in zip(tem, tem[1:]) if y - x > 2 * n + 2]

    result = MtncqService(service.normalized, service.table).answer_intervals(instance.query)
    for answer in result.tuples():
        times = result.intervals(answer)
        for region in regions:
            assert region.issubset(times) or (region & times).is_empty(), (answer, region)
