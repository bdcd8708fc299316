import pytest

from app.core.exceptions import InconsistencyError
from app.services.canonical_model_service import CanonicalModelService
from tests.conftest import service_for


def named_part(service):
    return CanonicalModelService(service.normalized, service.table).build_named_part()


def test_named_part_is_saturated(cancer_service):
    interpretation = named_part(cancer_service)
    assert interpretation.named == {"p1", "p2", "p3", "c3"}
    assert interpretation.anonymous() == []
    assert interpretation.has("CancerPatient", "p3")
    assert interpretation.has("BreastCancerPatient", "p3")
    assert interpretation.has("SkinCancer", "c3")
    assert interpretation.holds("diagnosedWith", "p3", "c3")


def test_expansion_adds_one_child_per_minimal_restriction(cancer_service):
    service = CanonicalModelService(cancer_service.normalized, cancer_service.table)
    expanded = service.expand(service.build_named_part(), 1)

    def children(element):
        return [d for d in expanded.anonymous() if expanded.parent.get(d) == element]

    assert len(children("p1")) == 1
    assert len(children("p2")) == 2
    assert len(children("c3")) == 1
    assert children("p3") == []
    assert all(expanded.depth[d] == 1 for d in expanded.anonymous())


def test_expansion_child_carries_filler_subsumers(cancer_service):
    service = CanonicalModelService(cancer_service.normalized, cancer_service.table)
    expanded = service.expand(service.build_named_part(), 2)
    (child,) = [d for d in expanded.anonymous() if expanded.parent.get(d) == "p1"]
    assert expanded.has("BreastCancer", child)
    assert expanded.has("Cancer", child)
    assert expanded.holds("diagnosedWith", "p1", child)
    (site,) = [d for d in expanded.anonymous() if expanded.parent.get(d) == child]
    assert expanded.has("BreastStructure", site)
    assert not expanded.has("SkinStructure", site)


def test_expansion_respects_role_hierarchy():
    service = service_for("A SUB some r . B\nrole r SUB s\nA(a)\n")
    model = CanonicalModelService(service.normalized, service.table)
    expanded = model.expand(model.build_named_part(), 1)
    (child,) = expanded.anonymous()
    assert expanded.holds("r", "a", child)
    assert expanded.holds("s", "a", child)


def test_inconsistent_abox_raises_with_witness():
    service = service_for("A SUB bot\nA(a)\n")
    with pytest.raises(InconsistencyError) as info:
        named_part(service)
    assert "a" in str(info.value.witness)


def test_bot_through_a_role_successor():
    service = service_for("some r . B SUB bot\nr(a, b)\nB(b)\n")
    with pytest.raises(InconsistencyError):
        named_part(service)
