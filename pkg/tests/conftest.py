from pathlib import Path

import pytest

from app.models.axioms import ConjCI, ExistsLHS, ExistsRHS, RoleCI
from app.models.concepts import And, Bot, Exists, Name, Top
from app.models.diamond import DiamondKind
from app.services.kb_parser_service import parse_kb
from app.services.kb_service import KBService
from app.services.query_parser_service import parse_query

BUNDLES = Path(__file__).resolve().parent.parent / "bundles"

CANCER_KB = """
SkinCancer EQV Cancer AND some findingSite . SkinStructure
BreastCancer EQV Cancer AND some findingSite . BreastStructure
SkinOfBreastCancer EQV Cancer AND some findingSite . SkinOfBreastStructure
SkinOfBreastStructure SUB BreastStructure AND SkinStructure
CancerPatient EQV some diagnosedWith . Cancer
SkinCancerPatient EQV some diagnosedWith . SkinCancer
BreastCancerPatient EQV some diagnosedWith . BreastCancer
BreastCancerPatient(p1)
CancerPatient(p1)
SkinCancerPatient(p2)
BreastCancerPatient(p2)
diagnosedWith(p3, c3)
SkinOfBreastCancer(c3)
"""

CANCER_QUERY = (
    "q(x) := {diagnosedWith(x,y), Cancer(y), findingSite(y,z), BreastStructure(z), not SkinStructure(z)}"
)

CHEMO_KB = """
ChemotherapyPatient SUB CancerPatient
conv[365] CancerPatient SUB CancerPatient
conv[120] ChemotherapyPatient SUB ChemotherapyPatient
ChemotherapyPatient(p1) @ 0
ChemotherapyPatient(p1) @ 167
ChemotherapyPatient(p1) @ 258
"""

CHEMO_QUERY = "q(x) := BOX[-90,0]{ChemotherapyPatient(x)} AND NOT BOX[-180,0]{ChemotherapyPatient(x)}"


@pytest.fixture
def cancer_service():
    return KBService(parse_kb(CANCER_KB, source="cancer"))


@pytest.fixture
def chemo_service():
    return KBService(parse_kb(CHEMO_KB, source="chemotherapy"))


@pytest.fixture
def cancer_query():
    return parse_query(CANCER_QUERY)


@pytest.fixture
def chemo_query():
    return parse_query(CHEMO_QUERY)


@pytest.fixture
def bundles_dir():
    return BUNDLES


def service_for(text: str) -> KBService:
    return KBService(parse_kb(text))


def concept_holds(model, element: str, concept) -> bool:
    """Evaluate a concept expression at an element of a finite interpretation."""
    if isinstance(concept, Top):
        return True
    if isinstance(concept, Bot):
        return False
    if isinstance(concept, Name):
        return model.has(concept.name, element)
    if isinstance(concept, And):
        return concept_holds(model, element, concept.left) and concept_holds(model, element, concept.right)
    if isinstance(concept, Exists):
        return any(concept_holds(model, e, concept.filler) for e in model.successors(concept.role, element))
    raise TypeError(f"no atemporal reading for {concept!r}")


def violated_normal_axioms(model, tbox) -> list:
    """Normal axioms some element of the model does not satisfy."""
    violated = []
    for axiom in tbox:
        if isinstance(axiom, ConjCI):
            holds = all(
                model.has(axiom.sup, d)
                for d in model.domain
                if model.has(axiom.left, d) and model.has(axiom.right, d)
            )
        elif isinstance(axiom, ExistsRHS):
            holds = all(
                any(model.has(axiom.filler, e) for e in model.successors(axiom.role, d))
                for d in model.domain
                if model.has(axiom.sub, d)
            )
        elif isinstance(axiom, ExistsLHS):
            holds = all(
                model.has(axiom.sup, d)
                for d in model.domain
                if any(model.has(axiom.filler, e) for e in model.successors(axiom.role, d))
            )
        elif isinstance(axiom, RoleCI):
            holds = all(
                model.holds(axiom.sup, d, e) for d in model.domain for e in model.successors(axiom.sub, d)
            )
        else:
            continue
        if not holds:
            violated.append(axiom.render())
    return violated


def instance_tbox(kb_text: str) -> str:
    """The axiom lines of a generated knowledge base, without its assertions."""
    return "".join(line + "\n" for line in kb_text.splitlines() if "(" not in line)


def diamond_holds(op, member, t: int, lo: int, hi: int) -> bool:
    """Pointwise reading of a diamond at t, with witnesses searched in [lo, hi]."""
    if op.kind == DiamondKind.CONVEX_N:
        return any(
            member(s1) and member(s2)
            for s1 in range(max(lo, t - op.n + 1), t + 1)
            for s2 in range(t, min(hi, s1 + op.n - 1) + 1)
        )
    witnesses = [s for s in range(lo, hi + 1) if member(s)]
    before = any(s <= t for s in witnesses)
    after = any(s >= t for s in witnesses)
    if op.kind == DiamondKind.PAST:
        return before
    if op.kind == DiamondKind.FUTURE:
        return after
    if op.kind == DiamondKind.ANY_TIME:
        return bool(witnesses)
    return before and after
