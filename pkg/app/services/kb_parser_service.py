"""
Knowledge base text format.

One statement per line, `#` starts a comment line:

    BreastCancer EQV Cancer AND some findingSite . BreastStructure
    conv[120] ChemotherapyPatient SUB ChemotherapyPatient
    role hasPart SUB hasComponent
    ChemotherapyPatient(p1) @ 167
    diagnosedWith(p3, c3)
    (Cancer AND some findingSite . SkinStructure)(c4)
"""
from pathlib import Path
from typing import List, Optional, Union

from pyparsing import (
    Combine,
    Group,
    Keyword,
    MatchFirst,
    Optional as Opt,
    ParseException,
    ParserElement,
    Regex,
    Suppress,
    Word,
    alphanums,
    alphas,
    infixNotation,
    oneOf,
    opAssoc,
)

from app.core.exceptions import KBValidationError, ParseError, SourceLocation
from app.core.logging import get_logger
from app.models.assertions import Assertion, ConceptAssertion, RoleAssertion
from app.models.axioms import ConceptInclusion, RawAxiom, RoleInclusion
from app.models.concepts import And, Bot, Concept, Diam, Exists, Name, Top, has_diamond, render_concept
from app.models.diamond import DiamondKind, DiamondOp
from app.models.knowledge_base import KnowledgeBase, validate_time_stamps

logger = get_logger("services.kb_parser")

ParserElement.enablePackrat()

TIME_MIN = -(2 ** 63)
TIME_MAX = 2 ** 63 - 1

KB_KEYWORDS = ["AND", "SUB", "EQV", "some", "role", "top", "bot", "diaPF", "diaP", "diaF", "conv"]


class _SomePrefix:
    def __init__(self, role: str):
        self.role = role


def _diamond_action(tokens) -> DiamondOp:
    text = tokens[0]
    if text.startswith("conv["):
        return DiamondOp(DiamondKind.CONVEX_N, int(text[5:-1]))
    return DiamondOp(DiamondKind(text))


def _prefix_action(tokens) -> Concept:
    op, operand = tokens[0][0], tokens[0][1]
    if isinstance(op, _SomePrefix):
        return Exists(op.role, operand)
    return Diam(op, operand)


def _and_action(tokens) -> Concept:
    items = tokens[0][0::2]
    result = items[0]
    for item in items[1:]:
        result = And(result, item)
    return result


def _build_grammar():
    keyword = MatchFirst([Keyword(k) for k in KB_KEYWORDS])
    identifier = Combine(~keyword + Word(alphas, alphanums + "_"))
    integer = Regex(r"[+-]?\d+")

    top = Keyword("top").setParseAction(lambda: Top())
    bot = Keyword("bot").setParseAction(lambda: Bot())
    name = identifier.copy().setParseAction(lambda t: Name(t[0]))

    some_prefix = (Keyword("some") + identifier + Suppress(".")).setParseAction(lambda t: _SomePrefix(t[1]))
    diamond = Regex(r"(diaPF|diaP|diaF|conv\[[1-9]\d*\]|conv)(?![A-Za-z0-9_])").setParseAction(_diamond_action)

    concept = infixNotation(
        top | bot | name,
        [
            (some_prefix | diamond, 1, opAssoc.RIGHT, _prefix_action),
            (Keyword("AND"), 2, opAssoc.LEFT, _and_action),
        ],
    )

    inclusion = concept("lhs") + oneOf("SUB EQV", asKeyword=True)("kind") + concept("rhs")
    role_inclusion = Keyword("role") + identifier("sub") + oneOf("SUB EQV", asKeyword=True)("kind") + identifier("sup")

    time_stamp = Opt(Suppress("@") + integer("time"))
    subject = identifier("predicate") | (Suppress("(") + concept("complex") + Suppress(")"))
    assertion = (
        subject
        + Suppress("(")
        + identifier("first")
        + Opt(Suppress(",") + identifier("second"))
        + Suppress(")")
        + time_stamp
    )

    return Group(role_inclusion)("role_axiom") | Group(assertion)("assertion") | Group(inclusion)("axiom")


_STATEMENT = _build_grammar()


class KBParserService:
    """Parse and serialize the line-oriented knowledge base format."""

    def __init__(self, source: str = "<kb>"):
        self.source = source

    def parse(self, text: str) -> KnowledgeBase:
        axioms: List[RawAxiom] = []
        assertions: List[Assertion] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            indent = len(line) - len(line.lstrip())
            try:
                parsed = _STATEMENT.parseString(stripped, parseAll=True)
            except ParseException as exc:
                location = SourceLocation(self.source, lineno, indent + exc.col)
                raise ParseError(f"syntax error: {exc.msg}", location) from exc
            location = SourceLocation(self.source, lineno, indent + 1)
            if "role_axiom" in parsed:
                axioms.extend(self._role_axioms(parsed["role_axiom"], location))
            elif "assertion" in parsed:
                assertions.append(self._assertion(parsed["assertion"], location))
            else:
                axioms.extend(self._concept_axioms(parsed["axiom"], location))

        kb = KnowledgeBase(raw_tbox=tuple(axioms), abox=tuple(assertions), source=self.source)
        validate_time_stamps(kb)
        logger.info(
            f"Parsed {self.source}: {len(axioms)} axioms, {len(assertions)} assertions, mode {kb.mode.value}"
        )
        return kb

    def parse_file(self, path: Union[str, Path]) -> KnowledgeBase:
        path = Path(path)
        self.source = str(path)
        return self.parse(path.read_text(encoding="utf-8"))

    def _role_axioms(self, group, location: SourceLocation) -> List[RoleInclusion]:
        sub, sup = group["sub"], group["sup"]
        if group["kind"] == "EQV":
            return [RoleInclusion(sub, sup, location), RoleInclusion(sup, sub, location)]
        return [RoleInclusion(sub, sup, location)]

    def _concept_axioms(self, group, location: SourceLocation) -> List[ConceptInclusion]:
        lhs, rhs = group["lhs"], group["rhs"]
        if group["kind"] == "EQV":
            for side in (lhs, rhs):
                if has_diamond(side):
                    raise KBValidationError(
                        f"{render_concept(side)} is not an atemporal concept; diamonds cannot occur in an equivalence",
                        location,
                    )
            return [ConceptInclusion(lhs, rhs, location), ConceptInclusion(rhs, lhs, location)]
        if has_diamond(rhs):
            raise KBValidationError(
                f"{render_concept(rhs)} is not an atemporal concept; diamonds are only allowed on the left-hand side",
                location,
            )
        return [ConceptInclusion(lhs, rhs, location)]

    def _assertion(self, group, location: SourceLocation) -> Assertion:
        time = self._time(group.get("time"), location)
        first, second = group["first"], group.get("second")
        if "complex" in group:
            concept = group["complex"]
            if second is not None:
                raise KBValidationError("a concept assertion takes exactly one individual", location)
            if has_diamond(concept):
                raise KBValidationError(
                    f"{render_concept(concept)} is not an atemporal concept; assertions cannot use diamonds",
                    location,
                )
            return ConceptAssertion(concept, first, time, location)
        predicate = group["predicate"]
        if second is None:
            return ConceptAssertion(Name(predicate), first, time, location)
        return RoleAssertion(predicate, first, second, time, location)

    @staticmethod
    def _time(raw: Optional[str], location: SourceLocation) -> Optional[int]:
        if raw is None:
            return None
        value = int(raw)
        if not TIME_MIN <= value <= TIME_MAX:
            raise KBValidationError(f"time stamp {raw} is outside the signed 64-bit range", location)
        return value


def serialize_kb(kb: KnowledgeBase) -> str:
    """Render the raw TBox and the ABox in the knowledge base format."""
    lines = [axiom.render() for axiom in kb.raw_tbox]
    lines += [assertion.render() for assertion in kb.abox]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_kb(text: str, source: str = "<kb>") -> KnowledgeBase:
    return KBParserService(source).parse(text)
