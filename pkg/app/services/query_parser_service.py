"""
Query text format.

    q(x) := {diagnosedWith(x,y), Cancer(y), findingSite(y,z), BreastStructure(z), not SkinStructure(z)}
    q(x) := BOX[-90,0]{T(x)} AND NOT BOX[-180,0]{T(x)}
    q() := {A(x)} U[1,inf] {B(x)}

Bare identifiers inside atoms are variables, double-quoted names are individuals.
"""
from pathlib import Path
from typing import List, Union

from pyparsing import (
    Group,
    Keyword,
    MatchFirst,
    Optional as Opt,
    ParseBaseException,
    ParseFatalException,
    QuotedString,
    Regex,
    Suppress,
    Word,
    alphanums,
    alphas,
    delimitedList,
    infixNotation,
    opAssoc,
)

from app.core.exceptions import KBValidationError, ParseError, SourceLocation
from app.core.logging import get_logger
from app.models.concepts import BOT, FRESH_PREFIX, TOP
from app.models.interval_set import NEG_INF, POS_INF
from app.models.mtncq import (
    MTNCQ,
    AndNode,
    Box,
    Dia,
    FalseNode,
    Formula,
    Leaf,
    Next,
    Not,
    OrNode,
    Prev,
    Since,
    TemporalInterval,
    TrueNode,
    Until,
    leaf_head,
    map_leaves,
    walk,
)
from app.models.query import ConceptAtom, Const, FilteredQuery, RoleAtom, Var, check_guarded

logger = get_logger("services.query_parser")

QUERY_KEYWORDS = ["NOT", "AND", "OR", "U", "S", "BOX", "DIA", "NEXT", "PREV", "TRUE", "FALSE", "not"]


class _Prefix:
    def __init__(self, kind: str, interval: TemporalInterval = None):
        self.kind = kind
        self.interval = interval


class _Infix:
    def __init__(self, kind: str, interval: TemporalInterval):
        self.kind = kind
        self.interval = interval


def _bound_action(tokens):
    text = tokens[0]
    if text == "-inf":
        return NEG_INF
    if text in ("inf", "+inf"):
        return POS_INF
    return int(text)


def _interval_action(text, loc, tokens):
    try:
        return TemporalInterval(tokens[0], tokens[1])
    except KBValidationError as exc:
        raise ParseFatalException(text, loc, exc.detail) from exc


def _atom_action(tokens):
    negated = tokens[0] == "not"
    body = tokens[1:] if negated else tokens[:]
    predicate, terms = body[0], list(body[1])
    if len(terms) == 1:
        return ConceptAtom(predicate, terms[0], negated)
    return RoleAtom(predicate, terms[0], terms[1], negated)


def _prefix_action(tokens):
    op, operand = tokens[0][0], tokens[0][1]
    if op.kind == "NOT":
        return Not(operand)
    if op.kind == "BOX":
        return Box(op.interval, operand)
    if op.kind == "DIA":
        return Dia(op.interval, operand)
    if op.kind == "NEXT":
        return Next(operand)
    return Prev(operand)


def _temporal_infix_action(tokens):
    items = tokens[0]
    result = items[0]
    for op, operand in zip(items[1::2], items[2::2]):
        node = Until if op.kind == "U" else Since
        result = node(op.interval, result, operand)
    return result


def _fold(node_type):
    def action(tokens):
        items = tokens[0][0::2]
        result = items[0]
        for item in items[1:]:
            result = node_type(result, item)
        return result
    return action


def _build_grammar():
    keyword = MatchFirst([Keyword(k) for k in QUERY_KEYWORDS])
    identifier = Word(alphas, alphanums + "_")
    variable = (~keyword + identifier.copy()).setParseAction(lambda t: Var(t[0]))
    constant = QuotedString('"').setParseAction(lambda t: Const(t[0]))
    term = constant | variable

    bound = Regex(r"-inf|\+?inf|[+-]?\d+").setParseAction(_bound_action)
    interval = (Suppress("[") + bound + Suppress(",") + bound + Suppress("]")).setParseAction(_interval_action)

    atom = (
        Opt(Keyword("not"))
        + identifier
        + Suppress("(")
        + Group(term + Opt(Suppress(",") + term))
        + Suppress(")")
    ).setParseAction(_atom_action)
    ncq = (Suppress("{") + Group(delimitedList(atom)) + Suppress("}")).setParseAction(
        lambda t: Leaf(FilteredQuery(head=(), atoms=frozenset(t[0])))
    )
    constant_formula = Keyword("TRUE").setParseAction(lambda: TrueNode()) | Keyword("FALSE").setParseAction(
        lambda: FalseNode()
    )

    prefix = (
        Keyword("NOT").setParseAction(lambda: _Prefix("NOT"))
        | (Keyword("BOX") + interval).setParseAction(lambda t: _Prefix("BOX", t[1]))
        | (Keyword("DIA") + interval).setParseAction(lambda t: _Prefix("DIA", t[1]))
        | Keyword("NEXT").setParseAction(lambda: _Prefix("NEXT"))
        | Keyword("PREV").setParseAction(lambda: _Prefix("PREV"))
    )
    temporal_infix = (Keyword("U") + interval).setParseAction(lambda t: _Infix("U", t[1])) | (
        Keyword("S") + interval
    ).setParseAction(lambda t: _Infix("S", t[1]))

    formula = infixNotation(
        ncq | constant_formula,
        [
            (prefix, 1, opAssoc.RIGHT, _prefix_action),
            (temporal_infix, 2, opAssoc.LEFT, _temporal_infix_action),
            (Keyword("AND"), 2, opAssoc.LEFT, _fold(AndNode)),
            (Keyword("OR"), 2, opAssoc.LEFT, _fold(OrNode)),
        ],
    )

    head_vars = Group(Opt(delimitedList(variable)))
    return identifier("name") + Suppress("(") + head_vars("head") + Suppress(")") + Suppress(":=") + formula("formula")


_QUERY = _build_grammar()


class QueryParserService:
    """Parse MTNCQs (and plain NCQs) and validate their leaves."""

    def __init__(self, source: str = "<query>"):
        self.source = source

    def parse(self, text: str) -> MTNCQ:
        body = text.strip()
        if not body:
            raise ParseError("empty query", SourceLocation(self.source, 1, 1))
        try:
            parsed = _QUERY.parseString(body, parseAll=True)
        except ParseBaseException as exc:
            raise ParseError(f"syntax error: {exc.msg}", SourceLocation(self.source, exc.lineno, exc.col)) from exc

        location = SourceLocation(self.source, 1, 1)
        head = tuple(parsed["head"])
        if len(set(head)) != len(head):
            raise KBValidationError("answer variables must be distinct", location)

        def attach(leaf: Leaf) -> Leaf:
            query = leaf.query
            return Leaf(FilteredQuery(head=leaf_head(head, query), atoms=query.atoms, location=location))

        formula: Formula = map_leaves(parsed["formula"], attach)
        self._validate(formula, location)
        query = MTNCQ(head=head, formula=formula, location=location)
        logger.info(f"Parsed query {self.source}: {len(query.leaves)} leaves, temporal={query.is_temporal}")
        return query

    def parse_file(self, path: Union[str, Path]) -> MTNCQ:
        path = Path(path)
        self.source = str(path)
        return self.parse(path.read_text(encoding="utf-8"))

    def _validate(self, formula: Formula, location: SourceLocation) -> None:
        for node in walk(formula):
            if isinstance(node, (Until, Since)) and not node.interval.is_natural:
                raise KBValidationError(
                    f"malformed interval {node.interval}: U and S intervals range over natural numbers", location
                )
            if isinstance(node, Leaf):
                self._validate_leaf(node.query, location)

    @staticmethod
    def _validate_leaf(query: FilteredQuery, location: SourceLocation) -> None:
        for atom in query.atoms:
            symbol = atom.concept if isinstance(atom, ConceptAtom) else atom.role
            if symbol.startswith(FRESH_PREFIX):
                raise KBValidationError(f"{symbol} uses the reserved prefix {FRESH_PREFIX}", location)
            if isinstance(atom, ConceptAtom) and symbol == BOT:
                raise KBValidationError("bot cannot be used in a query atom", location)
            if isinstance(atom, RoleAtom) and symbol in (TOP, BOT):
                raise KBValidationError(f"{symbol} is a concept symbol", location)
        check_guarded(query)


def parse_query(text: str, source: str = "<query>") -> MTNCQ:
    return QueryParserService(source).parse(text)


def leaf_queries(query: MTNCQ) -> List[FilteredQuery]:
    return [leaf.query for leaf in query.leaves]
