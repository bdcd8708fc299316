"""
Machine-readable output: answers, saturation results, expansions and rewritings.

Every writer orders its output deterministically and leaves out fresh names
introduced by normalization.
"""
import csv
from typing import Iterable, List

import pandas as pd

from app.models.answer_set import AnswerSet
from app.models.concepts import FRESH_PREFIX, TOP
from app.models.interpretation import FiniteInterpretation
from app.models.query import NCQ, Filter, FilteredQuery, atom_key, filter_key, render_query
from app.models.temporal import TemporalExtensionMap
from app.schemas.answer import AnswerEntry, AnswerSetResponse
from app.schemas.interpretation import EdgeDump, ElementDump, InterpretationDump
from app.schemas.rewriting import FilterDump, RewritingDump, RewritingSetResponse
from app.schemas.saturation import RoleExtension, SaturationDump

FORMATS = ("json", "csv")


def _visible(name: str) -> bool:
    return not name.startswith(FRESH_PREFIX)


def answers_to_json(answers: AnswerSet) -> str:
    entries = [
        AnswerEntry(
            tuple=list(answer),
            intervals=answers.intervals(answer).to_list() if answers.temporal else None,
        )
        for answer in answers.tuples()
    ]
    return AnswerSetResponse(answers=entries).model_dump_json(by_alias=True, exclude_none=True)


def answers_to_csv(answers: AnswerSet) -> str:
    """One row per tuple, or per tuple and maximal interval for temporal answers."""
    columns = [f"arg{k + 1}" for k in range(answers.arity)]
    rows = []
    for answer in answers.tuples():
        if answers.temporal:
            for lo, hi in answers.intervals(answer).to_list():
                rows.append(list(answer) + [lo, hi])
        else:
            rows.append(list(answer))
    if answers.temporal:
        columns += ["from", "to"]
    if not columns:
        # Boolean atemporal query: a single "answer" column
        columns, rows = ["answer"], [["true"] for _ in rows]
    frame = pd.DataFrame(rows, columns=columns)
    return frame.to_csv(index=False, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)


def write_answers(answers: AnswerSet, fmt: str = "json") -> str:
    if fmt == "csv":
        return answers_to_csv(answers)
    return answers_to_json(answers) + "\n"


def saturation_dump(extensions: TemporalExtensionMap, representatives: Iterable[int]) -> SaturationDump:
    individuals = {ind: {} for ind in sorted(extensions.individuals)}
    for (individual, concept), times in sorted(extensions.concepts.items()):
        if _visible(concept) and concept != TOP and times:
            individuals[individual][concept] = times.to_list()
    roles = [
        RoleExtension(role=role, subject=subject, object=obj, intervals=times.to_list())
        for (role, subject, obj), times in sorted(extensions.roles.items())
        if times
    ]
    return SaturationDump(individuals=individuals, roles=roles, representatives=sorted(representatives))


def interpretation_dump(interpretation: FiniteInterpretation) -> InterpretationDump:
    def element_key(d: str):
        return (interpretation.depth.get(d, 0), d)

    elements = [
        ElementDump(
            id=d,
            named=d in interpretation.named,
            depth=interpretation.depth.get(d, 0),
            parent=interpretation.parent.get(d),
            concepts=sorted(c for c in interpretation.type_of(d) if _visible(c) and c != TOP),
        )
        for d in sorted(interpretation.domain, key=element_key)
    ]
    edges = [
        EdgeDump(role=role, from_=source, to=target)
        for role, pairs in sorted(interpretation.roles.items())
        for source, target in sorted(pairs)
    ]
    return InterpretationDump(elements=elements, edges=edges)


def filter_dump(f: Filter) -> FilterDump:
    return FilterDump(
        subject=str(f.subject),
        role=f.role,
        concepts=sorted(f.concepts),
        negated_concepts=sorted(f.neg_concepts),
        negated_roles=sorted(f.neg_roles),
        nested=[filter_dump(n) for n in sorted(f.nested, key=filter_key)],
    )


def rewriting_dump(query: NCQ) -> RewritingDump:
    atoms = sorted(query.atoms, key=atom_key)
    filters = sorted(getattr(query, "filters", frozenset()), key=filter_key)
    return RewritingDump(
        head=[str(t) for t in query.head],
        atoms=[a.render() for a in atoms if not a.negated],
        negated=[a.render()[len("not "):] for a in atoms if a.negated],
        filters=[filter_dump(f) for f in filters],
        text=render_query(query),
    )


def rewritings_to_json(rewritings: List[FilteredQuery]) -> str:
    return RewritingSetResponse(rewritings=[rewriting_dump(q) for q in rewritings]).model_dump_json(indent=2)


def rewritings_to_text(rewritings: List[FilteredQuery]) -> str:
    return "".join(render_query(q, name=f"q{k}") + "\n" for k, q in enumerate(rewritings))


def dump_json(model) -> str:
    return model.model_dump_json(indent=2, by_alias=True)
