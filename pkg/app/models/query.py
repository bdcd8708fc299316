"""
Conjunctive queries with guarded negation and their filtered rewritings.

Terms are variables or individual names (constants). A FilteredQuery is an NCQ
plus a set of filters; a filter on subject z reads

    (∃z′. s(z,z′) ∧ N(z′))  →  (∃z′. s(z,z′) ∧ N(z′) ∧ ψ⁻(z,z′) ∧ Ψ(z′))

and binds its own variable z′, so filters carry no variable names.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple, Union

import networkx as nx

from app.core.exceptions import KBValidationError, SourceLocation
from app.models.concepts import TOP


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Const:
    name: str

    def __str__(self) -> str:
        return f'"{self.name}"'


Term = Union[Var, Const]

# subject of every nested filter: the variable bound by the enclosing filter
NESTED_SUBJECT = Var("_")


def term_key(term: Term) -> Tuple[int, str]:
    return (0 if isinstance(term, Var) else 1, term.name)


@dataclass(frozen=True)
class ConceptAtom:
    concept: str
    term: Term
    negated: bool = False

    @property
    def terms(self) -> Tuple[Term, ...]:
        return (self.term,)

    def rename(self, mapping: Mapping[Term, Term]) -> "ConceptAtom":
        return replace(self, term=mapping.get(self.term, self.term))

    def render(self) -> str:
        text = f"{self.concept}({self.term})"
        return f"not {text}" if self.negated else text


@dataclass(frozen=True)
class RoleAtom:
    role: str
    subject: Term
    object: Term
    negated: bool = False

    @property
    def terms(self) -> Tuple[Term, ...]:
        return (self.subject, self.object)

    def rename(self, mapping: Mapping[Term, Term]) -> "RoleAtom":
        return replace(
            self,
            subject=mapping.get(self.subject, self.subject),
            object=mapping.get(self.object, self.object),
        )

    def render(self) -> str:
        text = f"{self.role}({self.subject},{self.object})"
        return f"not {text}" if self.negated else text


Atom = Union[ConceptAtom, RoleAtom]


def atom_key(atom: Atom) -> Tuple:
    if isinstance(atom, ConceptAtom):
        return (atom.negated, 0, atom.concept, term_key(atom.term))
    return (atom.negated, 1, atom.role, term_key(atom.subject), term_key(atom.object))


@dataclass(frozen=True)
class Filter:
    subject: Term
    role: str
    concepts: FrozenSet[str]
    neg_concepts: FrozenSet[str] = frozenset()
    neg_roles: FrozenSet[str] = frozenset()
    nested: FrozenSet["Filter"] = frozenset()

    def rename_subject(self, mapping: Mapping[Term, Term]) -> "Filter":
        return replace(self, subject=mapping.get(self.subject, self.subject))

    def depth(self) -> int:
        return 1 + max((f.depth() for f in self.nested), default=0)

    def render(self, level: int = 1) -> str:
        z = f"f{level}"
        guard = [f"{self.role}({self.subject},{z})"] + [f"{c}({z})" for c in sorted(self.concepts)]
        body = list(guard)
        body += [f"NOT {c}({z})" for c in sorted(self.neg_concepts)]
        body += [f"NOT {r}({self.subject},{z})" for r in sorted(self.neg_roles)]
        body += [
            f.render(level + 1)
            for f in sorted((replace(f, subject=Var(z)) for f in self.nested), key=filter_key)
        ]
        return f"(EXISTS {z}. {' AND '.join(guard)} -> EXISTS {z}. {' AND '.join(body)})"


def filter_key(f: Filter) -> Tuple:
    return (
        term_key(f.subject),
        f.role,
        tuple(sorted(f.concepts)),
        tuple(sorted(f.neg_concepts)),
        tuple(sorted(f.neg_roles)),
        tuple(filter_key(n) for n in sorted(f.nested, key=filter_key)),
    )


@dataclass(frozen=True)
class NCQ:
    head: Tuple[Term, ...]
    atoms: FrozenSet[Atom]
    location: Optional[SourceLocation] = field(default=None, compare=False)

    @property
    def positive(self) -> List[Atom]:
        return sorted((a for a in self.atoms if not a.negated), key=atom_key)

    @property
    def negative(self) -> List[Atom]:
        return sorted((a for a in self.atoms if a.negated), key=atom_key)

    @property
    def terms(self) -> Set[Term]:
        found: Set[Term] = {t for t in self.head}
        for atom in self.atoms:
            found.update(atom.terms)
        return found

    @property
    def variables(self) -> Set[Var]:
        return {t for t in self.terms if isinstance(t, Var)}

    @property
    def answer_variables(self) -> List[Var]:
        seen: List[Var] = []
        for t in self.head:
            if isinstance(t, Var) and t not in seen:
                seen.append(t)
        return seen

    @property
    def quantified_variables(self) -> Set[Var]:
        return self.variables - set(self.answer_variables)

    @property
    def constants(self) -> Set[Const]:
        return {t for t in self.terms if isinstance(t, Const)}

    @property
    def concept_symbols(self) -> Set[str]:
        return {a.concept for a in self.atoms if isinstance(a, ConceptAtom)}

    @property
    def role_symbols(self) -> Set[str]:
        return {a.role for a in self.atoms if isinstance(a, RoleAtom)}

    def leaf_variables(self) -> Set[Var]:
        subjects = {a.subject for a in self.atoms if isinstance(a, RoleAtom)}
        return {v for v in self.variables if v not in subjects}


@dataclass(frozen=True)
class FilteredQuery(NCQ):
    filters: FrozenSet[Filter] = frozenset()

    @classmethod
    def from_ncq(cls, query: NCQ) -> "FilteredQuery":
        if isinstance(query, FilteredQuery):
            return query
        return cls(head=query.head, atoms=query.atoms, location=query.location)

    @property
    def terms(self) -> Set[Term]:
        found = super().terms
        found.update(f.subject for f in self.filters)
        return found

    def filters_on(self, term: Term) -> List[Filter]:
        return sorted((f for f in self.filters if f.subject == term), key=filter_key)

    def rename(self, mapping: Mapping[Term, Term]) -> "FilteredQuery":
        return FilteredQuery(
            head=tuple(mapping.get(t, t) for t in self.head),
            atoms=frozenset(a.rename(mapping) for a in self.atoms),
            filters=frozenset(f.rename_subject(mapping) for f in self.filters),
            location=self.location,
        )


def nested_filter_depth(query: NCQ) -> int:
    """Maximum nesting of filters; 0 for a query without filters."""
    filters = getattr(query, "filters", frozenset())
    return max((f.depth() for f in filters), default=0)


def render_query(query: NCQ, name: str = "q") -> str:
    """First-order text rendering; filters appear as implications."""
    head = ",".join(str(t) for t in query.head)
    quantified = sorted(v.name for v in query.quantified_variables)
    parts = [a.render().replace("not ", "NOT ", 1) for a in sorted(query.atoms, key=atom_key)]
    filters = getattr(query, "filters", frozenset())
    parts += [f.render() for f in sorted(filters, key=filter_key)]
    body = " AND ".join(parts) if parts else "TRUE"
    prefix = f"EXISTS {','.join(quantified)}. " if quantified else ""
    return f"{name}({head}) := {prefix}{body}"


def render_ncq(query: NCQ, name: str = "q") -> str:
    """Render in the query grammar (braced atom list)."""
    head = ",".join(str(t) for t in query.head)
    atoms = ", ".join(a.render() for a in sorted(query.atoms, key=atom_key))
    return f"{name}({head}) := {{{atoms}}}"


def canonical_form(query: FilteredQuery) -> FilteredQuery:
    """
    Rename variables to v0, v1, ... in a fixed traversal: head variables first,
    then repeatedly the unnamed variable with the least occurrence signature.
    """
    mapping: Dict[Term, Term] = {}
    for term in query.head:
        if isinstance(term, Var) and term not in mapping:
            mapping[term] = Var(f"v{len(mapping)}")

    def show(term: Term, pivot: Var) -> str:
        if term == pivot:
            return "#"
        if isinstance(term, Const):
            return str(term)
        return mapping[term].name if term in mapping else "?"

    def signature(v: Var) -> Tuple:
        sig = []
        for atom in query.atoms:
            if v not in atom.terms:
                continue
            if isinstance(atom, ConceptAtom):
                sig.append((atom.negated, atom.concept, show(atom.term, v)))
            else:
                sig.append((atom.negated, atom.role, show(atom.subject, v), show(atom.object, v)))
        for f in query.filters:
            if f.subject == v:
                sig.append((False, "filter", filter_key(replace(f, subject=Const("#")))))
        return tuple(sorted(sig, key=repr))

    remaining = sorted(query.variables - set(mapping), key=lambda v: v.name)
    while remaining:
        pick = min(remaining, key=lambda v: (repr(signature(v)), v.name))
        mapping[pick] = Var(f"v{len(mapping)}")
        remaining.remove(pick)
    return query.rename(mapping)


def query_graph(query: NCQ) -> nx.Graph:
    """Undirected term graph over role atoms."""
    graph = nx.Graph()
    graph.add_nodes_from(query.terms)
    for atom in query.atoms:
        if isinstance(atom, RoleAtom):
            graph.add_edge(atom.subject, atom.object)
    return graph


def is_rooted(query: NCQ) -> bool:
    """Every variable is connected through role atoms to an answer variable or a constant."""
    graph = query_graph(query)
    anchors = set(query.answer_variables) | query.constants
    for component in nx.connected_components(graph):
        if not any(term in anchors for term in component):
            return False
    return True


def unguarded_atoms(query: NCQ) -> List[Atom]:
    positive = [a for a in query.atoms if not a.negated]
    covered_terms = {t for a in positive for t in a.terms}
    covered_pairs = {frozenset(a.terms) for a in positive if isinstance(a, RoleAtom)}
    offending = []
    for atom in query.negative:
        if isinstance(atom, ConceptAtom):
            if atom.term not in covered_terms:
                offending.append(atom)
        elif frozenset(atom.terms) not in covered_pairs:
            offending.append(atom)
    return offending


def check_guarded(query: NCQ) -> None:
    offending = unguarded_atoms(query)
    if offending:
        raise KBValidationError(
            f"negated atom {offending[0].render()} is not guarded by a positive atom over the same terms",
            query.location,
        )
    for term in query.head:
        if isinstance(term, Var) and not any(term in a.terms for a in query.atoms if not a.negated):
            if query.atoms:
                raise KBValidationError(
                    f"answer variable {term} does not occur in a positive atom", query.location
                )


def make_ncq(head: Iterable[Term], atoms: Iterable[Atom]) -> FilteredQuery:
    return FilteredQuery(head=tuple(head), atoms=frozenset(atoms))


def top_atom(term: Term) -> ConceptAtom:
    return ConceptAtom(TOP, term)
