"""
Seeded random knowledge bases and queries for equivalence trials.
"""
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.core.logging import get_logger
from app.models.knowledge_base import KnowledgeBase
from app.models.mtncq import MTNCQ
from app.services.kb_parser_service import parse_kb
from app.services.kb_service import KBService
from app.services.query_parser_service import parse_query

logger = get_logger("services.instance_generator")

MAX_ATTEMPTS = 20


@dataclass(frozen=True)
class InstanceLimits:
    concepts: int = 5
    roles: int = 3
    axioms: int = 10
    individuals: int = 6
    time_points: int = 4
    atoms: int = 4
    temporal_operators: int = 2


@dataclass(frozen=True)
class Instance:
    seed: int
    kb_text: str
    query_text: str
    kb: KnowledgeBase
    query: MTNCQ
    temporal: bool


class InstanceGenerator:
    """
    Deterministic per seed: the same seed and limits always produce the same texts.

    Generated queries are rooted and guarded by construction; knowledge bases that
    turn out inconsistent are redrawn from the same random stream.
    """

    def __init__(self, seed: int, temporal: bool = False, limits: Optional[InstanceLimits] = None):
        self.seed = seed
        self.temporal = temporal
        self.limits = limits or InstanceLimits()
        self.rng = random.Random(f"{seed}:{'temporal' if temporal else 'atemporal'}")

    def generate(self) -> Instance:
        for attempt in range(MAX_ATTEMPTS):
            kb_text = self._kb_text(allow_bot=attempt < MAX_ATTEMPTS - 1)
            kb = parse_kb(kb_text, source=f"seed-{self.seed}")
            if KBService(kb).consistent():
                break
            logger.debug(f"Seed {self.seed}: attempt {attempt} inconsistent, redrawing")
        self._individuals = sorted(kb.individuals)
        query_text = self._query_text()
        query = parse_query(query_text, source=f"seed-{self.seed}")
        return Instance(self.seed, kb_text, query_text, kb, query, self.temporal)

    def _names(self) -> Tuple[List[str], List[str], List[str]]:
        limits = self.limits
        concepts = [chr(ord("A") + k) for k in range(self.rng.randint(2, limits.concepts))]
        roles = ["r", "s", "t"][: self.rng.randint(1, limits.roles)]
        individuals = [f"a{k}" for k in range(1, self.rng.randint(1, limits.individuals) + 1)]
        return concepts, roles, individuals

    def _kb_text(self, allow_bot: bool) -> str:
        rng = self.rng
        concepts, roles, individuals = self._names()
        self._signature = (concepts, roles, individuals)
        shapes = ["sub", "sub", "conj", "exists_rhs", "exists_rhs", "exists_lhs", "role"]
        if allow_bot:
            shapes.append("bot")
        if self.temporal:
            shapes += ["diamond", "diamond"]

        lines = []
        for _ in range(rng.randint(1, self.limits.axioms)):
            shape = rng.choice(shapes)
            a, b, c = (rng.choice(concepts) for _ in range(3))
            r, s = rng.choice(roles), rng.choice(roles)
            if shape == "sub":
                lines.append(f"{a} SUB {b}")
            elif shape == "conj":
                lines.append(f"{a} AND {b} SUB {c}")
            elif shape == "exists_rhs":
                lines.append(f"{a} SUB some {r} . {b}")
            elif shape == "exists_lhs":
                lines.append(f"some {r} . {a} SUB {b}")
            elif shape == "role":
                if r != s:
                    lines.append(f"role {r} SUB {s}")
            elif shape == "bot":
                lines.append(f"{a} AND {b} SUB bot")
            else:
                op = rng.choice(["diaP", "diaF", "diaPF", "conv", f"conv[{rng.randint(1, 4)}]"])
                lines.append(f"{op} {a} SUB {b}")

        times = sorted(rng.sample(range(-3, 10), rng.randint(1, self.limits.time_points)))
        for _ in range(rng.randint(1, 2 * len(individuals) + 1)):
            stamp = f" @ {rng.choice(times)}" if self.temporal else ""
            if rng.random() < 0.6 or len(individuals) == 1:
                lines.append(f"{rng.choice(concepts)}({rng.choice(individuals)}){stamp}")
            else:
                subject, obj = rng.sample(individuals, 2)
                lines.append(f"{rng.choice(roles)}({subject}, {obj}){stamp}")
        return "\n".join(lines) + "\n"

    def _leaf(self, root: str, budget: int) -> str:
        """A rooted guarded NCQ body hanging off root: a tree of role atoms plus concept atoms."""
        rng = self.rng
        concepts, roles, _ = self._signature
        terms = [root]
        positive: List[str] = []
        negated: List[str] = []
        role_pairs: List[Tuple[str, str, str]] = []
        fresh = 0
        for _ in range(budget):
            kind = rng.random()
            if kind < 0.35 and fresh < 3:
                fresh += 1
                child = f"y{fresh}"
                parent = rng.choice(terms)
                role = rng.choice(roles)
                positive.append(f"{role}({parent},{child})")
                role_pairs.append((role, parent, child))
                terms.append(child)
            elif kind < 0.75 or not positive:
                positive.append(f"{rng.choice(concepts)}({rng.choice(terms)})")
            elif kind < 0.9 or not role_pairs:
                negated.append(f"not {rng.choice(concepts)}({rng.choice(terms)})")
            else:
                role, parent, child = rng.choice(role_pairs)
                others = [r for r in roles if r != role]
                if others:
                    negated.append(f"not {rng.choice(others)}({parent},{child})")
        if not any(p.endswith(f"({root})") or f"({root}," in p for p in positive):
            positive.append(f"{rng.choice(concepts)}({root})")
        return "{" + ", ".join(positive + negated) + "}"

    def _query_text(self) -> str:
        rng = self.rng
        if rng.random() < 0.25:
            head, root = "", f'"{rng.choice(self._individuals)}"'
        else:
            head, root = "x", "x"
        if not self.temporal:
            formula = self._leaf(root, rng.randint(1, self.limits.atoms))
            if rng.random() < 0.2:
                formula = f"{formula} AND NOT {self._leaf(root, rng.randint(1, 2))}"
            return f"q({head}) := {formula}"
        return f"q({head}) := {self._temporal_formula(root, self.limits.temporal_operators)}"

    def _temporal_formula(self, root: str, operators: int) -> str:
        rng = self.rng
        leaf = self._leaf(root, rng.randint(1, 2))
        if operators == 0 or rng.random() < 0.15:
            return leaf
        choice = rng.choice(["box", "dia", "until", "since", "next", "prev", "not"])
        inner = self._temporal_formula(root, operators - 1)
        lo = rng.randint(-4, 2)
        hi = lo + rng.randint(0, 4)
        if choice == "box":
            return f"BOX[{lo},{hi}] ({inner})"
        if choice == "dia":
            upper = "inf" if rng.random() < 0.2 else str(hi)
            return f"DIA[{lo},{upper}] ({inner})"
        if choice in ("until", "since"):
            c1 = rng.randint(0, 3)
            c2 = "inf" if rng.random() < 0.25 else str(c1 + rng.randint(0, 4))
            op = "U" if choice == "until" else "S"
            return f"({leaf}) {op}[{c1},{c2}] ({inner})"
        if choice == "next":
            return f"NEXT ({inner})"
        if choice == "prev":
            return f"PREV ({inner})"
        return f"NOT ({inner}) AND {leaf}"


def random_instance(seed: int, temporal: bool = False, limits: Optional[InstanceLimits] = None) -> Instance:
    return InstanceGenerator(seed, temporal, limits).generate()
