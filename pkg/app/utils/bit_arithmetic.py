"""
Comparisons t′ − t ⟨rel⟩ d evaluated on sign-magnitude bit vectors.

A vector holds a sign (true for values ≥ 0), magnitude bits (index 0 is the least
significant bit) and an overflow flag. The vector of t + d is obtained from the
vector of t by d applications of the successor step, which only inspects bits.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from app.core.exceptions import KBValidationError

RELATIONS = ("<", "<=", "=", ">=", ">")
_MIRROR = {"<": ">", "<=": ">=", "=": "=", ">=": "<=", ">": "<"}


@dataclass(frozen=True)
class BitVector:
    sign: bool
    bits: Tuple[bool, ...]
    ovf: bool = False


def encode(t: int, nbits: int) -> BitVector:
    if abs(t) >= 2 ** nbits:
        raise KBValidationError(f"{t} does not fit into {nbits} magnitude bits")
    magnitude = abs(t)
    return BitVector(t >= 0, tuple(bool(magnitude >> j & 1) for j in range(nbits)))


def successor(v: BitVector) -> BitVector:
    """The vector of t + 1, given the vector of t."""
    bits = v.bits
    ovf = v.ovf or (v.sign and all(bits))
    is_one = bool(bits) and bits[0] and not any(bits[1:])
    sign = v.sign or is_one
    if v.sign:
        # increment: bit j flips iff every lower bit is set
        new_bits = tuple(bits[j] == any(not b for b in bits[:j]) for j in range(len(bits)))
    elif not sign:
        # magnitude decrement: bit j flips iff every lower bit is clear
        new_bits = tuple(bits[j] == any(bits[:j]) for j in range(len(bits)))
    else:
        new_bits = tuple(False for _ in bits)
    return BitVector(sign, new_bits, ovf)


@lru_cache(maxsize=4096)
def _chain(t: int, nbits: int) -> List[BitVector]:
    return [encode(t, nbits)]


def shifted(t: int, d: int, nbits: int) -> BitVector:
    """The vector of t + d for d ≥ 0; successors of t are memoised per (t, nbits)."""
    chain = _chain(t, nbits)
    while len(chain) <= d:
        chain.append(successor(chain[-1]))
    return chain[d]


def equal(u: BitVector, v: BitVector) -> bool:
    return not u.ovf and not v.ovf and u.sign == v.sign and u.bits == v.bits


def less(u: BitVector, v: BitVector) -> bool:
    """u < v for non-overflowed vectors."""
    if not u.sign and v.sign:
        return True
    if u.sign != v.sign:
        return False
    for j in reversed(range(len(u.bits))):
        if u.bits[j] != v.bits[j]:
            return v.bits[j] == v.sign
    return False


def bit_compare(t: int, t_prime: int, relation: str, d: int, nbits: int) -> bool:
    """t′ − t ⟨relation⟩ d, computed as a comparison of t′ against t + d."""
    if relation not in RELATIONS:
        raise KBValidationError(f"unknown relation {relation}")
    if d < 0:
        return bit_compare(t_prime, t, _MIRROR[relation], -d, nbits)
    target = shifted(t, d, nbits)
    other = encode(t_prime, nbits)
    if target.ovf:
        # t + d lies above every representable t′
        lt, eq = True, False
    else:
        lt, eq = less(other, target), equal(other, target)
    if relation == "<":
        return lt
    if relation == "<=":
        return lt or eq
    if relation == "=":
        return eq
    if relation == ">=":
        return not lt
    return not (lt or eq)


def bits_needed(*values: int) -> int:
    return max(1, max((abs(v).bit_length() for v in values), default=1))


def emit_comparator_formula(relation: str, d: int, nbits: int) -> str:
    """First-order text of t′ − t ⟨relation⟩ d over the bit, sign and ovf predicates."""
    if relation not in RELATIONS:
        raise KBValidationError(f"unknown relation {relation}")
    left, right = "t", "t'"
    if d < 0:
        relation, d = _MIRROR[relation], -d
        left, right = right, left
    lines = [
        f"# {right} - {left} {relation} {d}, {nbits} magnitude bits, j ranges over 1..{nbits}",
        "ovf^0(t) := FALSE",
        "sign^0(t) := sign(t)",
        "bit^0(t,j) := bit(t,j)",
        "ovf^(k+1)(t) := ovf^k(t) OR (sign^k(t) AND FORALL j. bit^k(t,j))",
        "sign^(k+1)(t) := sign^k(t) OR (bit^k(t,1) AND FORALL j>1. NOT bit^k(t,j))",
        "bit^(k+1)(t,j) := (sign^k(t) AND (bit^k(t,j) <-> EXISTS i<j. NOT bit^k(t,i)))"
        " OR (NOT sign^(k+1)(t) AND (bit^k(t,j) <-> EXISTS i<j. bit^k(t,i)))",
        "eq(u,v) := (sign(u) <-> sign(v)) AND FORALL j. (bit(u,j) <-> bit(v,j))",
        "lt(u,v) := (NOT sign(u) AND sign(v)) OR ((sign(u) <-> sign(v)) AND EXISTS j. ("
        "NOT (bit(u,j) <-> bit(v,j)) AND FORALL i>j. (bit(u,i) <-> bit(v,i)) AND (bit(v,j) <-> sign(v))))",
    ]
    shifted_term = f"{left}+{d}"
    eq = f"(NOT ovf^{d}({left}) AND eq({right}, {shifted_term}))"
    lt = f"(ovf^{d}({left}) OR lt({right}, {shifted_term}))"
    body = {
        "<": lt,
        "<=": f"{lt} OR {eq}",
        "=": eq,
        ">=": f"NOT {lt}",
        ">": f"NOT ({lt} OR {eq})",
    }[relation]
    lines.append(f"phi({left},{right}) := {body}")
    return "\n".join(lines)
