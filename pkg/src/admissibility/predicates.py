"""
Admissibility Predicates for Designs over F_q

Necessary conditions for 2-(v, Gamma, lambda) designs over F_q: the
general counting conditions on order, size and degrees, their
specialisations to Steiner, cycle and path designs, and the conditions
for Singer-graceful graphs. Every predicate returns the individual
conditions it checked so callers can report which congruence failed.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from functools import reduce
from typing import Any, Dict, List, Optional, Tuple

from src.core.error_handling import AdmissibilityError
from src.geometry.singer import q_bracket
from src.graphs.families import AbstractGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class AdmissibilityVerdict:
    """Outcome of an admissibility predicate with per-condition reasons"""

    predicate: str
    parameters: Dict[str, Any]
    conditions: List[Condition] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __bool__(self) -> bool:
        return self.admissible

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.conditions if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "predicate": self.predicate,
            "parameters": dict(self.parameters),
            "admissible": self.admissible,
            "conditions": [c.to_dict() for c in self.conditions],
        }


def _require(value: int, minimum: int, name: str, parameters: Dict[str, Any]):
    if not isinstance(value, int) or value < minimum:
        raise AdmissibilityError(f"{name} must be an integer >= {minimum}, got {value!r}", parameters)


def q_bracket_gcd(m: int, n: int, q: int) -> int:
    """
    gcd([m]_q, [n]_q), computed as [gcd(m, n)]_q and checked against the
    integer gcd of the brackets.

    Raises:
        AdmissibilityError: m or n below 1, or the identity fails
    """
    parameters = {"m": m, "n": n, "q": q}
    _require(m, 1, "m", parameters)
    _require(n, 1, "n", parameters)
    _require(q, 2, "q", parameters)
    value = q_bracket(gcd(m, n), q)
    direct = gcd(q_bracket(m, q), q_bracket(n, q))
    if value != direct:
        raise AdmissibilityError(f"gcd identity fails: [{gcd(m, n)}]_{q}={value}, gcd={direct}", parameters)
    return value


def bracket_exponent(order: int, q: int) -> Optional[int]:
    """k with [k]_q = order, if any"""
    k = 1
    while q_bracket(k, q) < order:
        k += 1
    return k if q_bracket(k, q) == order else None


def design_size_bound(v: int, q: int, lam: int) -> int:
    """lambda * q * [v]_q * [v-1]_q / 2, the number of edges every design must cover"""
    return lam * q * q_bracket(v, q) * q_bracket(v - 1, q) // 2


def admissible_parameters(
    v: int, q: int, lam: int, order: int, size: int, degree_gcd: int
) -> AdmissibilityVerdict:
    """
    The three counting conditions for a graph of the given order, size and
    degree gcd:

      (i)   order = [k]_q for some 1 <= k <= v
      (ii)  size divides lambda q [v]_q [v-1]_q / 2
      (iii) the gcd of the degrees divides lambda q [v-1]_q
    """
    parameters = {"v": v, "q": q, "lambda": lam, "order": order, "size": size, "degree_gcd": degree_gcd}
    _require(v, 2, "v", parameters)
    _require(q, 2, "q", parameters)
    _require(lam, 1, "lambda", parameters)

    k = bracket_exponent(order, q) if order >= 1 else None
    ok_order = k is not None and k <= v
    cond_order = Condition(
        "order",
        ok_order,
        f"order {order} = [{k}]_{q}" if ok_order else f"order {order} is not [k]_{q} with k <= {v}",
    )

    total = lam * q * q_bracket(v, q) * q_bracket(v - 1, q)
    ok_size = size > 0 and total % 2 == 0 and (total // 2) % size == 0
    cond_size = Condition(
        "size",
        ok_size,
        f"size {size} {'divides' if ok_size else 'does not divide'} {total // 2 if total % 2 == 0 else total / 2}",
    )

    degree_target = lam * q * q_bracket(v - 1, q)
    ok_degree = degree_gcd > 0 and degree_target % degree_gcd == 0
    cond_degree = Condition(
        "degree",
        ok_degree,
        f"degree gcd {degree_gcd} {'divides' if ok_degree else 'does not divide'} {degree_target}",
    )
    return AdmissibilityVerdict("general", parameters, [cond_order, cond_size, cond_degree])


def admissible_general(v: int, q: int, lam: int, graph: AbstractGraph) -> AdmissibilityVerdict:
    """Counting conditions evaluated on a concrete graph"""
    degrees = [d for d in graph.degrees()]
    degree_gcd = reduce(gcd, degrees, 0)
    verdict = admissible_parameters(v, q, lam, graph.order, graph.size, degree_gcd)
    verdict.parameters["family"] = graph.family
    logger.debug(f"admissible_general v={v} q={q} lambda={lam} {graph.family}: {verdict.admissible}")
    return verdict


def _congruence(name: str, value: int, modulus: int, residues: Tuple[int, ...]) -> Condition:
    r = value % modulus
    allowed = " or ".join(str(x) for x in residues)
    return Condition(name, r in residues, f"v = {r} (mod {modulus}), needs {allowed}")


def steiner_admissible(v: int, k: int, q: int) -> AdmissibilityVerdict:
    """2-(v,k,1)_q designs need v = 1 or k (mod k(k-1))"""
    parameters = {"v": v, "k": k, "q": q}
    if not (2 <= k < v):
        return AdmissibilityVerdict(
            "steiner", parameters, [Condition("range", False, f"needs 2 <= k < v, got k={k}, v={v}")]
        )
    return AdmissibilityVerdict(
        "steiner", parameters, [_congruence("congruence", v, k * (k - 1), (1, k % (k * (k - 1))))]
    )


def cycle_admissible(v: int, k: int, q: int) -> AdmissibilityVerdict:
    """
    2-(v, C_k, 1)_q designs (cycles of length [k]_q):
      q even:          v = 0 or 1 (mod k)
      q odd, k even:   v = 1 (mod k)
      q odd, k odd:    v = 1 or k (mod 2k)
    """
    parameters = {"v": v, "k": k, "q": q}
    if k < 3 or v < 2:
        return AdmissibilityVerdict("cycle", parameters, [Condition("range", False, f"needs k >= 3, got k={k}")])
    if q % 2 == 0:
        condition = _congruence("congruence", v, k, (0, 1))
    elif k % 2 == 0:
        condition = _congruence("congruence", v, k, (1,))
    else:
        condition = _congruence("congruence", v, 2 * k, (1, k))
    return AdmissibilityVerdict("cycle", parameters, [condition])


def path_admissible(v: int, k: int, q: int) -> AdmissibilityVerdict:
    """
    2-(v, P_k, 1)_q designs (paths on [k]_q vertices):
      q even:          impossible
      q odd, k even:   v = 0 or 1 (mod k-1)
      q odd, k odd:    v = 0 or 1 (mod 2(k-1))
    """
    parameters = {"v": v, "k": k, "q": q}
    if k < 2 or v < 2:
        return AdmissibilityVerdict("path", parameters, [Condition("range", False, f"needs k >= 2, got k={k}")])
    if q % 2 == 0:
        condition = Condition("parity", False, f"q={q} is even: [v]_q and [v-1]_q are both odd")
    elif k % 2 == 0:
        condition = _congruence("congruence", v, k - 1, (0, 1 % (k - 1)))
    else:
        condition = _congruence("congruence", v, 2 * (k - 1), (0, 1))
    return AdmissibilityVerdict("path", parameters, [condition])


def singer_graceful_admissible(v: int, q: int, graph: AbstractGraph, lam: int = 1) -> AdmissibilityVerdict:
    """
    A Singer-graceful graph yields a cyclic 2-(v, Gamma, lambda) design when
    it has order [v-1]_q and size lambda q [v-1]_q / 2.
    """
    parameters = {"v": v, "q": q, "lambda": lam, "family": graph.family}
    order = q_bracket(v - 1, q)
    doubled = lam * q * order
    return AdmissibilityVerdict(
        "singer_graceful",
        parameters,
        [
            Condition("order", graph.order == order, f"order {graph.order}, needs [{v - 1}]_{q} = {order}"),
            Condition(
                "size",
                doubled % 2 == 0 and graph.size == doubled // 2,
                f"size {graph.size}, needs {doubled / 2:g}",
            ),
        ],
    )


def graceful_degree_targets(k: int, mu: int) -> List[Dict[str, int]]:
    """
    For a (v, k, mu) difference set: lambda_i = mu i / g and degree
    (k-1) i / g for 1 <= i <= g, where g = gcd(k-1, mu). These are the
    (lambda, degree) pairs for which regular connected graphs of order k
    are expected to be graceful.
    """
    if k < 2 or mu < 1:
        raise AdmissibilityError(f"needs k >= 2 and mu >= 1, got k={k}, mu={mu}", {"k": k, "mu": mu})
    g = gcd(k - 1, mu)
    return [{"i": i, "lambda": mu * i // g, "degree": (k - 1) * i // g} for i in range(1, g + 1)]
