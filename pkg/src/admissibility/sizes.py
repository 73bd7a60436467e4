"""
Size Formulas and Admissibility Tables

Exact (arbitrary precision) sizes of Steiner difference families over F_q
and of their Frobenius initial-block systems, the table of admissible
(order, size) pairs for small graph decompositions, and TSV rendering of
both through pandas.
"""

import logging
from dataclasses import dataclass
from math import comb, gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence

import galois
import pandas as pd

from src.core.error_handling import AdmissibilityError, NotAdmissibleError
from src.admissibility.predicates import design_size_bound, steiner_admissible
from src.geometry.singer import frobenius_semiregular_on_nonidentity, q_bracket

logger = logging.getLogger(__name__)

MISSING = "none"


@dataclass(frozen=True)
class SteinerSizes:
    v: int
    k: int
    q: int
    family_size: int
    initial_size: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "v": self.v,
            "k": self.k,
            "q": self.q,
            "family_size": self.family_size,
            "initial_size": self.initial_size,
        }


def steiner_family_sizes(v: int, k: int, q: int) -> SteinerSizes:
    """
    |F| for a (v, k, 1)_q difference family and the number |I| of initial
    blocks under the Frobenius group when it acts without short orbits.

    v = 1 (mod k(k-1)):  |F| = (q-1)(q^(v-1)-1) / ((q^k-1)(q^(k-1)-1));
                         |I| = |F|/v when v is prime, q != 1 (mod v), v | |F|
    v = k (mod k(k-1)):  |F| = q^(k-1)(q-1)(q^(v-k)-1) / ((q^k-1)(q^(k-1)-1));
                         |I| = |F|/k when gcd(k, v/k) = 1 and k | |F|

    Raises:
        NotAdmissibleError: v is not 1 or k modulo k(k-1)
    """
    verdict = steiner_admissible(v, k, q)
    if not verdict:
        raise NotAdmissibleError(
            f"({v},{k},1)_{q} is not admissible: {verdict.conditions[0].detail}", verdict.parameters
        )
    denominator = (q**k - 1) * (q ** (k - 1) - 1)
    if (v - 1) % (k * (k - 1)) == 0:
        numerator = (q - 1) * (q ** (v - 1) - 1)
    else:
        numerator = q ** (k - 1) * (q - 1) * (q ** (v - k) - 1)
    if numerator % denominator:
        raise AdmissibilityError(f"family size for ({v},{k},1)_{q} is not integral", verdict.parameters)
    family = numerator // denominator

    initial: Optional[int] = None
    if (v - 1) % (k * (k - 1)) == 0:
        if galois.is_prime(v) and q % v != 1 and family % v == 0:
            initial = family // v
    elif gcd(k, v // k) == 1 and family % k == 0:
        initial = family // k
    return SteinerSizes(v, k, q, family, initial)


def frobenius_initial_count(v: int, q: int, lam: int, size: int) -> Dict[str, Optional[int]]:
    """
    Blocks needed for a (v, Gamma, lambda)_q family with |E(Gamma)| = size,
    t = lambda([v]_q - 1) / (2 size), and the initial blocks t / v when the
    Frobenius group acts semiregularly and v divides t.
    """
    if size < 1 or lam < 1:
        raise AdmissibilityError("size and lambda must be positive", {"size": size, "lambda": lam})
    needed = lam * (q_bracket(v, q) - 1)
    blocks = needed // (2 * size) if needed % (2 * size) == 0 else None
    initial = None
    if blocks is not None and blocks % v == 0 and frobenius_semiregular_on_nonidentity(v, q):
        initial = blocks // v
    return {"blocks": blocks, "initial_blocks": initial}


def steiner_size_table(rows: Iterable[Sequence[int]]) -> pd.DataFrame:
    """One row per (v, k, q); sizes stay Python integers"""
    sizes = [steiner_family_sizes(int(v), int(k), int(q)) for v, k, q in rows]
    return pd.DataFrame(
        {
            "v": [s.v for s in sizes],
            "k": [s.k for s in sizes],
            "q": [s.q for s in sizes],
            "family_size": pd.Series([s.family_size for s in sizes], dtype=object),
            "initial_size": pd.Series([s.initial_size for s in sizes], dtype=object),
        }
    )


def fano_size_table(qs: Iterable[int]) -> pd.DataFrame:
    return steiner_size_table((7, 3, q) for q in qs)


def _divisors(n: int) -> List[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def admissibility_table(v: int, q: int, lam: int = 1) -> pd.DataFrame:
    """
    Admissible (order, size) pairs of non-trivial connected graphs for
    2-(v, Gamma, lambda) designs: order [k]_q with 3 <= k <= v-1 and size a
    divisor of lambda q [v]_q [v-1]_q / 2 between order-1 and C(order, 2).
    A row is regular_possible when some regular graph fits, i.e. the
    order divides twice the size and that degree divides lambda q [v-1]_q.
    """
    bound = design_size_bound(v, q, lam)
    degree_target = lam * q * q_bracket(v - 1, q)
    divisors = _divisors(bound)
    records = []
    for k in range(3, v):
        order = q_bracket(k, q)
        for size in divisors:
            if order - 1 <= size <= comb(order, 2):
                regular = (2 * size) % order == 0 and degree_target % ((2 * size) // order) == 0
                records.append({"k": k, "order": order, "size": size, "regular_possible": regular})
    logger.debug(f"admissibility table v={v} q={q} lambda={lam}: {len(records)} rows")
    return pd.DataFrame.from_records(records, columns=["k", "order", "size", "regular_possible"])


def table_to_tsv(frame: pd.DataFrame) -> str:
    """Tab separated, no index, missing cells written as 'none'"""
    out = frame.copy()
    for column in out.columns:
        if out[column].dtype == object:
            out[column] = out[column].map(lambda x: MISSING if x is None else x)
    return out.to_csv(sep="\t", index=False, lineterminator="\n")
