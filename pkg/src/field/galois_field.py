"""
Exponent-Form Finite Fields

Elements of GF(q^v) are stored by discrete log with respect to the root g
of a primitive modulus; ZERO is a separate tag, never an exponent. Sums are
computed through the Zech table z(i), defined by g^z(i) = g^i + 1.

Tables are built with the galois package:
  - v = 1: powers of -c_0 inside GF(q)
  - q prime: galois.GF(q^v, irreducible_poly=modulus), vectorized powers of x
  - q = p^e, e > 1: coefficient walk x -> x*x mod modulus over galois.GF(q)

A modulus is a little-endian list of v+1 base field coefficients, each
written as an exponent of the base field's primitive element or None for
zero. x^7+x+1 over GF(2) is therefore [0, 0, None, None, None, None, None, 0].
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.core.error_handling import (
    ContextMismatchError,
    DivideByZeroError,
    FieldError,
    FieldTooLargeError,
    InvalidModulusError,
    NotIrreducibleError,
    NotPrimitiveError,
)
from src.services.config_loader import get_config

logger = logging.getLogger(__name__)

ZERO_SENTINEL = -1


@lru_cache(maxsize=None)
def _base_field(q: int):
    return galois.GF(q)


class FieldContext:
    """
    GF(q^v) given by a primitive modulus, with exp/log/Zech tables.

    Immutable after construction; equality is identity, so elements of two
    separately built contexts never mix even when the moduli agree.
    """

    generator_exponent = 1

    def __init__(
        self,
        p: int,
        e: int,
        v: int,
        modulus: Tuple[Optional[int], ...],
        exp_table: np.ndarray,
        log_table: np.ndarray,
        zech_array: np.ndarray,
    ):
        self.p = p
        self.e = e
        self.v = v
        self.q = p**e
        self.modulus = tuple(modulus)
        self.order = self.q**v - 1
        self._exp = exp_table
        self._log = log_table
        self._zech = zech_array
        for table in (self._exp, self._log, self._zech):
            table.setflags(write=False)

    def __repr__(self) -> str:
        return f"FieldContext({self.name})"

    @property
    def name(self) -> str:
        modulus = ",".join("-" if c is None else str(c) for c in self.modulus)
        return f"GF({self.q}^{self.v})[{modulus}]"

    @property
    def base_field(self):
        return _base_field(self.q)

    @property
    def negative_one(self) -> int:
        """Exponent of -1"""
        return 0 if self.p == 2 else self.order // 2

    # Elements

    def element(self, exponent: Optional[int]) -> "FieldElement":
        if exponent is None:
            return FieldElement(None, self)
        if self.order == 0:
            raise FieldError("GF(1) has no units", field=self.name)
        return FieldElement(int(exponent) % self.order, self)

    def zero(self) -> "FieldElement":
        return FieldElement(None, self)

    def one(self) -> "FieldElement":
        return FieldElement(0, self)

    def generator(self) -> "FieldElement":
        return self.element(self.generator_exponent)

    # Arithmetic on exponents

    def zech(self, i: int) -> Optional[int]:
        """z with g^z = g^i + 1, or None when g^i = -1"""
        z = int(self._zech[int(i) % self.order])
        return None if z == ZERO_SENTINEL else z

    @property
    def zech_array(self) -> np.ndarray:
        """Read-only Zech array indexed by exponent, ZERO_SENTINEL where g^i = -1"""
        return self._zech

    @property
    def zech_table(self) -> Dict[int, int]:
        """Zech logarithms without the sentinel entry"""
        return {i: int(z) for i, z in enumerate(self._zech) if z != ZERO_SENTINEL}

    def add_exponents(self, a: Optional[int], b: Optional[int]) -> Optional[int]:
        if a is None:
            return b
        if b is None:
            return a
        z = self._zech[(b - a) % self.order]
        if z == ZERO_SENTINEL:
            return None
        return int((a + z) % self.order)

    def add_exponent_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized sum with ZERO_SENTINEL standing for zero on both sides"""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        z = self._zech[(b - a) % self.order]
        out = np.where(z == ZERO_SENTINEL, ZERO_SENTINEL, (a + z) % self.order)
        out = np.where(a == ZERO_SENTINEL, b, out)
        out = np.where(b == ZERO_SENTINEL, a, out)
        return out.astype(np.int64)

    # Element level operations

    def _check(self, *elements: "FieldElement"):
        for x in elements:
            if x.context is not self:
                raise ContextMismatchError(
                    f"element of {x.context.name} used in {self.name}", field=self.name
                )

    def add(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        self._check(a, b)
        return FieldElement(self.add_exponents(a.exponent, b.exponent), self)

    def neg(self, a: "FieldElement") -> "FieldElement":
        self._check(a)
        if a.exponent is None:
            return a
        return self.element(a.exponent + self.negative_one)

    def sub(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        return self.add(a, self.neg(b))

    def mul(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        self._check(a, b)
        if a.exponent is None or b.exponent is None:
            return self.zero()
        return self.element(a.exponent + b.exponent)

    def inv(self, a: "FieldElement") -> "FieldElement":
        self._check(a)
        if a.exponent is None:
            raise DivideByZeroError("inverse of zero", field=self.name)
        return self.element(-a.exponent)

    def power(self, a: "FieldElement", n: int) -> "FieldElement":
        self._check(a)
        if a.exponent is None:
            if n < 0:
                raise DivideByZeroError("negative power of zero", field=self.name)
            return self.one() if n == 0 else self.zero()
        return self.element(a.exponent * n)

    def log(self, a: "FieldElement") -> int:
        self._check(a)
        if a.exponent is None:
            raise DivideByZeroError("log of zero", field=self.name)
        return a.exponent

    # Coefficient view

    def to_coefficients(self, a: "FieldElement") -> List[int]:
        """Little-endian coefficients over GF(q) as galois integer values"""
        self._check(a)
        rep = 0 if a.exponent is None else int(self._exp[a.exponent])
        digits = []
        for _ in range(self.v):
            rep, digit = divmod(rep, self.q)
            digits.append(digit)
        return digits

    def from_coefficients(self, coefficients: Sequence[int]) -> "FieldElement":
        if len(coefficients) != self.v:
            raise FieldError(
                f"expected {self.v} coefficients, got {len(coefficients)}", field=self.name
            )
        rep = 0
        for digit in reversed(coefficients):
            if not 0 <= int(digit) < self.q:
                raise FieldError(f"coefficient {digit} outside GF({self.q})", field=self.name)
            rep = rep * self.q + int(digit)
        if rep == 0:
            return self.zero()
        return FieldElement(int(self._log[rep]), self)

    def trace_zero_exponents(self) -> np.ndarray:
        """
        Exponents i (0 <= i < order) with Tr(g^i) = 0, where
        Tr(y) = y + y^q + ... + y^(q^(v-1)).
        """
        i = np.arange(self.order, dtype=np.int64)
        acc = i.copy()
        for j in range(1, self.v):
            acc = self.add_exponent_arrays(acc, (i * self.q**j) % self.order)
        return i[acc == ZERO_SENTINEL]

    def describe(self) -> Dict[str, Any]:
        return {"p": self.p, "e": self.e, "v": self.v, "modulus": list(self.modulus)}


@dataclass(frozen=True, eq=False)
class FieldElement:
    """g^exponent, or ZERO when exponent is None"""

    exponent: Optional[int]
    context: FieldContext

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.context is other.context and self.exponent == other.exponent

    def __hash__(self) -> int:
        return hash((id(self.context), self.exponent))

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return self.context.add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self.context.sub(self, other)

    def __neg__(self) -> "FieldElement":
        return self.context.neg(self)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return self.context.mul(self, other)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self.context.mul(self, self.context.inv(other))

    def __pow__(self, n: int) -> "FieldElement":
        return self.context.power(self, n)

    def __repr__(self) -> str:
        return "ZERO" if self.exponent is None else f"g^{self.exponent}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a.context.add(a, b)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a.context.mul(a, b)


def inv(a: FieldElement) -> FieldElement:
    return a.context.inv(a)


def power(a: FieldElement, n: int) -> FieldElement:
    return a.context.power(a, n)


def modulus_from_coefficients(p: int, e: int, coefficients: Sequence[int]) -> List[Optional[int]]:
    """
    Convert little-endian GF(p^e) coefficients (galois integer values) into
    the exponent-or-None form. modulus_from_coefficients(3, 1, [1, 2, 0, 0, 0, 1])
    gives [0, 1, None, None, None, 0] for x^5+2x+1.
    """
    GF = _base_field(p**e)
    alpha = GF.primitive_element
    out: List[Optional[int]] = []
    for c in coefficients:
        c = int(c) % p if e == 1 else int(c)
        out.append(None if c == 0 else int(GF(c).log(alpha)))
    return out


def _validate_modulus(p: int, e: int, v: int, modulus: Sequence[Optional[int]], label: str):
    if not galois.is_prime(p):
        raise FieldError(f"characteristic {p} is not prime", field=label)
    if e < 1 or v < 1:
        raise FieldError(f"degrees must be positive (e={e}, v={v})", field=label)
    if len(modulus) != v + 1:
        raise InvalidModulusError(
            f"modulus has {len(modulus)} coefficients, degree {v} needs {v + 1}", field=label
        )
    q = p**e
    for c in modulus:
        if c is not None and not (isinstance(c, int) and 0 <= c < q - 1):
            raise InvalidModulusError(f"coefficient exponent {c!r} outside 0..{q - 2}", field=label)
    if modulus[-1] != 0:
        raise InvalidModulusError("modulus is not monic", field=label)


def _modulus_poly(GF, modulus: Sequence[Optional[int]]):
    alpha = GF.primitive_element
    ascending = [GF(0) if c is None else alpha**c for c in modulus]
    return galois.Poly(GF(np.array([int(c) for c in reversed(ascending)])))


def _exp_table_prime_power(GF, poly, q: int, v: int, order: int, label: str) -> np.ndarray:
    """Walk x^i mod modulus coefficient by coefficient"""
    coeffs = poly.coefficients(v + 1, order="asc")
    low = -coeffs[:v]
    state = GF.Zeros(v)
    state[0] = 1
    weights = np.array([q**j for j in range(v)], dtype=np.int64)
    exp = np.empty(order, dtype=np.int64)
    for i in range(order):
        rep = int(np.dot(state.view(np.ndarray).astype(np.int64), weights))
        if i > 0 and rep == 1:
            raise NotPrimitiveError(
                f"root of the modulus has order {i}, not {order}", field=label, root_order=i
            )
        exp[i] = rep
        top = state[v - 1]
        shifted = GF.Zeros(v)
        shifted[1:] = state[: v - 1]
        state = shifted + top * low
    return exp


def _build_exp_table(p: int, e: int, v: int, modulus, label: str) -> np.ndarray:
    q = p**e
    order = q**v - 1
    GF = _base_field(q)
    poly = _modulus_poly(GF, modulus)

    if v > 1 and not poly.is_irreducible():
        raise NotIrreducibleError(f"modulus {poly} is reducible over GF({q})", field=label)

    if v == 1:
        root = -GF(int(poly.coefficients(2, order="asc")[0]))
        exp = (root ** np.arange(order)).view(np.ndarray).astype(np.int64)
    elif e == 1:
        if not poly.is_primitive():
            raise NotPrimitiveError(f"modulus {poly} is irreducible but not primitive", field=label)
        extension = galois.GF(q**v, irreducible_poly=poly)
        x = extension(q)
        exp = (x ** np.arange(order)).view(np.ndarray).astype(np.int64)
    else:
        exp = _exp_table_prime_power(GF, poly, q, v, order, label)

    if order and np.unique(exp).size != order:
        raise NotPrimitiveError("generator powers repeat before q^v - 1", field=label)
    return exp


def _check_tables(
    p: int, e: int, v: int, modulus, exp: np.ndarray, log: np.ndarray, zech: np.ndarray,
    plus_one: np.ndarray, label: str,
):
    """Re-evaluate Zech entries and powers of g against independent arithmetic"""
    config = get_config()
    order = exp.size
    if order == 0:
        return
    rng = np.random.default_rng(config.sample_seed)
    if order <= config.zech_exhaustive_limit:
        idx = np.arange(order)
    else:
        idx = rng.integers(0, order, size=config.zech_sample_count)

    if not np.array_equal(log[exp[idx]], idx):
        raise FieldError("log table is not inverse to exp table", field=label)
    defined = zech[idx] != ZERO_SENTINEL
    if not np.array_equal(exp[zech[idx][defined]], plus_one[idx][defined]):
        raise FieldError("Zech table disagrees with g^i + 1", field=label)
    if np.any(plus_one[idx][~defined] != 0):
        raise FieldError("Zech sentinel placed where g^i + 1 is not zero", field=label)
    live = zech[zech != ZERO_SENTINEL]
    if np.unique(live).size != live.size:
        raise FieldError("Zech table is not injective", field=label)

    # Polynomial arithmetic: x^i mod modulus must agree with the exp table
    q = p**e
    GF = _base_field(q)
    poly = _modulus_poly(GF, modulus)
    x = galois.Poly([1, 0], field=GF)
    sample = rng.integers(0, order, size=min(config.poly_check_samples, order))
    for i in sample.tolist():
        residue = pow(x, int(i), poly)
        digits = residue.coefficients(v, order="asc").view(np.ndarray).astype(np.int64)
        rep = int(np.dot(digits, np.array([q**j for j in range(v)], dtype=np.int64)))
        if rep != int(exp[i]):
            raise FieldError(f"x^{i} mod modulus disagrees with the exp table", field=label)


@lru_cache(maxsize=64)
def _build_cached(p: int, e: int, v: int, modulus: Tuple[Optional[int], ...], max_order: int) -> FieldContext:
    _validate_modulus(p, e, v, modulus, f"GF({p}^{e * v})")
    q = p**e
    order = q**v - 1
    label = f"GF({q}^{v})"
    if order > max_order:
        raise FieldTooLargeError(f"{order} units exceed the guard of {max_order}", field=label)

    exp = _build_exp_table(p, e, v, modulus, label)

    log = np.full(q**v, ZERO_SENTINEL, dtype=np.int64)
    log[exp] = np.arange(order, dtype=np.int64)

    GF = _base_field(q)
    digit0 = exp % q
    bumped = (GF(digit0) + GF(1)).view(np.ndarray).astype(np.int64)
    plus_one = exp - digit0 + bumped
    zech = log[plus_one]

    _check_tables(p, e, v, modulus, exp, log, zech, plus_one, label)
    context = FieldContext(p, e, v, modulus, exp, log, zech)
    logger.info(f"Built {context.name} with {order} units")
    return context


def build_field(p: int, e: int, v: int, modulus: Sequence[Optional[int]]) -> FieldContext:
    """
    Build GF((p^e)^v) from a primitive modulus.

    Contexts are cached per (p, e, v, modulus), so repeated catalog loads
    share tables.

    Raises:
        NotIrreducibleError, NotPrimitiveError, FieldTooLargeError,
        InvalidModulusError
    """
    normalized = tuple(None if c is None else int(c) for c in modulus)
    return _build_cached(int(p), int(e), int(v), normalized, get_config().field_max_order)


def build_field_from_descriptor(descriptor: Dict[str, Any]) -> FieldContext:
    """Inverse of FieldContext.describe()"""
    try:
        return build_field(
            descriptor["p"], descriptor.get("e", 1), descriptor["v"], descriptor["modulus"]
        )
    except (KeyError, TypeError) as e:
        raise InvalidModulusError(f"malformed field descriptor {descriptor!r}: {e}")
