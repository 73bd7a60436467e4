"""
Singer Model of PG(F_q^v)

The map f: g^i -> i mod [v]_q identifies the points of the projective
space with Z_[v]_q; translation by 1 is the Singer cycle. A point x is
lifted to the field element g^x, and the q-1 nonzero multiples of g^b are
g^(b + j[v]_q) for j = 0..q-2, so the line through a and b consists of
a, b and f(g^a + g^(b + j[v]_q)).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.core.error_handling import (
    EqualPointsError,
    GeometryError,
    NotDivisibleError,
    NotHyperplaneError,
)
from src.field.galois_field import ZERO_SENTINEL, FieldContext, FieldElement

logger = logging.getLogger(__name__)


def q_bracket(v: int, q: int) -> int:
    """[v]_q = (q^v - 1)/(q - 1), with [0]_q = 0"""
    if v < 0:
        raise ValueError(f"[v]_q needs v >= 0, got {v}")
    return sum(q**i for i in range(v))


def frobenius_semiregular_on_nonidentity(v: int, q: int) -> bool:
    """Frob(q, v) acts semiregularly on nonzero points iff v is prime and q != 1 (mod v)"""
    return bool(galois.is_prime(v)) and q % v != 1


@dataclass(frozen=True)
class Subspace:
    """Projective subspace given by its sorted points and a generator witness"""

    points: Tuple[int, ...]
    dim: int
    generators: Tuple[int, ...]

    def __contains__(self, x: int) -> bool:
        idx = np.searchsorted(self.points, x)
        return idx < len(self.points) and self.points[idx] == x

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> Dict:
        return {"points": list(self.points), "dim": self.dim, "generators": list(self.generators)}


@dataclass(frozen=True)
class SubspaceCheck:
    is_subspace: bool
    dim: Optional[int] = None
    generators: Tuple[int, ...] = ()
    violating_pair: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.is_subspace

    def to_dict(self) -> Dict:
        return {
            "is_subspace": self.is_subspace,
            "dim": self.dim,
            "generators": list(self.generators),
            "violating_pair": list(self.violating_pair) if self.violating_pair else None,
        }


@dataclass(frozen=True)
class Spread:
    """Desarguesian spread: cosets of the subgroup h*Z inside Z_[mn]_q"""

    n: int
    h: int
    modulus: int
    classes: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def class_of(self, x: int) -> int:
        return x % self.h

    def same_class(self, a: int, b: int) -> bool:
        return (a - b) % self.h == 0

    @property
    def subgroup(self) -> Tuple[int, ...]:
        return self.classes[0]


class SingerContext:
    """Singer-group view of PG(F_q^v) over a field context"""

    def __init__(self, field_context: FieldContext):
        self.field = field_context
        self.q = field_context.q
        self.v = field_context.v
        self.v_q = field_context.order // (self.q - 1)
        if self.v_q * (self.q - 1) != field_context.order:
            raise GeometryError(f"[v]_q does not divide the unit group of {field_context.name}")
        # j * [v]_q for j = 0..q-2: exponents of the nonzero scalars
        self._scalars = np.arange(self.q - 1, dtype=np.int64) * self.v_q

    def __repr__(self) -> str:
        return f"SingerContext({self.field.name}, points={self.v_q})"

    def project(self, element: FieldElement) -> int:
        """f(g^i) = i mod [v]_q"""
        if element.exponent is None:
            raise GeometryError("the zero vector is not a projective point")
        return element.exponent % self.v_q

    def lift(self, point: int) -> FieldElement:
        return self.field.element(point % self.v_q)

    # Lines and spans

    def _line_extras(self, a: int, others: np.ndarray) -> np.ndarray:
        """Points f(g^a + c g^b) for every b in others and nonzero scalar c; shape (len, q-1)"""
        others = np.asarray(others, dtype=np.int64).reshape(-1)
        diff = (others[:, None] - a + self._scalars[None, :]) % self.field.order
        z = self.field.zech_array[diff]
        return (a + z) % self.v_q

    def line_points(self, a: int, b: int) -> Tuple[int, ...]:
        a %= self.v_q
        b %= self.v_q
        if a == b:
            raise EqualPointsError(f"line through {a} and itself")
        extras = self._line_extras(a, np.array([b]))[0]
        return tuple(sorted({a, b, *extras.tolist()}))

    def line_through(self, a: int, b: int) -> Subspace:
        a %= self.v_q
        b %= self.v_q
        return Subspace(self.line_points(a, b), 1, (a, b))

    def join(self, points: np.ndarray, x: int) -> np.ndarray:
        """Span of a subspace (sorted points) and a new point x"""
        extras = self._line_extras(x, points)
        return np.unique(np.concatenate([points, [x], extras.reshape(-1)]))

    def span(self, gens: Sequence[int]) -> Subspace:
        if not len(gens):
            raise GeometryError("span needs at least one generator")
        gens = [int(g) % self.v_q for g in gens]
        points = np.array([gens[0]], dtype=np.int64)
        witness = [gens[0]]
        for x in gens[1:]:
            if np.any(points == x):
                continue
            points = self.join(points, x)
            witness.append(x)
        return Subspace(tuple(points.tolist()), len(witness) - 1, tuple(witness))

    def is_subspace(self, points: Iterable[int]) -> SubspaceCheck:
        """
        Grow a span inside the set from its smallest point. The set is a
        subspace iff no join ever leaves it and the final span is the set.
        """
        members = np.unique(np.asarray([int(p) % self.v_q for p in points], dtype=np.int64))
        if members.size == 0:
            return SubspaceCheck(False)
        current = members[:1]
        witness = [int(members[0])]
        for x in members[1:].tolist():
            if np.any(current == x):
                continue
            extras = self._line_extras(x, current)
            outside = ~np.isin(extras, members)
            if outside.any():
                row = int(np.argmax(outside.any(axis=1)))
                return SubspaceCheck(False, violating_pair=(x, int(current[row])))
            current = np.unique(np.concatenate([current, [x], extras.reshape(-1)]))
            witness.append(x)
        return SubspaceCheck(True, len(witness) - 1, tuple(witness))

    # Spreads, hyperplanes and the Frobenius action

    def desarguesian_spread(self, n: int) -> Spread:
        """Cosets of {i [m]_(q^n)} in Z_[mn]_q; each class has [n]_q points"""
        if n < 1 or self.v % n:
            raise NotDivisibleError(f"spread dimension {n} does not divide v={self.v}")
        m = self.v // n
        h = q_bracket(m, self.q**n)
        classes = tuple(
            tuple(range(c, self.v_q, h)) for c in range(h)
        )
        # the other classes are its images under the Singer cycle
        check = self.is_subspace(classes[0])
        if not check.is_subspace or check.dim != n - 1:
            raise GeometryError(f"spread subgroup of {self!r} is not a subspace of dimension {n}")
        return Spread(n=n, h=h, modulus=self.v_q, classes=classes)

    def frobenius_orbit(self, x: int) -> Tuple[int, ...]:
        x %= self.v_q
        orbit = [x]
        y = (x * self.q) % self.v_q
        while y != x:
            orbit.append(y)
            y = (y * self.q) % self.v_q
        return tuple(sorted(orbit))

    def frobenius_orbits(self, domain: Optional[Iterable[int]] = None) -> List[Tuple[int, ...]]:
        """Partition of the domain (default: nonzero points) into Frobenius orbits"""
        pending = set(range(1, self.v_q)) if domain is None else {int(x) % self.v_q for x in domain}
        orbits = []
        for x in sorted(pending):
            if x not in pending:
                continue
            orbit = self.frobenius_orbit(x)
            missing = set(orbit) - pending
            if missing:
                raise GeometryError(f"domain is not Frobenius invariant near {x}")
            pending.difference_update(orbit)
            orbits.append(orbit)
        return orbits

    def frobenius_multipliers(self) -> Tuple[int, ...]:
        """q^j mod [v]_q for j = 0..v-1"""
        return tuple(pow(self.q, j, self.v_q) for j in range(self.v))

    def orbit_index(self, multipliers: Optional[Sequence[int]] = None) -> np.ndarray:
        """Smallest orbit member under the multiplier group, per residue"""
        if multipliers is None:
            multipliers = self.frobenius_multipliers()
        mults = np.asarray(multipliers, dtype=np.int64)
        x = np.arange(self.v_q, dtype=np.int64)
        return ((x[:, None] * mults[None, :]) % self.v_q).min(axis=1)

    @cached_property
    def default_hyperplane(self) -> Tuple[int, ...]:
        """f-image of {y : Tr(y) = 0}"""
        exponents = self.field.trace_zero_exponents()
        return tuple(np.unique(exponents % self.v_q).tolist())

    def singer_difference_set(self, hyperplane_gens: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
        """Points of a hyperplane: a ([v]_q, [v-1]_q, [v-2]_q) difference set"""
        if self.v < 2:
            raise NotHyperplaneError("PG(0, q) has no hyperplane")
        if hyperplane_gens is None:
            return self.default_hyperplane
        subspace = self.span(hyperplane_gens)
        if subspace.dim != self.v - 2:
            raise NotHyperplaneError(
                f"generators span dimension {subspace.dim}, a hyperplane has {self.v - 2}"
            )
        return subspace.points

    def hyperplane_translate(self, points: Iterable[int]) -> Optional[int]:
        """Smallest t with points + t equal to the default hyperplane, if any"""
        target = self.default_hyperplane
        pts = sorted({int(p) % self.v_q for p in points})
        if len(pts) != len(target):
            return None
        target_set = set(target)
        shifts = sorted({(h - pts[0]) % self.v_q for h in target})
        for t in shifts:
            if all((p + t) % self.v_q in target_set for p in pts):
                return t
        return None

    def point_sum(self, points: Iterable[int]) -> FieldElement:
        """Field sum of the lifts g^x"""
        acc = None
        for x in points:
            acc = self.field.add_exponents(acc, int(x) % self.v_q)
        return self.field.element(acc)


def blocks_are_subspaces(ctx: SingerContext, rows: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """
    Vectorized subspace test for equal-size point sets (one per row): a set
    of [d+1]_q points closed under lines is a d-subspace.
    """
    rows = np.sort(np.asarray(rows, dtype=np.int64) % ctx.v_q, axis=1)
    count, size = rows.shape
    result = np.zeros(count, dtype=bool)
    sizes = {q_bracket(d, ctx.q) for d in range(1, ctx.v + 1)}
    if size not in sizes:
        return result
    if size == 1:
        result[:] = True
        return result

    distinct = np.all(np.diff(rows, axis=1) != 0, axis=1)
    ii, jj = np.triu_indices(size, 1)
    order = ctx.field.order
    stride = ctx.v_q + 1
    for start in range(0, count, chunk):
        block = rows[start: start + chunk]
        offsets = (np.arange(block.shape[0], dtype=np.int64) * stride)[:, None]
        flat = (block + offsets).ravel()
        ok = distinct[start: start + chunk].copy()
        a = block[:, ii]
        b = block[:, jj]
        for s in ctx._scalars.tolist():
            z = ctx.field.zech_array[(b - a + s) % order]
            third = np.where(z == ZERO_SENTINEL, -1, (a + z) % ctx.v_q)
            # Row offsets keep every row's lookups inside its own range
            keys = third + offsets
            pos = np.minimum(np.searchsorted(flat, keys.ravel()), flat.size - 1)
            found = (flat[pos] == keys.ravel()).reshape(keys.shape)
            ok &= found.all(axis=1)
        result[start: start + chunk] = ok
    return result
