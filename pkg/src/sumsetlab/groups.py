"""Abelian group contexts and element arithmetic.

Elements are plain tuples of ints whose arity matches the context.  Finite
contexts are products of cyclic groups and number their elements by a
mixed-radix index (first coordinate most significant), so index order and
lexicographic coordinate order coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

from .errors import BadParams, ContextMismatch, Overflow, Unsupported

# |coordinate| must stay below this so the sum of two valid elements fits int64.
LATTICE_BOUND = 1 << 61

Element = tuple


class GroupCtx:
    """Common interface; concrete contexts are frozen dataclasses below."""

    arity: int
    finite: bool

    def zero(self) -> Element:
        return (0,) * self.arity

    def element(self, x) -> Element:
        """Coerce ``x`` (int for arity 1, or a coordinate sequence) and validate it."""
        if isinstance(x, (int, np.integer)):
            x = (int(x),)
        x = tuple(int(v) for v in x)
        if len(x) != self.arity:
            raise ContextMismatch(f"element {x} has arity {len(x)}, context {self} expects {self.arity}")
        self._check(x)
        return x

    def _check(self, x: Element) -> None:
        raise NotImplementedError

    def add(self, x, y) -> Element:
        raise NotImplementedError

    def neg(self, x) -> Element:
        raise NotImplementedError

    def scalar_mul(self, t: int, x) -> Element:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class IntegerLattice(GroupCtx):
    d: int = 1

    finite = False

    def __post_init__(self):
        if self.d < 1:
            raise BadParams("lattice dimension must be >= 1")

    @property
    def arity(self) -> int:
        return self.d

    def _check(self, x):
        for v in x:
            if not -LATTICE_BOUND < v < LATTICE_BOUND:
                raise Overflow(f"coordinate {v} outside (-2^61, 2^61)")

    def add(self, x, y):
        x, y = self.element(x), self.element(y)
        out = tuple(a + b for a, b in zip(x, y))
        self._check(out)
        return out

    def neg(self, x):
        return tuple(-v for v in self.element(x))

    def scalar_mul(self, t, x):
        out = tuple(int(t) * v for v in self.element(x))
        self._check(out)
        return out

    def descriptor(self):
        return {"kind": "lattice", "d": self.d}

    def label(self):
        return "Z" if self.d == 1 else f"Z^{self.d}"


class FiniteGroup(GroupCtx):
    """Product of cyclic factors ``Z_{r_0} x ... x Z_{r_{k-1}}``."""

    finite = True

    @property
    def radices(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def arity(self) -> int:
        return len(self.radices)

    @cached_property
    def order(self) -> int:
        out = 1
        for r in self.radices:
            out *= r
        return out

    @cached_property
    def place_values(self) -> tuple[int, ...]:
        vals, w = [], 1
        for r in reversed(self.radices):
            vals.append(w)
            w *= r
        return tuple(reversed(vals))

    def _check(self, x):
        for v, r in zip(x, self.radices):
            if not 0 <= v < r:
                raise ContextMismatch(f"coordinate {v} not reduced modulo {r} in {self}")

    def element(self, x):
        # integers are accepted unreduced for arity-1 contexts
        if isinstance(x, (int, np.integer)) and self.arity == 1:
            x = (int(x) % self.radices[0],)
        return super().element(x)

    def add(self, x, y):
        x, y = self.element(x), self.element(y)
        return tuple((a + b) % r for a, b, r in zip(x, y, self.radices))

    def neg(self, x):
        return tuple((-v) % r for v, r in zip(self.element(x), self.radices))

    def scalar_mul(self, t, x):
        return tuple((int(t) * v) % r for v, r in zip(self.element(x), self.radices))

    def canonical_index(self, x) -> int:
        x = self.element(x)
        return sum(v * w for v, w in zip(x, self.place_values))

    def from_index(self, i: int) -> Element:
        i = int(i)
        if not 0 <= i < self.order:
            raise ContextMismatch(f"index {i} outside [0, {self.order})")
        out = []
        for w, r in zip(self.place_values, self.radices):
            out.append((i // w) % r)
        return tuple(out)

    # vectorised index arithmetic -------------------------------------------

    def digits(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty((idx.shape[0], self.arity), dtype=np.int64)
        for j, (w, r) in enumerate(zip(self.place_values, self.radices)):
            out[:, j] = (idx // w) % r
        return out

    def encode(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.arity)
        return coords @ np.asarray(self.place_values, dtype=np.int64)

    def add_index(self, i, j) -> np.ndarray:
        """Index of x+y for broadcastable index arrays ``i``, ``j``."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        out = np.zeros(np.broadcast(i, j).shape, dtype=np.int64)
        for w, r in zip(self.place_values, self.radices):
            out += (((i // w) % r + (j // w) % r) % r) * w
        return out

    def neg_index(self, i) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        out = np.zeros_like(i)
        for w, r in zip(self.place_values, self.radices):
            out += ((-((i // w) % r)) % r) * w
        return out


@dataclass(frozen=True)
class CyclicMod(FiniteGroup):
    N: int = 2

    def __post_init__(self):
        if self.N < 2:
            raise BadParams("cyclic modulus must be >= 2")

    @property
    def radices(self):
        return (self.N,)

    def add_index(self, i, j):
        return (np.asarray(i, dtype=np.int64) + np.asarray(j, dtype=np.int64)) % self.N

    def neg_index(self, i):
        return (-np.asarray(i, dtype=np.int64)) % self.N

    def descriptor(self):
        return {"kind": "cyclic", "N": self.N}

    def label(self):
        return f"Z_{self.N}"


@dataclass(frozen=True)
class VectorSpace(FiniteGroup):
    p: int = 2
    n: int = 1

    def __post_init__(self):
        if not isprime(self.p):
            raise BadParams(f"vector space characteristic {self.p} is not prime")
        if self.n < 1:
            raise BadParams("vector space dimension must be >= 1")

    @property
    def radices(self):
        return (self.p,) * self.n

    def add_index(self, i, j):
        if self.p == 2:
            return np.bitwise_xor(np.asarray(i, dtype=np.int64), np.asarray(j, dtype=np.int64))
        return super().add_index(i, j)

    def neg_index(self, i):
        if self.p == 2:
            return np.asarray(i, dtype=np.int64).copy()
        return super().neg_index(i)

    def descriptor(self):
        return {"kind": "vector", "p": self.p, "n": self.n}

    def label(self):
        return f"F_{self.p}^{self.n}"


@dataclass(frozen=True)
class PrimeProduct(FiniteGroup):
    q: int = 2
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        allp = (self.q,) + self.primes
        if not all(isprime(p) for p in allp):
            raise BadParams(f"prime product factors {allp} must all be prime")
        if len(set(allp)) != len(allp):
            raise BadParams(f"prime product factors {allp} must be pairwise distinct")

    @property
    def radices(self):
        return (self.q,) + self.primes

    def descriptor(self):
        return {"kind": "primeproduct", "q": self.q, "primes": list(self.primes)}

    def label(self):
        return "Z_" + "xZ_".join(str(r) for r in self.radices)


def ctx_from_descriptor(desc: dict) -> GroupCtx:
    kind = desc.get("kind")
    try:
        if kind == "lattice":
            return IntegerLattice(int(desc.get("d", 1)))
        if kind == "cyclic":
            return CyclicMod(int(desc["N"]))
        if kind == "vector":
            return VectorSpace(int(desc["p"]), int(desc["n"]))
        if kind == "primeproduct":
            return PrimeProduct(int(desc["q"]), tuple(int(p) for p in desc["primes"]))
    except KeyError as exc:
        raise BadParams(f"context descriptor {desc} missing field {exc}") from None
    raise BadParams(f"unknown context kind {kind!r}")


# module-level spellings ----------------------------------------------------

def add(ctx: GroupCtx, x, y) -> Element:
    return ctx.add(x, y)


def neg(ctx: GroupCtx, x) -> Element:
    return ctx.neg(x)


def scalar_mul(ctx: GroupCtx, t: int, x) -> Element:
    return ctx.scalar_mul(t, x)


def canonical_index(ctx: GroupCtx, x) -> int:
    if not ctx.finite:
        raise Unsupported("canonical_index needs a finite context")
    return ctx.canonical_index(x)


def from_index(ctx: GroupCtx, i: int) -> Element:
    if not ctx.finite:
        raise Unsupported("from_index needs a finite context")
    return ctx.from_index(i)


def same_ctx(*ctxs: GroupCtx) -> GroupCtx:
    first = ctxs[0]
    for c in ctxs[1:]:
        if c != first:
            raise ContextMismatch(f"contexts differ: {first} vs {c}")
    return first


def elements_of(ctx: FiniteGroup) -> Iterable[Element]:
    for i in range(ctx.order):
        yield ctx.from_index(i)


def coerce_many(ctx: GroupCtx, xs: Sequence) -> list[Element]:
    return [ctx.element(x) for x in xs]
