"""Finite subsets of a group context and the sumset kernel.

A :class:`GSet` stores a canonically ordered, deduplicated element array:
mixed-radix indices for finite contexts, lexicographically sorted coordinate
rows for integer lattices.  Finite sets with ``|G| <= 2**24`` can also be
viewed as a dense bitmask (a Python int, bit ``i`` = element with index ``i``).

Two sumset kernels exist and must agree exactly:

* :func:`sumset_dense`  -- OR of translated bitmasks, word-parallel through
  big-int shifts (finite contexts, and one-dimensional lattice sets);
* :func:`sumset_sparse` -- explicit pairwise sums, then scatter into a
  direct-address table (finite) or sort/unique (lattice).

:func:`sumset` picks whichever is cheaper for the operands at hand.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import json

import numpy as np

from .errors import BadParams, ContextMismatch, EmptySet, Overflow
from .groups import (
    LATTICE_BOUND,
    CyclicMod,
    FiniteGroup,
    GroupCtx,
    IntegerLattice,
    VectorSpace,
    ctx_from_descriptor,
    same_ctx,
)

DENSE_LIMIT = 1 << 24
_SCATTER_LIMIT = 1 << 26
_PAIR_CHUNK = 1 << 22


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class GSet:
    """Immutable finite subset of ``ctx``."""

    __slots__ = ("ctx", "_data", "__dict__")

    def __init__(self, ctx: GroupCtx, elements: Iterable = ()):
        self.ctx = ctx
        elems = [ctx.element(x) for x in elements]
        if ctx.finite:
            idx = np.fromiter((ctx.canonical_index(x) for x in elems), dtype=np.int64, count=len(elems))
            self._data = _readonly(np.unique(idx))
        else:
            arr = np.array(elems, dtype=np.int64).reshape(-1, ctx.arity)
            self._data = _readonly(_lex_unique(arr))

    # constructors --------------------------------------------------------

    @classmethod
    def _raw(cls, ctx: GroupCtx, data: np.ndarray) -> "GSet":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._data = _readonly(data)
        return obj

    @classmethod
    def from_index(cls, ctx: FiniteGroup, idx) -> "GSet":
        idx = np.asarray(idx, dtype=np.int64)
        if idx.ndim > 1:
            raise ContextMismatch("from_index takes a flat sequence of indices")
        idx = np.unique(idx.ravel())
        if idx.size and (idx[0] < 0 or idx[-1] >= ctx.order):
            raise ContextMismatch(f"index outside [0, {ctx.order})")
        return cls._raw(ctx, idx)

    @classmethod
    def from_coords(cls, ctx: GroupCtx, coords) -> "GSet":
        arr = np.asarray(coords, dtype=np.int64).reshape(-1, ctx.arity)
        if ctx.finite:
            rad = np.asarray(ctx.radices, dtype=np.int64)
            if arr.size and ((arr < 0).any() or (arr >= rad).any()):
                raise ContextMismatch(f"coordinates not reduced for {ctx}")
            return cls._raw(ctx, np.unique(ctx.encode(arr)))
        _check_lattice(arr)
        return cls._raw(ctx, _lex_unique(arr))

    @classmethod
    def from_mask(cls, ctx: FiniteGroup, mask: int) -> "GSet":
        return cls._raw(ctx, mask_to_index(mask, ctx.order))

    @classmethod
    def interval(cls, start: int, stop: int, ctx: GroupCtx | None = None) -> "GSet":
        """``{start, ..., stop-1}`` in Z (or reduced into a cyclic ctx)."""
        ctx = ctx or IntegerLattice(1)
        vals = np.arange(start, stop, dtype=np.int64)
        if ctx.finite:
            return cls.from_index(ctx, vals % ctx.order)
        return cls._raw(ctx, vals.reshape(-1, 1))

    # views ----------------------------------------------------------------

    def __len__(self) -> int:
        return int(self._data.shape[0])

    @property
    def index(self) -> np.ndarray:
        if not self.ctx.finite:
            raise ContextMismatch("index view needs a finite context")
        return self._data

    @cached_property
    def coords(self) -> np.ndarray:
        if self.ctx.finite:
            return _readonly(self.ctx.digits(self._data))
        return self._data

    @cached_property
    def mask(self) -> int:
        if self.ctx.finite:
            if self.ctx.order > DENSE_LIMIT:
                raise ContextMismatch("dense bitmask only for |G| <= 2^24")
            return index_to_mask(self._data)
        raise ContextMismatch("bitmask view needs a finite context")

    def elements(self) -> list[tuple]:
        return [tuple(int(v) for v in row) for row in self.coords]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.elements())

    def __contains__(self, x) -> bool:
        x = self.ctx.element(x)
        if self.ctx.finite:
            i = self.ctx.canonical_index(x)
            pos = np.searchsorted(self._data, i)
            return bool(pos < len(self) and self._data[pos] == i)
        return bool(np.any(np.all(self._data == np.asarray(x, dtype=np.int64), axis=1)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GSet):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self._data, other._data)

    def __hash__(self) -> int:
        return hash((self.ctx, self._data.tobytes()))

    def __repr__(self) -> str:
        shown = self.elements()[:8]
        items = ", ".join(str(e[0]) if len(e) == 1 else str(e) for e in shown)
        more = ", ..." if len(self) > 8 else ""
        return f"GSet({self.ctx.label()}, {{{items}{more}}})"

    def element_at(self, i: int) -> tuple:
        return tuple(int(v) for v in self.coords[i])

    # set algebra ----------------------------------------------------------

    def union(self, other: "GSet") -> "GSet":
        same_ctx(self.ctx, other.ctx)
        if self.ctx.finite:
            return GSet._raw(self.ctx, np.union1d(self._data, other._data))
        return GSet._raw(self.ctx, _lex_unique(np.concatenate([self._data, other._data])))

    def intersection(self, other: "GSet") -> "GSet":
        same_ctx(self.ctx, other.ctx)
        ka, kb = joint_keys(self, other)
        return self._take(sorted_member(ka, kb))

    def difference(self, other: "GSet") -> "GSet":
        same_ctx(self.ctx, other.ctx)
        ka, kb = joint_keys(self, other)
        return self._take(~sorted_member(ka, kb))

    def issubset(self, other: "GSet") -> bool:
        same_ctx(self.ctx, other.ctx)
        if len(self) > len(other):
            return False
        ka, kb = joint_keys(self, other)
        return bool(sorted_member(ka, kb).all())

    def _take(self, sel) -> "GSet":
        return GSet._raw(self.ctx, self._data[sel])

    def subset(self, positions) -> "GSet":
        """Elements at the given canonical positions."""
        return GSet._raw(self.ctx, self._data[np.unique(np.asarray(positions, dtype=np.int64))])

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersection(other)

    def __sub__(self, other):
        return self.difference(other)

    def __le__(self, other):
        return self.issubset(other)


# helpers -----------------------------------------------------------------

def _check_lattice(arr: np.ndarray) -> None:
    if arr.size and (np.abs(arr).max() >= LATTICE_BOUND):
        raise Overflow("lattice coordinate magnitude reached 2^61")


def _lex_unique(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.int64)
    if arr.shape[0] == 0:
        return arr.reshape(0, arr.shape[1] if arr.ndim == 2 else 1)
    if arr.shape[1] == 1:
        return np.unique(arr[:, 0]).reshape(-1, 1)
    keys = _row_keys([arr])
    if keys is not None:
        _, first = np.unique(keys[0], return_index=True)
        return arr[first]
    return np.unique(arr, axis=0)


def _row_keys(arrays: list[np.ndarray]) -> list[np.ndarray] | None:
    """Order-preserving int64 keys for lattice rows, or None if the box is too big."""
    nonempty = [a for a in arrays if a.shape[0]]
    if not nonempty:
        return [np.zeros(0, dtype=np.int64) for _ in arrays]
    stacked = np.concatenate(nonempty)
    lo = stacked.min(axis=0)
    ext = stacked.max(axis=0) - lo + 1
    total = 1
    for e in ext.tolist():
        total *= int(e)
    if total >= (1 << 62):
        return None
    place = np.ones(len(ext), dtype=np.int64)
    for j in range(len(ext) - 2, -1, -1):
        place[j] = place[j + 1] * ext[j + 1]
    return [(a - lo) @ place if a.shape[0] else np.zeros(0, dtype=np.int64) for a in arrays]


def sorted_member(keys: np.ndarray, sorted_keys: np.ndarray) -> np.ndarray:
    """Boolean mask of ``keys`` found in the ascending array ``sorted_keys``."""
    if len(sorted_keys) == 0:
        return np.zeros(len(keys), dtype=bool)
    pos = np.searchsorted(sorted_keys, keys)
    pos[pos == len(sorted_keys)] = 0
    return sorted_keys[pos] == keys


def joint_keys(*sets: GSet) -> list[np.ndarray]:
    """int64 keys, consistent across ``sets``, ordered like the canonical order."""
    ctx = same_ctx(*(s.ctx for s in sets))
    if ctx.finite:
        return [s._data for s in sets]
    if ctx.arity == 1:
        return [s._data[:, 0] for s in sets]
    keys = _row_keys([s._data for s in sets])
    if keys is not None:
        return keys
    stacked = np.concatenate([s._data for s in sets])
    _, inv = np.unique(stacked, axis=0, return_inverse=True)
    inv = inv.ravel().astype(np.int64)
    out, pos = [], 0
    for s in sets:
        out.append(inv[pos:pos + len(s)])
        pos += len(s)
    return out


def index_to_mask(idx: np.ndarray) -> int:
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        return 0
    bits = np.zeros(int(idx.max()) + 1, dtype=bool)
    bits[idx] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def mask_to_index(mask: int, nbits: int | None = None) -> np.ndarray:
    if mask == 0:
        return np.zeros(0, dtype=np.int64)
    nbytes = (mask.bit_length() + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")
    if nbits is not None:
        bits = bits[:nbits]
    return np.flatnonzero(bits).astype(np.int64)


def positions_to_mask(pos: np.ndarray, nbits: int) -> int:
    bits = np.zeros(nbits, dtype=bool)
    bits[pos] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


# word-parallel translation -------------------------------------------------

class _MaskShifter:
    """Translates dense bitmasks of a finite context by group elements."""

    _cache: dict = {}

    def __init__(self, ctx: FiniteGroup):
        self.ctx = ctx
        self.full = (1 << ctx.order) - 1
        self._low: dict[tuple[int, int], int] = {}

    @classmethod
    def for_ctx(cls, ctx: FiniteGroup) -> "_MaskShifter":
        sh = cls._cache.get(ctx)
        if sh is None:
            sh = cls._cache[ctx] = cls(ctx)
        return sh

    def _low_mask(self, axis: int, s: int) -> int:
        key = (axis, s)
        m = self._low.get(key)
        if m is None:
            r = self.ctx.radices[axis]
            w = self.ctx.place_values[axis]
            block = r * w
            repeat = self.full // ((1 << block) - 1)
            m = ((1 << ((r - s) * w)) - 1) * repeat
            self._low[key] = m
        return m

    def translate(self, mask: int, digits) -> int:
        ctx = self.ctx
        for axis, s in enumerate(digits):
            s = int(s)
            if s == 0:
                continue
            r = ctx.radices[axis]
            w = ctx.place_values[axis]
            low = mask & self._low_mask(axis, s)
            mask = (low << (s * w)) | ((mask ^ low) >> ((r - s) * w))
        return mask


def translate_mask(ctx: FiniteGroup, mask: int, x) -> int:
    """Bitmask of ``A + x`` given the bitmask of ``A``."""
    x = ctx.element(x)
    if isinstance(ctx, CyclicMod):
        s, N = x[0], ctx.N
        if s == 0:
            return mask
        return ((mask << s) | (mask >> (N - s))) & ((1 << N) - 1)
    return _MaskShifter.for_ctx(ctx).translate(mask, x)


# sumset kernels ------------------------------------------------------------

def sumset_dense(A: GSet, B: GSet) -> GSet:
    """OR of shifted bitmasks."""
    ctx = same_ctx(A.ctx, B.ctx)
    if len(A) == 0 or len(B) == 0:
        return GSet._raw(ctx, A._data[:0])
    if len(B) > len(A):
        A, B = B, A
    if ctx.finite:
        if ctx.order > DENSE_LIMIT:
            raise ContextMismatch("dense kernel limited to |G| <= 2^24")
        base = A.mask
        out = 0
        if isinstance(ctx, CyclicMod):
            N, full = ctx.N, (1 << ctx.N) - 1
            for s in B._data.tolist():
                out |= ((base << s) | (base >> (N - s))) & full if s else base
        else:
            sh = _MaskShifter.for_ctx(ctx)
            for row in B.coords.tolist():
                out |= sh.translate(base, row)
        return GSet.from_mask(ctx, out)
    if ctx.arity != 1:
        raise ContextMismatch("dense kernel handles only one-dimensional lattices")
    a = A._data[:, 0]
    b = B._data[:, 0]
    a0, b0 = int(a[0]), int(b[0])
    base = index_to_mask(a - a0)
    out = 0
    for v in (b - b0).tolist():
        out |= base << v
    vals = mask_to_index(out) + (a0 + b0)
    vals = vals.reshape(-1, 1)
    _check_lattice(vals)
    return GSet._raw(ctx, vals)


def sumset_sparse(A: GSet, B: GSet) -> GSet:
    """Pairwise sums; direct-address scatter (finite) or sort/unique (lattice)."""
    ctx = same_ctx(A.ctx, B.ctx)
    if len(A) == 0 or len(B) == 0:
        return GSet._raw(ctx, A._data[:0])
    if ctx.finite:
        a, b = A._data, B._data
        rows = max(1, _PAIR_CHUNK // len(b))
        if ctx.order <= _SCATTER_LIMIT:
            hit = np.zeros(ctx.order, dtype=bool)
            for start in range(0, len(a), rows):
                hit[ctx.add_index(a[start:start + rows, None], b[None, :]).ravel()] = True
            return GSet._raw(ctx, np.flatnonzero(hit).astype(np.int64))
        acc = np.zeros(0, dtype=np.int64)
        for start in range(0, len(a), rows):
            acc = np.union1d(acc, ctx.add_index(a[start:start + rows, None], b[None, :]).ravel())
        return GSet._raw(ctx, acc)
    a, b = A._data, B._data
    sums = (a[:, None, :] + b[None, :, :]).reshape(-1, ctx.arity)
    _check_lattice(sums)
    return GSet._raw(ctx, _lex_unique(sums))


def _dense_cost(A: GSet, B: GSet) -> float | None:
    ctx = A.ctx
    small = min(len(A), len(B))
    if ctx.finite:
        if ctx.order > DENSE_LIMIT:
            return None
        axes = 1 if isinstance(ctx, CyclicMod) else max(1, ctx.arity // 2)
        return small * axes * (ctx.order / 64.0 + 8)
    if ctx.arity != 1:
        return None
    span = int(A._data[-1, 0] - A._data[0, 0]) + int(B._data[-1, 0] - B._data[0, 0]) + 1
    return small * (span / 64.0 + 8)


def sumset(A: GSet, B: GSet) -> GSet:
    """``{a + b : a in A, b in B}``."""
    same_ctx(A.ctx, B.ctx)
    if len(A) == 0 or len(B) == 0:
        return GSet._raw(A.ctx, A._data[:0])
    dense = _dense_cost(A, B)
    if dense is not None and dense < 4.0 * len(A) * len(B):
        return sumset_dense(A, B)
    return sumset_sparse(A, B)


def neg_set(A: GSet) -> GSet:
    ctx = A.ctx
    if ctx.finite:
        return GSet._raw(ctx, np.unique(ctx.neg_index(A._data)))
    return GSet._raw(ctx, _lex_unique(-A._data))


def difference_set(A: GSet, B: GSet) -> GSet:
    """``{a - b : a in A, b in B}``."""
    same_ctx(A.ctx, B.ctx)
    return sumset(A, neg_set(B))


def translate(A: GSet, x) -> GSet:
    ctx = A.ctx
    x = ctx.element(x)
    if ctx.finite:
        return GSet._raw(ctx, np.sort(ctx.add_index(A._data, ctx.canonical_index(x))))
    out = A._data + np.asarray(x, dtype=np.int64)
    _check_lattice(out)
    return GSet._raw(ctx, out)


def iterated_sumset(A: GSet, k: int) -> GSet:
    if k < 1:
        raise BadParams("iterated_sumset needs k >= 1")
    out = A
    for _ in range(k - 1):
        out = sumset(out, A)
    return out


def doubling_kappa(A: GSet) -> Fraction:
    if len(A) == 0:
        raise EmptySet("doubling constant of the empty set")
    return Fraction(len(sumset(A, A)), len(A))


def kappa_ab(A: GSet, B: GSet) -> Fraction:
    if len(A) == 0 or len(B) == 0:
        raise EmptySet("kappa(A, B) needs nonempty sets")
    return Fraction(len(sumset(A, B)), len(A))


def sum_table(A: GSet, B: GSet) -> tuple[GSet, np.ndarray]:
    """``(A+B, pos)`` where ``pos[i, j]`` is the position of ``a_i + b_j`` in ``A+B``."""
    ctx = same_ctx(A.ctx, B.ctx)
    if ctx.finite:
        sums = ctx.add_index(A._data[:, None], B._data[None, :])
        uniq, inv = np.unique(sums.ravel(), return_inverse=True)
        return GSet._raw(ctx, uniq), inv.reshape(len(A), len(B))
    sums = (A._data[:, None, :] + B._data[None, :, :]).reshape(-1, ctx.arity)
    _check_lattice(sums)
    if ctx.arity == 1:
        uniq, inv = np.unique(sums[:, 0], return_inverse=True)
        return GSet._raw(ctx, uniq.reshape(-1, 1)), inv.reshape(len(A), len(B))
    keys = _row_keys([sums])
    if keys is not None:
        _, first, inv = np.unique(keys[0], return_index=True, return_inverse=True)
        return GSet._raw(ctx, sums[first]), inv.reshape(len(A), len(B))
    uniq, inv = np.unique(sums, axis=0, return_inverse=True)
    return GSet._raw(ctx, uniq), inv.ravel().reshape(len(A), len(B))


# set literal files ---------------------------------------------------------

def format_set(S: GSet, comment: str | None = None) -> str:
    """Render ``S`` as a set literal file: a ctx header then one element per line."""
    lines = ["# sumsetlab set"]
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append("# ctx: " + json.dumps(S.ctx.descriptor(), separators=(",", ":")))
    for row in S.coords.tolist():
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_set(text: str, ctx: GroupCtx | None = None) -> GSet:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("ctx:") and ctx is None:
                ctx = ctx_from_descriptor(json.loads(body[4:]))
            continue
        try:
            rows.append(tuple(int(tok) for tok in line.split(",")))
        except ValueError:
            raise BadParams(f"bad set file line {raw!r}") from None
    if ctx is None:
        arity = len(rows[0]) if rows else 1
        ctx = IntegerLattice(arity)
    return GSet(ctx, rows)


def write_set(path, S: GSet, comment: str | None = None) -> None:
    Path(path).write_text(format_set(S, comment))


def read_set(path, ctx: GroupCtx | None = None) -> GSet:
    return parse_set(Path(path).read_text(), ctx)


def Z(values: Iterable[int]) -> GSet:
    """Shorthand for a subset of the integers."""
    return GSet(IntegerLattice(1), [int(v) for v in values])


def Zmod(N: int, values: Iterable[int]) -> GSet:
    return GSet(CyclicMod(N), [int(v) % N for v in values])


def F2(n: int, values: Iterable[int]) -> GSet:
    """Subset of F_2^n given by canonical indices (bit patterns)."""
    return GSet.from_index(VectorSpace(2, n), list(values))
