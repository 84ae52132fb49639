"""Connectivity, profiles, subquandles, and isomorphism of quandle tables.

The profile of a quandle collects the cycle structures of its right
translations: a connected quandle has a single common structure, otherwise
the deduplicated structures are listed in lexicographic order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import CycleStructure, Permutation, QuandleTable, right_translation
from .errors import IndexOutOfRange, ParamOutOfRange, ProfileInconsistency, SizeLimitExceeded
from .limits import DEFAULT_ENUM_CAP, resolve_cap

# Closure computations run a plain worklist until the working set reaches this
# size, then switch to a vectorized fixpoint (only worthwhile on big tables).
_WORKLIST_LIMIT = 16

# The all-pairs closure matrix costs n(n-1)/2 * n bytes; past this order the
# subquandle enumeration falls back to per-seed closures.
_PAIR_MATRIX_LIMIT = 512


@dataclass(frozen=True)
class Profile:
    """Deduplicated translation cycle structures; one entry when connected."""

    structures: tuple[CycleStructure, ...]
    connected_form: CycleStructure | None

    @property
    def connected(self) -> bool:
        return self.connected_form is not None

    def __str__(self) -> str:
        if self.connected_form is not None:
            return str(self.connected_form)
        return "[" + "; ".join(str(s) for s in self.structures) + "]"


def orbits(q: QuandleTable) -> tuple[tuple[int, ...], ...]:
    """Orbit partition under the group generated by all right translations."""
    parent = list(range(q.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, row in enumerate(q.rows):
        # row x lists x * j for every j, so x joins each of its products
        for v in row:
            rx, rv = find(x), find(v - 1)
            if rx != rv:
                parent[rv] = rx
    groups: dict[int, list[int]] = {}
    for x in range(q.n):
        groups.setdefault(find(x), []).append(x + 1)
    return tuple(tuple(g) for g in sorted(groups.values()))


def is_connected(q: QuandleTable) -> bool:
    """True when the right translations act transitively."""
    return len(orbits(q)) == 1


def is_latin(q: QuandleTable) -> bool:
    """True when every row is also a bijection (left translations invert)."""
    full = list(range(1, q.n + 1))
    return all(sorted(row) == full for row in q.rows)


def profile(q: QuandleTable) -> Profile:
    """Profile of q; raises ProfileInconsistency if a connected table's
    translations disagree (impossible for a valid table, kept as a guard)."""
    structures = [right_translation(q, i).cycle_structure() for i in range(1, q.n + 1)]
    if is_connected(q):
        first = structures[0]
        for i, s in enumerate(structures[1:], start=2):
            if s != first:
                raise ProfileInconsistency(
                    f"connected table with differing structures at 1 and {i}"
                )
        return Profile((first,), first)
    return Profile(tuple(sorted(set(structures))), None)


def _closure0(rows0, tbl: np.ndarray | None, seed0, base0=()) -> frozenset[int]:
    """Closure of base0 | seed0 (0-based labels) under the operation.

    base0 must already be closed; products inside it are skipped.
    """
    member = set(base0)
    elems: list[int] = sorted(member)
    start = len(elems)
    for s in sorted(seed0):
        if s not in member:
            member.add(s)
            elems.append(s)
    if tbl is not None and len(elems) > _WORKLIST_LIMIT:
        return _closure_np(tbl, elems[start:], elems[:start])
    i = start
    while i < len(elems):
        x = elems[i]
        rx = rows0[x]
        for j in range(i + 1):
            y = elems[j]
            p = rx[y]
            if p not in member:
                member.add(p)
                elems.append(p)
            p = rows0[y][x]
            if p not in member:
                member.add(p)
                elems.append(p)
        if tbl is not None and len(elems) > _WORKLIST_LIMIT:
            return _closure_np(tbl, member)
        i += 1
    return frozenset(member)


def _closure_np(tbl: np.ndarray, seed0, base0=()) -> frozenset[int]:
    """Grow only the frontier: each round multiplies new elements against
    everything known, both orders; known-known products were already taken."""
    n = tbl.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[list(base0)] = True
    frontier = np.array(sorted(seed0), dtype=np.intp)
    frontier = frontier[~mask[frontier]]
    mask[frontier] = True
    size = int(mask.sum())
    while frontier.size:
        if size == n:
            return frozenset(range(n))
        idx = np.flatnonzero(mask)
        hit = np.zeros(n, dtype=bool)
        hit[tbl[frontier[:, None], idx].ravel()] = True
        hit[tbl[idx[:, None], frontier].ravel()] = True
        frontier = np.flatnonzero(hit & ~mask)
        mask |= hit
        size += frontier.size
    return frozenset(np.flatnonzero(mask).tolist())


def _close_mask(tbl: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Fixpoint of all-pairs products over a boolean mask, in place."""
    n = tbl.shape[0]
    size = int(mask.sum())
    while size < n:
        idx = np.flatnonzero(mask)
        mask[tbl[idx[:, None], idx].ravel()] = True
        grown = int(mask.sum())
        if grown == size:
            break
        size = grown
    return mask


def _pair_closure_matrix(tbl: np.ndarray):
    """Closure of every unordered pair, one boolean row per pair.

    Each translation R_g is an automorphism, so closure({a*g, b*g}) is the
    image of closure({a, b}) under R_g.  One direct closure per pair orbit;
    the rest are permutation gathers.
    """
    n = tbl.shape[0]
    inv_cols = np.argsort(tbl, axis=0)  # inv_cols[j, g] = the i with i*g = j
    pair_id = np.full((n, n), -1, dtype=np.int32)
    mat = np.zeros((n * (n - 1) // 2, n), dtype=bool)
    next_id = 0
    queue: deque[tuple[int, int]] = deque()
    for x in range(n):
        for y in range(x + 1, n):
            if pair_id[x, y] >= 0:
                continue
            mat[next_id, list(_closure_np(tbl, (x, y)))] = True
            pair_id[x, y] = next_id
            next_id += 1
            queue.append((x, y))
            while queue:
                a, b = queue.popleft()
                vec = mat[pair_id[a, b]]
                lo = np.minimum(tbl[a], tbl[b])
                hi = np.maximum(tbl[a], tbl[b])
                for g in np.flatnonzero(pair_id[lo, hi] < 0):
                    a2, b2 = int(lo[g]), int(hi[g])
                    if pair_id[a2, b2] >= 0:
                        continue
                    mat[next_id] = vec[inv_cols[:, g]]
                    pair_id[a2, b2] = next_id
                    next_id += 1
                    queue.append((a2, b2))
    return pair_id, mat


def _enumerate_sets_np(tbl: np.ndarray) -> set[frozenset[int]]:
    """Closed-subset BFS over boolean masks keyed by their bytes."""
    n = tbl.shape[0]
    pair_id, mat = _pair_closure_matrix(tbl)
    known: dict[bytes, np.ndarray] = {}
    for x in range(n):
        v = np.zeros(n, dtype=bool)
        v[x] = True
        known[v.tobytes()] = v
    layer: list[np.ndarray] = []
    for x in range(n):  # extending a singleton is exactly a pair closure
        for y in range(x + 1, n):
            v = mat[pair_id[x, y]]
            key = v.tobytes()
            if key not in known:
                v = v.copy()
                known[key] = v
                layer.append(v)
    while layer:
        grown: list[np.ndarray] = []
        for svec in layer:
            s_idx = np.flatnonzero(svec)
            for e in np.flatnonzero(~svec):
                ids = pair_id[np.minimum(s_idx, e), np.maximum(s_idx, e)]
                u = svec | mat[ids].any(axis=0)
                if not u.all():
                    u = _close_mask(tbl, u)
                key = u.tobytes()
                if key not in known:
                    known[key] = u
                    grown.append(u)
        layer = grown
    return {frozenset(np.flatnonzero(v).tolist()) for v in known.values()}


def _enumerate_sets_worklist(rows0, tbl, n: int) -> set[frozenset[int]]:
    """Closed-subset BFS over frozensets using the scalar closure."""
    known: set[frozenset[int]] = set()
    layer: list[frozenset[int]] = []
    for x in range(n):
        s = frozenset((x,))  # singletons are closed by idempotency
        known.add(s)
        layer.append(s)
    tried: set[frozenset[int]] = set()
    while layer:
        grown: list[frozenset[int]] = []
        for s in layer:
            for e in range(n):
                if e in s:
                    continue
                seed = s | {e}
                if seed in tried:
                    continue
                tried.add(seed)
                t = _closure0(rows0, tbl, (e,), s)
                if t not in known:
                    known.add(t)
                    grown.append(t)
        layer = grown
    return known


def subquandle_closure(q: QuandleTable, seed) -> frozenset[int]:
    """Smallest subset containing seed and closed under the operation."""
    seed = set(seed)
    if not seed:
        raise ParamOutOfRange("closure needs a non-empty seed")
    for x in seed:
        if not 1 <= x <= q.n:
            raise IndexOutOfRange(f"label {x} outside 1..{q.n}")
    rows0 = tuple(tuple(v - 1 for v in row) for row in q.rows)
    tbl = np.array(rows0, dtype=np.int32) if q.n > 48 else None
    return frozenset(x + 1 for x in _closure0(rows0, tbl, {x - 1 for x in seed}))


def subtable(q: QuandleTable, elements) -> QuandleTable:
    """Extract the table induced on a closed subset, relabeled 1..k by rank."""
    elems = sorted(set(elements))
    for x in elems:
        if not 1 <= x <= q.n:
            raise IndexOutOfRange(f"label {x} outside 1..{q.n}")
    rank = {x: r for r, x in enumerate(elems, start=1)}
    rows = []
    for a in elems:
        row = []
        for b in elems:
            v = q.rows[a - 1][b - 1]
            row.append(rank.get(v, 0))  # 0 marks escape; validation rejects it
        rows.append(row)
    return QuandleTable.from_rows(rows)


@dataclass(frozen=True)
class SubquandleEntry:
    """One closed subset: its elements (1-based), induced profile, iso class.

    iso_class is the index (into the inventory) of the first entry isomorphic
    to this one, so entries sharing iso_class form an isomorphism class.
    """

    elements: tuple[int, ...]
    order: int
    profile: Profile
    iso_class: int


@dataclass(frozen=True)
class SubquandleInventory:
    parent_order: int
    entries: tuple[SubquandleEntry, ...]

    def classes(self) -> dict[int, tuple[int, ...]]:
        """Map from class representative index to member entry indices."""
        out: dict[int, list[int]] = {}
        for i, e in enumerate(self.entries):
            out.setdefault(e.iso_class, []).append(i)
        return {k: tuple(v) for k, v in sorted(out.items())}

    def non_trivial_proper(self) -> tuple[int, ...]:
        """Indices of entries with 1 < order < parent order."""
        return tuple(
            i for i, e in enumerate(self.entries) if 1 < e.order < self.parent_order
        )


def enumerate_subquandles(
    q: QuandleTable, max_order: int | None = None
) -> SubquandleInventory:
    """All closed subsets, by breadth-first growth from singleton closures.

    Every known subset is extended by one outside element and closed;
    deduplication is by element set.  Entries are sorted by (order, elements)
    and grouped into isomorphism classes.
    """
    cap = resolve_cap(max_order, DEFAULT_ENUM_CAP)
    if q.n > cap:
        raise SizeLimitExceeded(f"order {q.n} exceeds enumeration cap {cap}")
    rows0 = tuple(tuple(v - 1 for v in row) for row in q.rows)
    tbl = np.array(rows0, dtype=np.int32) if q.n > 48 else None
    if tbl is not None and q.n <= _PAIR_MATRIX_LIMIT:
        known = _enumerate_sets_np(tbl)
    else:
        known = _enumerate_sets_worklist(rows0, tbl, q.n)

    subsets = sorted(known, key=lambda s: (len(s), sorted(s)))
    tables = []
    profiles = []
    for s in subsets:
        elems = tuple(x + 1 for x in sorted(s))
        sub = subtable(q, elems)
        tables.append((elems, sub))
        profiles.append(profile(sub))

    # Group into isomorphism classes, bucketed by (order, profile) first.
    iso_class = [0] * len(subsets)
    buckets: dict[tuple, list[int]] = {}
    for i, (elems, sub) in enumerate(tables):
        buckets.setdefault((len(elems), profiles[i].structures), []).append(i)
    for members in buckets.values():
        reps: list[int] = []
        for i in members:
            for r in reps:
                if are_isomorphic(tables[i][1], tables[r][1]) is not None:
                    iso_class[i] = r
                    break
            else:
                reps.append(i)
                iso_class[i] = i

    entries = tuple(
        SubquandleEntry(elems, len(elems), profiles[i], iso_class[i])
        for i, (elems, sub) in enumerate(tables)
    )
    return SubquandleInventory(q.n, entries)


def _element_invariants(q: QuandleTable) -> list[tuple]:
    """Cheap per-element isomorphism invariant: translation cycle lengths
    plus fixed-point count."""
    out = []
    for i in range(1, q.n + 1):
        p = right_translation(q, i)
        lengths = tuple(sorted(len(c) for c in p.cycles()))
        out.append((lengths, len(p.fixed_points())))
    return out


def are_isomorphic(q1: QuandleTable, q2: QuandleTable) -> Permutation | None:
    """A bijection f with f(x * y) = f(x) * f(y), or None.

    Backtracking over images, ordered by fewest candidates first; every
    assignment is propagated through the operation, which pins down most of
    the map once a generating set is assigned.
    """
    if q1.n != q2.n:
        return None
    n = q1.n
    inv1 = _element_invariants(q1)
    inv2 = _element_invariants(q2)
    if sorted(inv1) != sorted(inv2):
        return None
    t1 = q1.rows
    t2 = q2.rows
    buckets: dict[tuple, list[int]] = {}
    for v in range(1, n + 1):
        buckets.setdefault(inv2[v - 1], []).append(v)
    cands = {x: buckets[inv1[x - 1]] for x in range(1, n + 1)}
    order = sorted(range(1, n + 1), key=lambda x: (len(cands[x]), x))

    fwd = [0] * (n + 1)
    bwd = [0] * (n + 1)
    assigned: list[int] = []  # domain elements in assignment order

    def assign(x: int, v: int, trail: list[int]) -> bool:
        stack = [(x, v)]
        while stack:
            a, b = stack.pop()
            cur = fwd[a]
            if cur:
                if cur != b:
                    return False
                continue
            if bwd[b] or inv1[a - 1] != inv2[b - 1]:
                return False
            fwd[a] = b
            bwd[b] = a
            assigned.append(a)
            trail.append(a)
            i = 0
            while i < len(assigned):
                c = assigned[i]
                d = fwd[c]
                stack.append((t1[a - 1][c - 1], t2[b - 1][d - 1]))
                stack.append((t1[c - 1][a - 1], t2[d - 1][b - 1]))
                i += 1
        return True

    def undo(trail: list[int]) -> None:
        for a in reversed(trail):
            b = fwd[a]
            fwd[a] = 0
            bwd[b] = 0
            assigned.pop()  # trail order matches append order

    def backtrack(pos: int) -> bool:
        while pos < n and fwd[order[pos]]:
            pos += 1
        if pos == n:
            return True
        x = order[pos]
        for v in cands[x]:
            if bwd[v]:
                continue
            trail: list[int] = []
            if assign(x, v, trail) and backtrack(pos + 1):
                return True
            undo(trail)
        return False

    if not backtrack(0):
        return None
    f = Permutation(fwd[1:])
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            if f(t1[x - 1][y - 1]) != t2[f(x) - 1][f(y) - 1]:
                return None  # unreachable; guards the propagation logic
    return f
