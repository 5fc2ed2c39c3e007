"""Constructive decompositions of curve and divisor classes.

Two procedures:

* decompose_curve writes a curve class with a1, a2 >= 0, all b_i >= 0 and
  a1 + a2 >= sum(b_i) as a positive combination of the classes e_i, l_j - e_i
  and l_j, by repeatedly splitting off l_j - e_i with j the factor of larger
  remaining degree and i the point of largest remaining coefficient.

* table_decompose writes a divisor class on the blow-up of P^n x P^(n+1) at
  s <= n+2 points satisfying the effective-cone inequalities as a sum of
  exceptional divisors, classes H1 - sum_I E_i (|I| <= n) and classes
  H2 - sum_I E_i (|I| <= n+1).  The bookkeeping is a table with d1 + d2 rows
  (the parts) and n+1 columns: the top d1 rows have n cells, the bottom d2
  rows n+1 cells, and the cells are filled column by column, top to bottom,
  with m_i copies of each point in index order, never repeating a point
  inside a row.  table_decompose_avoiding runs the same fill under a per-row
  quota that keeps one prescribed fixed class from appearing among the parts.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .lattice import BlowupSpace, CurveClass, DivisorClass


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Decomposition:
    """A multiset of parts summing exactly to the target class."""

    target: object
    parts: tuple[tuple[object, int], ...]  # (class, multiplicity), canonical order
    table: "FillTable | None" = None

    def summed(self):
        total = 0 * self.target
        for cls, mult in self.parts:
            total = total + mult * cls
        return total

    def part_multiset(self):
        out = []
        for cls, mult in self.parts:
            out.extend([cls] * mult)
        return out

    def to_json_dict(self) -> dict:
        return {"target": str(self.target),
                "parts": [{"class": str(c), "multiplicity": m} for c, m in self.parts]}


@dataclass(frozen=True)
class FillTable:
    """The filled table behind a divisor decomposition (rows = parts)."""

    n: int
    d1: int
    d2: int
    rows: tuple[tuple[str, tuple[int, ...]], ...]  # (kind "H1"/"H2", sorted point indices)

    def render(self) -> str:
        width = max((len(f"E{i}") for _, row in self.rows for i in row), default=2)
        lines = []
        for kind, row in self.rows:
            cells = [f"E{i}" for i in row]
            ncells = self.n if kind == "H1" else self.n + 1
            cells += ["0"] * (ncells - len(cells))
            head, last = cells[:self.n], cells[self.n:] or ["0"]
            lines.append("[ " + " ".join(c.rjust(width) for c in head)
                         + " | " + " ".join(c.rjust(width) for c in last) + " ]")
            if kind == "H1" and lines and self.d1 and \
                    len(lines) == self.d1 and self.d2:
                lines.append("-" * len(lines[0]))
        return "\n".join(lines)


def _sorted_parts(parts):
    counted = {}
    for p in parts:
        counted[p] = counted.get(p, 0) + 1
    def key(item):
        cls = item[0]
        if isinstance(cls, DivisorClass):
            return (cls.d1, cls.d2, cls.mults)
        return (cls.a1, cls.a2, cls.excs)
    return tuple(sorted(counted.items(), key=key))


# Curve classes ----------------------------------------------------------------

def decompose_curve(v: CurveClass) -> Decomposition:
    """Positive combination of e_i, l_j - e_i and l_j summing to v.

    Needs a1, a2 >= 0 and a1 + a2 >= sum of the positive b_i; negative b_i
    are split off as copies of e_i first.
    """
    if v.a1 < 0 or v.a2 < 0:
        raise DecompositionError("curve class has negative degree on a factor")
    s = v.s
    parts = []
    b = list(v.excs)
    for i in range(s):
        if b[i] < 0:
            parts.extend([CurveClass(0, 0, tuple(-1 if j == i else 0 for j in range(s)))] * (-b[i]))
            b[i] = 0
    if v.a1 + v.a2 < sum(b):
        raise DecompositionError("degree too small: a1 + a2 < sum of b_i")
    a = [v.a1, v.a2]
    while True:
        i = max(range(s), key=lambda t: (b[t], -t))
        if b[i] == 0:
            break
        j = 0 if a[0] >= a[1] else 1
        part_exc = tuple(1 if t == i else 0 for t in range(s))
        parts.append(CurveClass(1 - j, j, part_exc))  # l_{j+1} - e_{i+1}
        a[j] -= 1
        b[i] -= 1
    zero = (0,) * s
    parts.extend([CurveClass(1, 0, zero)] * a[0])
    parts.extend([CurveClass(0, 1, zero)] * a[1])
    return Decomposition(v, _sorted_parts(parts))


# Divisor classes ---------------------------------------------------------------

def _effectivity_violation(n, d1, d2, mults):
    s = len(mults)
    if d1 < 0 or d2 < 0:
        return "a degree is negative"
    for i, m in enumerate(mults, start=1):
        if m > d1 + d2:
            return f"m_{i} > d1 + d2"
    bound = n * d1 + (n + 1) * d2
    for size in (n + 1, n + 2):
        if size > s:
            continue
        for I in combinations(range(s), size):
            if sum(mults[i] for i in I) > bound:
                return "a subset sum exceeds n*d1 + (n+1)*d2"
    return None


class _StuckFill(Exception):
    pass


class _Filler:
    """Distinct-per-row placement of point copies into the decomposition table.

    Cells are consumed in column-major order (first fit), which reproduces the
    hand construction on conflict-free inputs.  When first fit gets stuck the
    whole placement is redone as an exact maximum flow, which finds a valid
    table whenever one exists.  `quota` optionally caps, per row kind, how
    many points of a marked set a row may receive.
    """

    def __init__(self, n, d1, d2, quota=None):
        self.n = n
        self.d1 = d1
        self.d2 = d2
        # rows: top d1 of kind H1 with n cells, bottom d2 of kind H2 with n+1
        self.kinds = ["H1"] * d1 + ["H2"] * d2
        self.capacity = [n] * d1 + [n + 1] * d2
        self.members = [set() for _ in range(d1 + d2)]
        self.quota = quota  # (marked_set, {"H1": cap, "H2": cap}) or None
        self.cells = [r for c in range(n + 1) for r in range(d1 + d2)
                      if c < self.capacity[r]]
        self.cursor = 0
        self.free = []  # cells skipped by the cursor, in order

    def _admits(self, row, point):
        if point in self.members[row] or len(self.members[row]) >= self.capacity[row]:
            return False
        if self.quota is not None:
            marked, caps = self.quota
            if point in marked:
                cap = caps[self.kinds[row]]
                if sum(1 for p in self.members[row] if p in marked) >= cap:
                    return False
        return True

    def place(self, point):
        for pos, row in enumerate(self.free):
            if self._admits(row, point):
                del self.free[pos]
                self.members[row].add(point)
                return
        while self.cursor < len(self.cells):
            row = self.cells[self.cursor]
            self.cursor += 1
            if self._admits(row, point):
                self.members[row].add(point)
                return
            self.free.append(row)
        raise _StuckFill

    def fill_by_flow(self, counts):
        self.members = _flow_fill(self.kinds, self.capacity, counts, self.quota)

    def table(self) -> FillTable:
        rows = tuple((kind, tuple(sorted(mem))) for kind, mem in zip(self.kinds, self.members))
        return FillTable(self.n, self.d1, self.d2, rows)


def _flow_fill(kinds, capacity, counts, quota):
    """Assign counts[i] copies of each point to distinct rows by max flow.

    Network: source -> point -> row -> sink, with marked points routed through
    a per-row quota node.  Edmonds-Karp with deterministic neighbour order.
    """
    points = sorted(counts)
    nrows = len(kinds)
    marked = quota[0] if quota is not None else frozenset()
    caps = quota[1] if quota is not None else None
    source, sink = "S", "T"
    cap = {}
    adj = {source: [], sink: []}

    def add_edge(u, v, c):
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)
        adj.setdefault(u, [])
        adj.setdefault(v, [])
        if v not in adj[u]:
            adj[u].append(v)
        if u not in adj[v]:
            adj[v].append(u)

    for p in points:
        add_edge(source, ("p", p), counts[p])
    for r in range(nrows):
        add_edge(("r", r), sink, capacity[r])
        if caps is not None:
            add_edge(("q", r), ("r", r), caps[kinds[r]])
    for p in points:
        for r in range(nrows):
            if p in marked and caps is not None:
                add_edge(("p", p), ("q", r), 1)
            else:
                add_edge(("p", p), ("r", r), 1)

    total = sum(counts.values())
    flow = 0
    while flow < total:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    if v == sink:
                        break
                    queue.append(v)
        if sink not in parent:
            raise DecompositionError("no admissible table fill exists")
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1
    members = [set() for _ in range(nrows)]
    for p in points:
        for r in range(nrows):
            used = cap.get((("q", r), ("p", p)), 0) if p in marked and caps is not None \
                else cap.get((("r", r), ("p", p)), 0)
            if used:
                members[r].add(p)
    return members


def _run_fill(space, D, quota=None):
    n, s = space.n, space.s
    work = [max(m, 0) for m in D.mults]
    filler = _Filler(n, D.d1, D.d2, quota=quota)
    try:
        for i in range(s):
            for _ in range(work[i]):
                filler.place(i + 1)
    except _StuckFill:
        filler = _Filler(n, D.d1, D.d2, quota=quota)
        filler.fill_by_flow({i + 1: work[i] for i in range(s) if work[i] > 0})
    return filler


def _table_parts(space, D, filler):
    s = space.s
    parts = []
    for i, m in enumerate(D.mults, start=1):
        if m < 0:
            exc = DivisorClass(0, 0, tuple(-1 if j == i else 0 for j in range(1, s + 1)))
            parts.extend([exc] * (-m))
    for kind, members in zip(filler.kinds, filler.members):
        mults = tuple(1 if i in members else 0 for i in range(1, s + 1))
        parts.append(DivisorClass(1, 0, mults) if kind == "H1" else DivisorClass(0, 1, mults))
    return parts


def _check_table_space(space):
    if space.m != space.n + 1 or space.s > space.n + 2:
        raise DecompositionError(
            f"table decompositions are for the m = n+1 spaces with s <= n+2; got {space}")


def table_decompose(space: BlowupSpace, D: DivisorClass) -> Decomposition:
    """Decompose D into exceptional classes, H1 - sum_I E_i and H2 - sum_I E_i.

    Requires D to satisfy the defining inequalities of the effective cone
    (degrees nonnegative, m_i <= d1 + d2, subset sums at most n*d1+(n+1)*d2).
    """
    _check_table_space(space)
    reason = _effectivity_violation(space.n, D.d1, D.d2, D.mults)
    if reason is not None:
        raise DecompositionError(f"class is outside the effective cone: {reason}")
    filler = _run_fill(space, D)
    parts = _table_parts(space, D, filler)
    dec = Decomposition(D, _sorted_parts(parts), filler.table())
    assert dec.summed() == D
    return dec


def table_decompose_avoiding(space: BlowupSpace, D: DivisorClass,
                             avoid: DivisorClass) -> Decomposition:
    """Decompose D as in table_decompose with no part equal to `avoid`.

    `avoid` must be a fixed class H1 - sum_I E_i with |I| = n, or
    H2 - sum_I E_i with |I| = n+1, and its unclamped multiplicity bound
    K(D) must be <= 0 (otherwise every decomposition contains it).
    """
    _check_table_space(space)
    n, s = space.n, space.s
    marked = tuple(i for i, m in enumerate(avoid.mults, start=1) if m == 1)
    if (avoid.d1, avoid.d2) == (1, 0) and len(marked) == n and \
            all(m in (0, 1) for m in avoid.mults):
        k_value = sum(D.mults[i - 1] for i in marked) - (n - 1) * D.d1 - n * D.d2
        caps = {"H1": n - 1, "H2": n + 1}
    elif (avoid.d1, avoid.d2) == (0, 1) and len(marked) == n + 1 and \
            all(m in (0, 1) for m in avoid.mults):
        k_value = sum(D.mults[i - 1] for i in marked) - n * (D.d1 + D.d2)
        caps = {"H1": n, "H2": n}
    else:
        raise DecompositionError(
            "avoided class must be a fixed hyperplane pullback or a bilinear span divisor")
    if k_value > 0:
        raise DecompositionError(
            f"avoidance impossible: the class sits in the base locus {k_value} times")
    reason = _effectivity_violation(n, D.d1, D.d2, D.mults)
    if reason is not None:
        raise DecompositionError(f"class is outside the effective cone: {reason}")
    filler = _run_fill(space, D, quota=(frozenset(marked), caps))
    parts = _table_parts(space, D, filler)
    dec = Decomposition(D, _sorted_parts(parts), filler.table())
    assert dec.summed() == D
    assert all(cls != avoid for cls, _ in dec.parts)
    return dec
