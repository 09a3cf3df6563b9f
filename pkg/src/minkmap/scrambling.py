"""Scrambling products and the pursuit game certifying them.

A column-stochastic matrix is scrambling when every two columns share a row
where both are positive; once every length-s branch product is scrambling,
infinite products collapse to rank one and the cylinder meshes vanish.
The bound s = (n+1)n/2 is certified by a pursuit game on the combined
incidence graph of the two branch matrices: vertex 1 carries the two
switchable self/step edges (1->1 active for digit 0, 1->2 for digit 1),
vertices 2..n step deterministically to their successor, and vertex n+1
may move to 1 or 2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import InvalidInput, StrategyViolation
from .exact import Mat
from .simplexes import base_matrices, check_word


def _positivity_rows(m) -> tuple[int, ...]:
    """Row bitmasks of strict positivity; validates nonnegativity."""
    rows = m.rows if isinstance(m, Mat) else tuple(tuple(r) for r in m)
    masks = []
    for row in rows:
        mask = 0
        for j, x in enumerate(row):
            if x < 0:
                raise InvalidInput("matrix must be nonnegative")
            if x > 0:
                mask |= 1 << j
        masks.append(mask)
    return tuple(masks)


def _col_masks(row_masks: Sequence[int], dim: int) -> list[int]:
    cols = [0] * dim
    for i, mask in enumerate(row_masks):
        m = mask
        while m:
            j = (m & -m).bit_length() - 1
            cols[j] |= 1 << i
            m &= m - 1
    return cols


def is_scrambling(m) -> bool:
    """Every pair of columns shares a row with both entries positive."""
    row_masks = _positivity_rows(m)
    cols = _col_masks(row_masks, len(row_masks))
    return all(c1 & c2 for c1, c2 in combinations(cols, 2))


def _bool_product(a_rows: Sequence[int], b_rows: Sequence[int]) -> tuple[int, ...]:
    """Zero-pattern product: row i of a*b is the OR of b's rows selected by a."""
    out = []
    for mask in a_rows:
        acc = 0
        m = mask
        while m:
            k = (m & -m).bit_length() - 1
            acc |= b_rows[k]
            m &= m - 1
        out.append(acc)
    return tuple(out)


def _is_scrambling_rows(row_masks: Sequence[int]) -> bool:
    cols = _col_masks(row_masks, len(row_masks))
    return all(c1 & c2 for c1, c2 in combinations(cols, 2))


@lru_cache(maxsize=None)
def _branch_patterns(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    base = base_matrices(n)
    return _positivity_rows(base.B0), _positivity_rows(base.B1)


def scrambling_bound(n: int) -> int:
    return (n + 1) * n // 2


def all_products_scrambling(n: int, length: int | None = None) -> bool:
    """Whether every product of `length` branch matrices is scrambling
    (default length: the bound (n+1)n/2).

    Products are explored from the right; once a suffix is scrambling every
    extension is too (no branch matrix has a zero column), so the search
    prunes hard and the exhaustive sweep stays cheap.
    """
    s = scrambling_bound(n) if length is None else length
    b0, b1 = _branch_patterns(n)
    ident = tuple(1 << i for i in range(n + 1))

    def dfs(suffix_product: tuple[int, ...], depth: int) -> bool:
        if _is_scrambling_rows(suffix_product):
            return True
        if depth == s:
            return False
        return dfs(_bool_product(b0, suffix_product), depth + 1) and dfs(
            _bool_product(b1, suffix_product), depth + 1
        )

    return dfs(ident, 0)


def minimal_scrambling_length(n: int, s_max: int | None = None) -> int:
    """Smallest s such that every length-s branch product is scrambling."""
    limit = s_max if s_max is not None else scrambling_bound(n) + 2
    for s in range(1, limit + 1):
        if all_products_scrambling(n, length=s):
            return s
    raise StrategyViolation(f"no scrambling length found up to {limit}")


def word_pattern_product(n: int, word: str) -> Mat:
    """Integer product A_{a_0} ... A_{a_{t-1}} (same zero pattern as the
    stochastic branch product)."""
    check_word(word)
    base = base_matrices(n)
    m = Mat.identity(n + 1)
    for a in word:
        m = m @ (base.A0, base.A1)[int(a)]
    return m


def stochastic_word_product(n: int, word: str) -> Mat:
    """Exact rational product B_{a_0} ... B_{a_{t-1}} (column-stochastic)."""
    check_word(word)
    base = base_matrices(n)
    m = Mat.identity(n + 1)
    for a in word:
        m = m @ (base.B0, base.B1)[int(a)]
    return m


# ---------------------------------------------------------------------------
# the pursuit game on the combined incidence graph


def moves(n: int, a: int, v: int) -> tuple[int, ...]:
    """Targets available from vertex v when edge e_a is the active one."""
    if v == 1:
        return (1,) if a == 0 else (2,)
    if v == n + 1:
        return (1, 2)
    return (v + 1,)


def backward_predecessor(n: int, v: int) -> int:
    """The unique vertex with a non-switchable edge into v."""
    if v in (1, 2):
        return n + 1
    return v - 1


def backward_distance(n: int, p: int, q: int) -> int | None:
    """Number of backward steps from p to q (None if unreachable)."""
    cur = p
    for k in range(1, n + 1):
        cur = backward_predecessor(n, cur)
        if cur == q:
            return k
    return None


def gap_defect(n: int, pair: frozenset[int]) -> tuple[int, int, int]:
    """(gap, defect, leading vertex) of an unordered pair of distinct
    vertices; ties for even n go to the vertex closer to 1 backwards."""
    p, q = sorted(pair)
    if p == q:
        raise ValueError("pair must be distinct")
    d_pq = backward_distance(n, p, q)
    d_qp = backward_distance(n, q, p)
    options = [(d, origin) for d, origin in ((d_pq, p), (d_qp, q)) if d is not None]
    if not options:
        raise StrategyViolation(f"pair {p, q} has no backward path")
    g = min(d for d, _ in options)
    leaders = [origin for d, origin in options if d == g]
    if len(leaders) == 1:
        lead = leaders[0]
    else:
        lead = min(leaders, key=lambda v: backward_distance(n, 1, v) or 0)
    defect = 0 if lead == 1 else backward_distance(n, 1, lead)
    if defect is None:
        raise StrategyViolation(f"leading vertex {lead} unreachable from 1")
    return g, defect, lead


def chi(n: int, pair: Iterable[int]) -> tuple[int, int]:
    g, d, _ = gap_defect(n, frozenset(pair))
    return g, d


def lovers_game_value(n: int) -> int:
    """Exact minimax value of the pursuit game: the adversary picks the
    active edge, then both pursuers move; value is the worst-case optimal
    number of moves to merge, maximized over starting pairs."""
    verts = range(1, n + 2)
    pairs = [frozenset(c) for c in combinations(verts, 2)]
    value: dict[frozenset, int] = {}
    bound = scrambling_bound(n)
    level = 0
    while len(value) < len(pairs):
        level += 1
        changed = False
        for pair in pairs:
            if pair in value:
                continue
            p, q = tuple(pair)
            ok_all_a = True
            for a in (0, 1):
                ok = False
                for mp, mq in product(moves(n, a, p), moves(n, a, q)):
                    if mp == mq or value.get(frozenset((mp, mq)), level) <= level - 1:
                        ok = True
                        break
                if not ok:
                    ok_all_a = False
                    break
            if ok_all_a:
                value[pair] = level
                changed = True
        if not changed:
            missing = [tuple(p) for p in pairs if p not in value]
            raise StrategyViolation(f"pairs never merge: {missing}")
    return max(value.values())


def strategy_simulate(n: int, start_pair: Iterable[int], adversary_word: str) -> int:
    """Play the explicit pursuit strategy against the given adversary digit
    choices; returns the move count at which the pursuers merge.

    Raises StrategyViolation if the (gap, defect) potential ever fails to
    decrease strictly, which would disprove the bound.
    """
    check_word(adversary_word)
    p, q = tuple(start_pair)
    if p == q:
        return 0
    if not (1 <= p <= n + 1 and 1 <= q <= n + 1):
        raise ValueError("vertices out of range")
    if len(adversary_word) < scrambling_bound(n):
        raise ValueError("adversary word shorter than the guaranteed bound")
    for move_no, c in enumerate(adversary_word, start=1):
        a = int(c)
        before = chi(n, (p, q))
        if {p, q} == {1, n + 1}:
            # both pursuers can reach the same vertex whichever edge is active
            p = q = 1 if a == 0 else 2
        elif n + 1 not in (p, q):
            p = moves(n, a, p)[0]
            q = moves(n, a, q)[0]
        else:
            if q == n + 1:
                p, q = q, p
            _, _, lead = gap_defect(n, frozenset((p, q)))
            q = moves(n, a, q)[0]
            p = 1 if lead == n + 1 else 2
        if p == q:
            if move_no > scrambling_bound(n):
                raise StrategyViolation("merge later than the guaranteed bound")
            return move_no
        after = chi(n, (p, q))
        if not after < before:
            raise StrategyViolation(
                f"potential did not decrease: {before} -> {after} at move {move_no}"
            )
    raise StrategyViolation("adversary word exhausted without a merge")


def stochastic_columns_sum_to_one(n: int, word: str) -> bool:
    m = stochastic_word_product(n, word)
    return all(
        sum(Fraction(m.rows[i][j]) for i in range(n + 1)) == 1 for j in range(n + 1)
    )
