"""Independent oracles used by the tests.

These deliberately avoid all package machinery: the question-mark oracle
follows the classical nested mediant/midpoint construction on intervals,
and the inverse oracle is plain Gauss-Jordan written from scratch.
"""

from fractions import Fraction


def question_mark(x: Fraction) -> Fraction:
    """Classical order-preserving bijection [0,1] -> [0,1]: bisect by the
    mediant on one side and the midpoint on the other until x is hit.

    Terminates for every rational x (x shows up as a mediant eventually).
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0,1]")
    a, b = Fraction(0), Fraction(1)  # left endpoints pair (farey side)
    pa, qa, pb, qb = 0, 1, 1, 1  # a = pa/qa, b = pb/qb as farey neighbours
    u, v = Fraction(0), Fraction(1)  # dyadic side
    if x == 0:
        return Fraction(0)
    if x == 1:
        return Fraction(1)
    while True:
        pm, qm = pa + pb, qa + qb
        mid = (u + v) / 2
        m = Fraction(pm, qm)
        if x == m:
            return mid
        if x < m:
            pb, qb = pm, qm
            v = mid
        else:
            pa, qa = pm, qm
            u = mid


def gauss_inverse(rows):
    """Fraction Gauss-Jordan inverse, independent of the package."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        f = a[k][k]
        a[k] = [x / f for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                g = a[i][k]
                a[i] = [x - g * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def farey_vertex_sets(depth: int):
    """Vertices of the depth-t subdivision of [0,1] by repeated mediants,
    i.e. the classical increasing rational partitions, as a list of sets."""
    levels = [{Fraction(0), Fraction(1)}]
    pairs = [((0, 1), (1, 1))]
    for _ in range(depth):
        new_pairs = []
        verts = set(levels[-1])
        for (pa, qa), (pb, qb) in pairs:
            pm, qm = pa + pb, qa + qb
            verts.add(Fraction(pm, qm))
            new_pairs.append(((pa, qa), (pm, qm)))
            new_pairs.append(((pm, qm), (pb, qb)))
        pairs = new_pairs
        levels.append(verts)
    return levels
