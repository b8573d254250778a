"""Exact integer linear algebra on small matrices (lists of lists of ints)."""
from fractions import Fraction
from math import gcd


def vgcd(values):
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def primitive(vector):
    g = vgcd(vector)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(int(v) // g for v in vector)


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def det(matrix):
    """Exact determinant of a square matrix with integer or rational entries."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    if result.denominator == 1:
        return int(result)
    return result


def inverse(matrix):
    """Exact inverse over the rationals. Raises ValueError when singular."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def integer_inverse(matrix):
    inv = inverse(matrix)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def column_echelon(a):
    """Column-style Hermite reduction.

    Returns ``(H, U, pivots)`` with ``A @ U == H``, ``U`` unimodular, and
    ``pivots`` the list of ``(row, column)`` pivot positions. Columns past
    ``len(pivots)`` of ``H`` are zero, so the matching columns of ``U`` span
    the integer kernel of ``A``.
    """
    rows = len(a)
    n = len(a[0]) if rows else 0
    h = [list(map(int, row)) for row in a]
    u = identity(n)

    def combine(c1, c2, s, t, p, q):
        # new c1 = s*c1 + t*c2, new c2 = p*c1 + q*c2 (determinant +-1)
        for m in (h, u):
            for row in m:
                x, y = row[c1], row[c2]
                row[c1], row[c2] = s * x + t * y, p * x + q * y

    pivots = []
    col = 0
    for r in range(rows):
        if col >= n:
            break
        for c in range(col + 1, n):
            if h[r][c] == 0:
                continue
            x, y = h[r][col], h[r][c]
            g, s, t = xgcd(x, y)
            combine(col, c, s, t, -y // g, x // g)
        if h[r][col] != 0:
            if h[r][col] < 0:
                for m in (h, u):
                    for row in m:
                        row[col] = -row[col]
            pivots.append((r, col))
            col += 1
    return h, u, pivots


def solve_integer(a, b):
    """Integer solutions of ``A x = b``.

    Returns ``(x0, kernel)`` with ``kernel`` a list of basis vectors of the
    integer kernel, or ``None`` when no integer solution exists.
    """
    n = len(a[0])
    h, u, pivots = column_echelon(a)
    y = [0] * n
    k = 0
    for r in range(len(a)):
        partial = sum(h[r][c] * y[c] for c in range(k))
        if k < len(pivots) and pivots[k][0] == r:
            num = int(b[r]) - partial
            if num % h[r][k]:
                return None
            y[k] = num // h[r][k]
            k += 1
        elif partial != b[r]:
            return None
    rank = len(pivots)
    x0 = [sum(u[i][c] * y[c] for c in range(rank)) for i in range(n)]
    kernel = [[u[i][c] for i in range(n)] for c in range(rank, n)]
    return x0, kernel


def lex_min_abs(x0, kernel):
    """Element of ``x0 + span_Z(kernel)`` minimizing ``(|x_1|, |x_2|, ...)``
    lexicographically (positive value preferred on ties)."""
    x = list(x0)
    basis = [list(v) for v in kernel]
    for i in range(len(x)):
        if not basis:
            break
        coeffs = [v[i] for v in basis]
        g = vgcd(coeffs)
        if g == 0:
            continue
        r = x[i] % g
        low, high = x[i] - r, x[i] - r + g
        target = low if abs(low) < abs(high) or (abs(low) == abs(high) and low > 0) else high
        sol = solve_integer([coeffs], [target - x[i]])
        t, sub_kernel = sol
        for tj, v in zip(t, basis):
            x = [xi + tj * vi for xi, vi in zip(x, v)]
        basis = [[sum(s[j] * basis[j][c] for j in range(len(basis))) for c in range(len(x))]
                 for s in sub_kernel]
    return x


def minors_gcd(generators):
    """gcd of the maximal minors of the matrix whose rows are ``generators``."""
    from itertools import combinations

    k = len(generators)
    n = len(generators[0])
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, int(det([[v[c] for c in cols] for v in generators])))
    return g
