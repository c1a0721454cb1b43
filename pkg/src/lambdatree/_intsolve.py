"""Integer linear systems ``A x = b`` via column-style Hermite reduction."""

from __future__ import annotations


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_solve(A: list[list[int]], b: list[int], n: int | None = None):
    """Solve ``A x = b`` over the integers.

    ``A`` is ``m x n``. Returns ``(x0, kernel)`` where ``x0`` is one integer
    solution and ``kernel`` is a Z-basis of ``{x : A x = 0}``, or ``None`` when
    no integer solution exists.
    """
    m = len(A)
    if n is None:
        n = len(A[0]) if m else 0
    if m == 0:
        return [0] * n, [[int(i == j) for i in range(n)] for j in range(n)]
    H = [list(map(int, row)) for row in A]
    # U accumulates the column operations: A U = H.
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i: int, j: int, a: int, b_: int, c: int, d: int) -> None:
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for M in (H, U):
            for row in M:
                ri, rj = row[i], row[j]
                row[i] = a * ri + b_ * rj
                row[j] = c * ri + d * rj

    pivots: list[tuple[int, int]] = []
    col = 0
    for r in range(m):
        if col >= n:
            break
        for j in range(col + 1, n):
            if H[r][j] == 0:
                continue
            a, bb = H[r][col], H[r][j]
            g, s, t = _ext_gcd(a, bb)
            # [[s, -bb/g], [t, a/g]] has determinant 1
            colop(col, j, s, t, -bb // g, a // g)
        if H[r][col] != 0:
            if H[r][col] < 0:
                for M in (H, U):
                    for row in M:
                        row[col] = -row[col]
            pivots.append((r, col))
            col += 1

    # Forward substitution H y = b over the pivot columns.
    y = [0] * n
    resid = list(map(int, b))
    for r in range(m):
        piv = next((c for (pr, c) in pivots if pr == r), None)
        if piv is None:
            if resid[r] != 0:
                return None
            continue
        q, rem = divmod(resid[r], H[r][piv])
        if rem:
            return None
        y[piv] = q
        for rr in range(r, m):
            resid[rr] -= H[rr][piv] * q
    if any(resid):
        return None
    x0 = [sum(U[i][k] * y[k] for k in range(n)) for i in range(n)]
    kernel = [[U[i][k] for i in range(n)] for k in range(len(pivots), n)]
    return x0, kernel
