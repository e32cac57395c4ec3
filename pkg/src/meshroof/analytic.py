"""Closed-form heaviest router-to-router link loads for paired all-to-all
placements.

Setting: M origin-destination core pairs sit on routers marked by a binary
placement matrix, every origin core sends to every destination core, and
loads are counted in units of N messages (the per-core neuron count drops
out). Router-to-core and core-to-router links then all carry exactly M, so
the router-to-router maximum computed here decides whether a placement
beats that floor.

The cumulative-sum formula is stated for leftward links; rightward follows
by mirror symmetry and the vertical directions by transposition. Results
carry the per-direction maxima alongside the overall maximum because the
named closed forms (rectangle, square, X, diagonal) are leftward
identities, while the heaviest link overall takes the best of all four
directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, NamedTuple

from .errors import ValidationError
from .placement import PlacementMatrix

DIRECTIONS = ("left", "right", "up", "down")


@dataclass(frozen=True)
class LinkWitness:
    """Departing router of a maximizing directed link (1-based coords)."""

    direction: str
    row: int
    col: int


@dataclass(frozen=True)
class AnalyticLoad:
    """Heaviest router-to-router load in units of N messages.

    ``value`` is the maximum over the four directions; ``by_direction``
    keeps each direction's own maximum (``left`` is the literal cumulative
    sum formula). ``at_link`` names the first link attaining ``value`` in
    (left, right, up, down) then row-major order; None when the grid has no
    router-to-router traffic at all.
    """

    value: int
    at_link: LinkWitness | None
    colsums: tuple[int, ...]
    by_direction: dict[str, int]


def nll_eq2(p: PlacementMatrix) -> AnalyticLoad:
    """Evaluate the cumulative-colsum link-load formula on all four
    directions and return the per-direction and overall maxima."""
    n, m = p.n, p.m
    grid = p.entries
    rowsums = p.row_sums()
    colsums = p.col_sums()

    # prefix[i] = sum of first i values (1-based convenience)
    def prefix(values: Iterable[int]) -> list[int]:
        out = [0]
        for v in values:
            out.append(out[-1] + v)
        return out

    colsum_pre = prefix(colsums)
    rowsum_pre = prefix(rowsums)
    colsum_total = colsum_pre[m]
    rowsum_total = rowsum_pre[n]
    row_pre = [prefix(row) for row in grid]
    col_pre = [prefix(grid[i][j] for i in range(n)) for j in range(m)]

    best: dict[str, int] = {d: 0 for d in DIRECTIONS}
    witness: LinkWitness | None = None
    overall = 0

    def consider(direction: str, row: int, col: int, load: int) -> None:
        nonlocal witness, overall
        if load > best[direction]:
            best[direction] = load
        if load > overall:
            overall = load
            witness = LinkWitness(direction, row, col)

    # Leftward link departs (i, l) toward (i, l-1): sources in row i at
    # columns >= l, destinations anywhere in columns < l.
    for i in range(1, n + 1):
        row_total = row_pre[i - 1][m]
        for l in range(2, m + 1):
            consider(
                "left", i, l,
                (row_total - row_pre[i - 1][l - 1]) * colsum_pre[l - 1],
            )
    # Rightward departs (i, l) toward (i, l+1).
    for i in range(1, n + 1):
        for l in range(1, m):
            consider(
                "right", i, l,
                row_pre[i - 1][l] * (colsum_total - colsum_pre[l]),
            )
    # Upward departs (r, l) toward (r-1, l): sources in rows >= r (any
    # column), destinations in column l above r.
    for r in range(2, n + 1):
        src = rowsum_total - rowsum_pre[r - 1]
        for l in range(1, m + 1):
            consider("up", r, l, src * col_pre[l - 1][r - 1])
    # Downward departs (r, l) toward (r+1, l).
    for r in range(1, n):
        src = rowsum_pre[r]
        for l in range(1, m + 1):
            consider(
                "down", r, l,
                src * (col_pre[l - 1][n] - col_pre[l - 1][r]),
            )

    return AnalyticLoad(overall, witness, colsums, best)


class RouteAccumulation(NamedTuple):
    """Result of naive per-route load accumulation."""

    value: int
    by_direction: dict[str, int]


def nll_bruteforce(p: PlacementMatrix) -> RouteAccumulation:
    """Independent oracle: walk the X-Y route of every ordered
    (origin router, destination router) pair and accumulate unit loads on
    each directed router-to-router link crossed."""
    occupied = p.occupied()
    loads: dict[tuple[str, int, int], int] = {}

    def bump(direction: str, row: int, col: int) -> None:
        key = (direction, row, col)
        loads[key] = loads.get(key, 0) + 1

    for src in occupied:
        for dst in occupied:
            j = src.j
            while j != dst.j:
                if dst.j < j:
                    bump("left", src.i, j)
                    j -= 1
                else:
                    bump("right", src.i, j)
                    j += 1
            i = src.i
            while i != dst.i:
                if dst.i < i:
                    bump("up", i, dst.j)
                    i -= 1
                else:
                    bump("down", i, dst.j)
                    i += 1

    best = {d: 0 for d in DIRECTIONS}
    for (direction, _, _), v in loads.items():
        if v > best[direction]:
            best[direction] = v
    return RouteAccumulation(max(best.values(), default=0), best)


# ---------------------------------------------------------------------------
# Named-pattern closed forms (leftward identities; equal to the overall
# maximum for the symmetric patterns, i.e. all but non-square rectangles).
# ---------------------------------------------------------------------------


def rect_load(n: int, m: int) -> int:
    """Saturated n x m rectangle: n * floor(m/2) * ceil(m/2). The integer
    maximization of the continuous n*m^2/4, which it equals for even m."""
    if n < 1 or m < 1:
        raise ValidationError("rectangle dimensions must be >= 1")
    return n * (m // 2) * ((m + 1) // 2)


def square_load(n: int) -> int:
    """Saturated square: n^3/4 for even n, i.e. M^(3/2)/4 with M = n^2."""
    return rect_load(n, n)


def x_shape_load(n: int) -> int:
    """X-shape on an even n x n grid: 2(n-1), i.e. M-2 with M = 2n."""
    if n < 2 or n % 2:
        raise ValidationError("x-shape needs an even grid size >= 2")
    return 2 * (n - 1)


def identity_load(n: int) -> int:
    """Main diagonal of an n x n grid: n-1, i.e. M-1 with M = n."""
    if n < 1:
        raise ValidationError("diagonal size must be >= 1")
    return n - 1


def nll_closed_form(kind: str, n: int, m: int | None = None) -> int:
    """Closed-form load by pattern name: rect (needs m), square, xshape,
    identity."""
    if kind == "rect":
        if m is None:
            raise ValidationError("rect needs m")
        return rect_load(n, m)
    if kind == "square":
        return square_load(n)
    if kind == "xshape":
        return x_shape_load(n)
    if kind == "identity":
        return identity_load(n)
    raise ValidationError(f"no closed form for pattern {kind!r}")


def nll_permutation_bound(n: int, a: int) -> int:
    """Upper bound a*M (with M = a*n) for generalized permutation
    placements whose row and column sums all equal ``a``. A bound, not an
    exact value: the identity diagonal (a = 1) achieves M-1 < M."""
    if not 1 <= a <= n:
        raise ValidationError(f"need 1 <= a <= n, got a={a}, n={n}")
    return a * a * n


class ScalingRow(NamedTuple):
    pattern: str
    pairs: int
    load: int
    routers: int


def scaling_table(kinds: Iterable[str], m_values: Iterable[int]) -> list[ScalingRow]:
    """Load and router-grid area per pattern as the pair count M scales.

    The square needs M to be a perfect square and occupies M routers; the
    X-shape needs M divisible by 4 (grid size M/2 must be even) and spans an
    (M/2)^2 router grid; the diagonal spans M^2.
    """
    rows = []
    for kind in kinds:
        for pairs in m_values:
            if kind == "square":
                n = isqrt(pairs)
                if n * n != pairs:
                    raise ValidationError(f"square needs a square M, got {pairs}")
                rows.append(ScalingRow(kind, pairs, square_load(n), pairs))
            elif kind == "xshape":
                n = pairs // 2
                if pairs % 4 or n < 2:
                    raise ValidationError(
                        f"x-shape needs M divisible by 4, got {pairs}"
                    )
                rows.append(ScalingRow(kind, pairs, x_shape_load(n), n * n))
            elif kind == "identity":
                rows.append(
                    ScalingRow(kind, pairs, identity_load(pairs), pairs * pairs)
                )
            else:
                raise ValidationError(f"scaling table cannot realize {kind!r}")
    return rows
