"""Exact integer linear algebra: Smith normal form and friends.

This is the oracle everything else is checked against, so it is kept
simple and self-verifying: every Smith decomposition is validated by
multiplying back before it is returned.

Matrices are dense, entries are Python ints (arbitrary precision), and
instances are desk-scale, so no attempt is made at asymptotic cleverness.
The only performance concession is the pivoting rule: always pick a
nonzero entry of minimal absolute value to keep coefficient growth down.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Optional, Sequence

Vector = tuple[int, ...]


class IntMatrix:
    """Integer matrix with explicit shape and optional basis labels.

    The shape is stored explicitly so zero-row and zero-column matrices
    (edgeless graphs, empty generator lists) behave like any other.
    """

    __slots__ = ("entries", "nrows", "ncols", "row_labels", "col_labels")

    def __init__(self, entries: Iterable[Iterable[int]], ncols: Optional[int] = None,
                 row_labels: Sequence = (), col_labels: Sequence = ()):
        self.entries: tuple[Vector, ...] = tuple(
            tuple(int(x) for x in row) for row in entries)
        self.nrows = len(self.entries)
        if self.entries:
            widths = {len(r) for r in self.entries}
            if len(widths) != 1:
                raise ValueError("ragged matrix")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ValueError("declared column count does not match entries")
        else:
            self.ncols = ncols if ncols is not None else len(col_labels)
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        if self.row_labels and len(self.row_labels) != self.nrows:
            raise ValueError("row label count does not match row count")
        if self.col_labels and len(self.col_labels) != self.ncols:
            raise ValueError("column label count does not match column count")

    @property
    def rows(self) -> int:
        return self.nrows

    @property
    def cols(self) -> int:
        return self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix)
                and self.nrows == other.nrows and self.ncols == other.ncols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.entries))

    def column(self, j: int) -> Vector:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def transpose(self) -> "IntMatrix":
        rows = ([self.entries[i][j] for i in range(self.nrows)]
                for j in range(self.ncols))
        return IntMatrix(rows, ncols=self.nrows,
                         row_labels=self.col_labels, col_labels=self.row_labels)

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, {self.entries!r})"


def matrix(rows: Iterable[Iterable[int]], ncols: Optional[int] = None,
           row_labels: Sequence = (), col_labels: Sequence = ()) -> IntMatrix:
    return IntMatrix(rows, ncols=ncols, row_labels=row_labels, col_labels=col_labels)


def _bezout(a: int, b: int) -> tuple[int, int]:
    """(sigma, tau) with sigma*a + tau*b = gcd(a, b)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return s0, t0


def matrix_from_columns(cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
    for c in cols:
        if len(c) != nrows:
            raise ValueError("column length does not match row count")
    rows = ([c[i] for c in cols] for i in range(nrows))
    return IntMatrix(rows, ncols=len(cols))


def zero_matrix(rows: int, cols: int) -> IntMatrix:
    return IntMatrix(((0,) * cols for _ in range(rows)), ncols=cols)


def identity_matrix(n: int) -> IntMatrix:
    return IntMatrix((tuple(1 if i == j else 0 for j in range(n))
                      for i in range(n)), ncols=n)


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    bt = list(zip(*b.entries)) if b.entries else []
    if not bt:
        bt = [(0,) * b.rows] * b.cols if b.cols else []
    out = (tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
           for row in a.entries)
    return IntMatrix(out, ncols=b.cols, row_labels=a.row_labels,
                     col_labels=b.col_labels)


def mat_vec(a: IntMatrix, v: Sequence[int]) -> Vector:
    if len(v) != a.cols:
        raise ValueError("vector length does not match column count")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a.entries)


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = a.rows
    if n != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(row) for row in a.entries]
    sign = 1
    denom = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // denom
            m[i][k] = 0
        denom = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == S with U, V unimodular and S in Smith normal form."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.s.rows, self.s.cols)
        diag = [self.s[i, i] for i in range(n)]
        while diag and diag[-1] == 0:
            diag.pop()
        return tuple(diag)

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Compute U, S, V with U*A*V = S diagonal, d1 | d2 | ... | dr > 0.

    Row operations accumulate in U, column operations in V; the result is
    verified by multiplying back before returning.
    """
    m, n = a.rows, a.cols
    s = [list(row) for row in a.entries]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            s[i], s[j] = s[j], s[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in s:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in s:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # Re-pick the minimal-absolute-value pivot every round; remainders
        # from the quotient steps keep shrinking it, which both guarantees
        # termination and keeps coefficient growth tame.
        pivot = None
        best = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                x = row[j]
                if x != 0 and (best is None or abs(x) < best):
                    best, pivot = abs(x), (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        p = s[t][t]
        dirty = False
        for i in range(t + 1, m):
            if s[i][t] != 0:
                add_row(i, t, -(s[i][t] // p))
                dirty = dirty or s[i][t] != 0
        for j in range(t + 1, n):
            if s[t][j] != 0:
                add_col(j, t, -(s[t][j] // p))
                dirty = dirty or s[t][j] != 0
        if dirty or any(s[i][t] for i in range(t + 1, m)) \
                or any(s[t][j] for j in range(t + 1, n)):
            continue  # smaller remainders exist; re-pick the pivot

        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    # Divisibility chain: fold pairs (d_i, d_j) into (gcd, lcm) with local
    # unimodular transforms; cheaper than re-running the elimination.
    from math import gcd as _gcd

    def chain_fix(i, j):
        a, b = s[i][i], s[j][j]
        if a == 0 or b % a == 0:
            return
        g = _gcd(a, b)
        lo, hi = a // g, b // g
        sigma, tau = _bezout(a, b)
        # U2 = [[sigma, tau], [-hi, lo]], V2 = [[1, -tau*hi], [1, sigma*lo]]
        ui, uj = u[i], u[j]
        u[i] = [sigma * x + tau * y for x, y in zip(ui, uj)]
        u[j] = [-hi * x + lo * y for x, y in zip(ui, uj)]
        for row in v:
            x, y = row[i], row[j]
            row[i] = x + y
            row[j] = -tau * hi * x + sigma * lo * y
        s[i][i], s[j][j] = g, a * b // g

    rank_now = sum(1 for k in range(min(m, n)) if s[k][k] != 0)
    for i in range(rank_now):
        for j in range(i + 1, rank_now):
            chain_fix(i, j)

    dec = SmithDecomposition(
        IntMatrix(u, ncols=m),
        IntMatrix(s, ncols=n),
        IntMatrix(v, ncols=n),
    )
    check = matmul(matmul(dec.u, IntMatrix(a.entries, ncols=n)), dec.v)
    if check != dec.s:
        raise AssertionError("Smith decomposition failed to multiply back")
    return dec


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus elementary divisors.

    Divisors are > 1 and each divides the next; the torsion subgroup is
    the direct sum of Z/d over the divisors.
    """

    rank: int
    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        for d in self.divisors:
            if d <= 1:
                raise ValueError(f"elementary divisor must be > 1, got {d}")
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a != 0:
                raise ValueError(f"divisor chain broken: {a} does not divide {b}")

    @property
    def torsion_order(self) -> int:
        return prod(self.divisors) if self.divisors else 1

    def p_exponent(self, p: int) -> int:
        """val_p of the torsion order; the p-torsion has order p**this."""
        total = 0
        for d in self.divisors:
            while d % p == 0:
                d //= p
                total += 1
        return total

    def p_part_exponents(self, p: int) -> tuple[int, ...]:
        """Exponents e with the p-primary part isomorphic to +Z/p**e."""
        out = []
        for d in self.divisors:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                out.append(e)
        return tuple(sorted(out))

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.divisors

    def __str__(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{d}" for d in self.divisors]
        return " + ".join(parts) if parts else "0"


def factorize(n: int, bound: int = 10**7) -> dict[int, int]:
    """Prime factorization by trial division; raises beyond `bound`."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
        if d > bound:
            raise ValueError("factorization bound exceeded")
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def group_from_cyclic_orders(rank: int, orders: Iterable[int]) -> AbelianGroup:
    """Canonical divisor chain of a direct sum of cyclic groups."""
    primary: dict[int, list[int]] = {}
    for c in orders:
        for p, e in factorize(c).items():
            primary.setdefault(p, []).append(e)
    depth = max((len(es) for es in primary.values()), default=0)
    chain = [1] * depth
    for p, es in primary.items():
        es.sort(reverse=True)
        for slot, e in enumerate(es):
            chain[depth - 1 - slot] *= p ** e
    return AbelianGroup(rank, tuple(d for d in chain if d > 1))


def direct_sum(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    return group_from_cyclic_orders(a.rank + b.rank, a.divisors + b.divisors)


def cokernel_structure(a: IntMatrix) -> AbelianGroup:
    """Structure of Z^rows / (column span of A)."""
    dec = smith_normal_form(a)
    return AbelianGroup(a.rows - dec.rank,
                        tuple(d for d in dec.diagonal if d > 1))


def kernel_basis(a: IntMatrix) -> list[Vector]:
    """Integer lattice basis of {x : A x = 0}."""
    dec = smith_normal_form(a)
    return [dec.v.column(j) for j in range(a.cols) if j >= dec.rank]


def _val(n: int, p: int) -> int:
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return a


def kernel_mod(a: IntMatrix, p: int, s: int,
               check_cardinality: bool = True) -> list[Vector]:
    """Generators of {x : A x = 0 mod p**s} as a Z/p**s module.

    With U A V = S the kernel is spanned by the columns of V scaled by
    p**max(0, s - val_p(d_j)).  The generated set is checked against the
    cardinality predicted by the diagonal.
    """
    if s < 1:
        raise ValueError("modulus exponent must be >= 1")
    dec = smith_normal_form(a)
    diag = dec.diagonal
    ps = p ** s
    gens: list[Vector] = []
    expected_exp = 0
    for j in range(a.cols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            mult, contrib = 1, s
        else:
            vd = min(_val(d, p), s)
            mult, contrib = p ** (s - vd), vd
        expected_exp += contrib
        if mult < ps:
            col = dec.v.column(j)
            gens.append(tuple((x * mult) % ps for x in col))
    if check_cardinality:
        got = span_exponent_mod(gens, a.cols, p, s)
        if got != expected_exp:
            raise AssertionError(
                f"kernel generators span p^{got}, expected p^{expected_exp}")
    return gens


def span_exponent_mod(vectors: Sequence[Sequence[int]], n: int,
                      p: int, s: int) -> int:
    """e such that the Z/p**s span of the vectors in (Z/p**s)^n has order p**e."""
    ps = p ** s
    cols = [tuple(v) for v in vectors]
    cols += [tuple(ps if i == j else 0 for i in range(n)) for j in range(n)]
    dec = smith_normal_form(matrix_from_columns(cols, n))
    index = prod(dec.diagonal)  # |Z^n / span|; a power of p by construction
    return n * s - _val(index, p)


def solve_mod(a: IntMatrix, b: Sequence[int], p: int, s: int) -> Optional[Vector]:
    """Some x with A x = b mod p**s, or None if there is none."""
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match row count")
    if s < 0:
        raise ValueError("negative modulus exponent")
    ps = p ** s
    if ps == 1:
        return (0,) * a.cols
    dec = smith_normal_form(a)
    diag = dec.diagonal
    c = [x % ps for x in mat_vec(dec.u, b)]
    y = [0] * a.cols
    for i, d in enumerate(diag):
        ci = c[i]
        if ci == 0:
            continue
        vd = _val(d, p)
        if vd >= s:
            return None
        if _val(ci, p) < vd:
            return None
        unit = d // p ** vd
        y[i] = (ci // p ** vd) * pow(unit, -1, ps) % ps
    if any(c[i] != 0 for i in range(len(diag), a.rows)):
        return None
    x = mat_vec(dec.v, y)
    return tuple(xi % ps for xi in x)


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Optional[Vector]:
    """Some integer x with A x = b, or None."""
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match row count")
    dec = smith_normal_form(a)
    diag = dec.diagonal
    c = mat_vec(dec.u, b)
    y = [0] * a.cols
    for i, d in enumerate(diag):
        q, r = divmod(c[i], d)
        if r != 0:
            return None
        y[i] = q
    if any(c[i] != 0 for i in range(len(diag), a.rows)):
        return None
    return mat_vec(dec.v, y)


def quotient_structure(kernel: Sequence[Vector],
                       image: Sequence[Vector]) -> AbelianGroup:
    """Structure of (lattice spanned by `kernel`) / (span of `image`).

    `kernel` must be a lattice basis containing every `image` vector in
    its span.
    """
    if not kernel:
        if any(any(x != 0 for x in v) for v in image):
            raise ValueError("image vectors outside the zero lattice")
        return AbelianGroup(0)
    k = matrix_from_columns(kernel, len(kernel[0]))
    coords = []
    for w in image:
        y = solve_integer(k, w)
        if y is None:
            raise ValueError("image vector outside the kernel lattice")
        coords.append(y)
    return cokernel_structure(matrix_from_columns(coords, len(kernel)))
