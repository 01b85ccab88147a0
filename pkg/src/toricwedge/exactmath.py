"""Exact rational linear algebra and strict-inequality feasibility.

Everything here is computed over Python's Fraction type, so verdicts come
with witnesses that re-substitute exactly.  The feasibility engine is a
two-phase simplex with Bland's anti-cycling rule, maximizing an auxiliary
slack variable t (capped at 1); a system with strict inequalities is
feasible iff the optimal t is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd
from typing import Optional, Sequence

Q = Fraction


class DimensionMismatch(ValueError):
    pass


class NotSquare(ValueError):
    pass


class EmptyFamily(ValueError):
    pass


class OnesNotInKernel(ValueError):
    """Raised when kernel_with_ones is given a matrix with nonzero row sums."""


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _qvec(v) -> tuple[Fraction, ...]:
    return tuple(_q(x) for x in v)


@dataclass(frozen=True)
class QMatrix:
    """Immutable rational matrix, row-major.  0x0 and 0xN matrices are legal."""

    entries: tuple[tuple[Fraction, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "QMatrix":
        rows = tuple(_qvec(r) for r in rows)
        if rows:
            cols = len(rows[0])
            if any(len(r) != cols for r in rows):
                raise DimensionMismatch("ragged rows")
        elif cols is None:
            cols = 0
        return cls(rows, cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "QMatrix":
        return QMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def mul(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.entries[i]
            out.append(
                [sum((ri[k] * other.entries[k][j] for k in range(self.cols)), Q(0))
                 for j in range(other.cols)]
            )
        return QMatrix.from_rows(out, cols=other.cols)

    def mul_vector(self, v: Sequence) -> tuple[Fraction, ...]:
        v = _qvec(v)
        if self.cols != len(v):
            raise DimensionMismatch("matrix-vector size mismatch")
        return tuple(sum((r[k] * v[k] for k in range(self.cols)), Q(0)) for r in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def rank(self) -> int:
        _, pivots = _rref([list(r) for r in self.entries])
        return len(pivots)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def kernel_basis(m: QMatrix) -> QMatrix:
    """Basis of the right kernel of m, returned as the columns of a matrix.

    m.mul(result) is exactly zero and the result has m.cols - rank(m) columns.
    """
    rows, pivots = _rref([list(r) for r in m.entries])
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * m.cols
        v[f] = Q(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(v)
    # basis vectors become columns
    return QMatrix.from_rows(
        [[basis[j][i] for j in range(len(basis))] for i in range(m.cols)],
        cols=len(basis),
    )


def kernel_with_ones(m: QMatrix) -> QMatrix:
    """Kernel basis of m arranged so the last column is the all-ones vector.

    Requires the all-ones vector to lie in the kernel (zero row sums).  The
    returned matrix B satisfies m.mul(B) = 0, rank(B) = m.cols - rank(m), and
    row i of B reads as a labeled point with a trailing homogenizing 1.
    """
    if m.cols == 0:
        return QMatrix.from_rows([], cols=0)
    ones = [Q(1)] * m.cols
    if any(sum(r, Q(0)) != 0 for r in m.entries):
        raise OnesNotInKernel("row sums of the input are not all zero")
    kern = kernel_basis(m)
    # Greedily extend {ones} to a kernel basis by independent kernel columns.
    selected: list[list[Fraction]] = [ones]
    picked = QMatrix.from_rows([ones], cols=m.cols)
    for j in range(kern.cols):
        if len(selected) == kern.cols:
            break
        cand = list(kern.column(j))
        trial = QMatrix.from_rows(list(picked.entries) + [cand], cols=m.cols)
        if trial.rank() == len(selected) + 1:
            selected.append(cand)
            picked = trial
    order = selected[1:] + [selected[0]]  # ones column last
    return QMatrix.from_rows(
        [[order[j][i] for j in range(len(order))] for i in range(m.cols)],
        cols=len(order),
    )


def integer_det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix via fraction-free (Bareiss) elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSquare("matrix is not square")
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class StrictLinearSystem:
    """Linear system a.x = b / a.x <= b / a.x < b over a common dimension."""

    dimension: int
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    weak: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    strict: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()

    @classmethod
    def build(cls, dimension, equalities=(), weak=(), strict=()) -> "StrictLinearSystem":
        def conv(cons):
            out = []
            for a, b in cons:
                a = _qvec(a)
                if len(a) != dimension:
                    raise DimensionMismatch(
                        f"constraint length {len(a)} != dimension {dimension}")
                out.append((a, _q(b)))
            return tuple(out)

        return cls(dimension, conv(equalities), conv(weak), conv(strict))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Optional[tuple[Fraction, ...]] = None
    slack: Optional[Fraction] = None
    barycentric: Optional[tuple[tuple[Fraction, ...], ...]] = None


class _Simplex:
    """Exact simplex on an all-integer tableau with Bland's anti-cycling rule.

    Rows are integer vectors scaled independently (the basic variable of a row
    carries a positive integer coefficient rather than 1); the objective row
    alone is kept in rationals.  Fully deterministic.
    """

    def __init__(self, rows, basis, ncols):
        self.t = rows  # each row: int coefficients + [int rhs]
        self.basis = basis
        self.ncols = ncols

    def set_objective(self, objective):
        obj = list(objective) + [Q(0)]
        for i, b in enumerate(self.basis):
            if obj[b]:
                f = obj[b] / self.t[i][b]
                row = self.t[i]
                for j, v in enumerate(row):
                    if v:
                        obj[j] -= f * v
        self.obj = obj

    def maximize(self) -> Fraction:
        t, basis, obj = self.t, self.basis, self.obj
        while True:
            entering = -1
            for j in range(self.ncols):
                if obj[j] > 0:
                    entering = j
                    break  # Bland: lowest index
            if entering < 0:
                return -obj[-1]
            leaving = -1
            bnum = bden = 0
            for i in range(len(t)):
                piv = t[i][entering]
                if piv > 0:
                    rhs = t[i][-1]
                    if leaving < 0:
                        leaving, bnum, bden = i, rhs, piv
                    else:
                        cmp = rhs * bden - bnum * piv
                        if cmp < 0 or (cmp == 0 and basis[i] < basis[leaving]):
                            leaving, bnum, bden = i, rhs, piv
            if leaving < 0:
                raise ArithmeticError("unbounded objective in simplex phase")
            self.pivot(leaving, entering)

    def pivot(self, row: int, col: int):
        t = self.t
        prow = t[row]
        if prow[col] < 0:
            # only reachable when driving a zero-valued artificial out
            assert prow[-1] == 0
            prow = [-x for x in prow]
            t[row] = prow
        pv = prow[col]
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(len(t)):
            if i == row:
                continue
            ri = t[i]
            f = ri[col]
            if f:
                for j in range(len(ri)):
                    ri[j] = pv * ri[j]
                for j in nz:
                    ri[j] -= f * prow[j]
                g = 0
                for v in ri:
                    if v:
                        g = _gcd(g, v)
                        if g == 1:
                            break
                if g > 1:
                    for j in range(len(ri)):
                        ri[j] //= g
        obj = self.obj
        f = obj[col]
        if f:
            fq = f / pv
            for j in nz:
                obj[j] -= fq * prow[j]
        self.basis[row] = col

    def solution(self) -> list[Fraction]:
        out = [Q(0)] * self.ncols
        for i, b in enumerate(self.basis):
            out[b] = Q(self.t[i][-1], self.t[i][b])
        return out


def strict_feasible(sys: StrictLinearSystem) -> FeasibilityResult:
    """Decide exact feasibility of a system with strict inequalities.

    Maximizes an auxiliary slack t subject to a.x + t <= b for every strict
    constraint and t <= 1; the system is feasible iff the optimum is positive.
    The witness satisfies every equality exactly; the reported slack is the
    smallest strict-constraint margin.
    """
    dim = sys.dimension
    # variable layout: x+ (dim), x- (dim), t | slacks | artificials
    nx = 2 * dim + 1
    t_col = 2 * dim
    raw: list[tuple[list[Fraction], Fraction, str]] = []
    for a, b in sys.equalities:
        raw.append(([*a, *(-c for c in a), Q(0)], b, "eq"))
    for a, b in sys.weak:
        raw.append(([*a, *(-c for c in a), Q(0)], b, "le"))
    for a, b in sys.strict:
        raw.append(([*a, *(-c for c in a), Q(1)], b, "le"))
    raw.append(([Q(0)] * (2 * dim) + [Q(1)], Q(1), "le"))

    m = len(raw)
    nslack = sum(1 for r in raw if r[2] == "le")
    # artificials only for equality rows and flipped inequality rows
    need_art = [kind == "eq" or rhs < 0 for _, rhs, kind in raw]
    nart = sum(need_art)
    ncols = nx + nslack + nart
    rows = []
    basis = []
    si = 0
    ai = 0
    for idx, (coef, rhs, kind) in enumerate(raw):
        scale = 1
        for v in coef + [rhs]:
            scale = scale * v.denominator // _gcd(scale, v.denominator)
        line = [int(v * scale) for v in coef] + [0] * (nslack + nart)
        rhs_i = int(rhs * scale)
        if kind == "le":
            line[nx + si] = scale
            slack_col = nx + si
            si += 1
        else:
            slack_col = None
        if rhs_i < 0:
            line = [-x for x in line]
            rhs_i = -rhs_i
        if need_art[idx]:
            art_col = nx + nslack + ai
            line[art_col] = 1
            basis.append(art_col)
            ai += 1
        else:
            basis.append(slack_col)
        rows.append(line + [rhs_i])
    tab = _Simplex(rows, basis, ncols)

    if nart:
        phase1 = [Q(0)] * ncols
        for j in range(nx + nslack, ncols):
            phase1[j] = Q(-1)
        tab.set_objective(phase1)
        if tab.maximize() != 0:
            return FeasibilityResult(False)
        for i in range(len(tab.t)):
            if tab.basis[i] >= nx + nslack:
                col = next((j for j in range(nx + nslack) if tab.t[i][j] != 0), None)
                if col is not None:
                    tab.pivot(i, col)
        live = [i for i in range(len(tab.t)) if tab.basis[i] < nx + nslack]
        tab.t = [tab.t[i][: nx + nslack] + [tab.t[i][-1]] for i in live]
        tab.basis = [tab.basis[i] for i in live]
        tab.ncols = nx + nslack

    phase2 = [Q(0)] * tab.ncols
    phase2[t_col] = Q(1)
    tab.set_objective(phase2)
    topt = tab.maximize()
    if topt <= 0:
        return FeasibilityResult(False)
    sol = tab.solution()
    witness = tuple(sol[j] - sol[dim + j] for j in range(dim))
    dot = lambda a: sum((ai_ * xi for ai_, xi in zip(a, witness)), Q(0))
    margins = [b - dot(a) for a, b in sys.strict]
    slack = min(margins) if margins else topt
    return FeasibilityResult(True, witness, slack)


def _affine_hull_constraints(points: Sequence[tuple[Fraction, ...]]):
    """Equalities n.x = b cutting out the affine hull of the given points."""
    dim = len(points[0])
    homog = QMatrix.from_rows([[*p, Q(-1)] for p in points], cols=dim + 1)
    kern = kernel_basis(homog)
    out = []
    for j in range(kern.cols):
        col = kern.column(j)
        out.append((col[:dim], col[dim]))
    return out


def _barycentric_functionals(points: Sequence[tuple[Fraction, ...]]):
    """For affinely independent points, the linear maps x -> barycentric coords.

    Returns rows (coeffs, const) with lambda_j(x) = coeffs.x + const, or None
    when the points are affinely dependent.
    """
    dim = len(points[0])
    k = len(points)
    mat = QMatrix.from_rows([[*p, Q(1)] for p in points], cols=dim + 1)  # k x (dim+1)
    if mat.rank() != k:
        return None
    mt = mat.transpose()
    gram = mat.mul(mt)  # k x k, invertible
    inv = _invert(gram)
    lam = inv.mul(mat)  # k x (dim+1); lambda(x) = lam . (x, 1)
    return [(lam.row(j)[:dim], lam.row(j)[dim]) for j in range(k)]


def _invert(m: QMatrix) -> QMatrix:
    n = m.rows
    aug = [list(m.entries[i]) + [Q(1) if j == i else Q(0) for j in range(n)] for i in range(n)]
    red, pivots = _rref(aug)
    if len(pivots) != n or pivots != list(range(n)):
        raise ArithmeticError("matrix not invertible")
    return QMatrix.from_rows([r[n:] for r in red], cols=n)


def _cofactor_matrix(m: list[list[int]]) -> list[list[int]]:
    n = len(m)
    cof = [[0] * n for _ in range(n)]
    for r in range(n):
        rows = [row for i, row in enumerate(m) if i != r]
        for c in range(n):
            minor = [row[:c] + row[c + 1:] for row in rows]
            cof[r][c] = (-1) ** (r + c) * integer_det(minor)
    return cof


def relint_intersection(families: Sequence[Sequence[Sequence]], dimension: Optional[int] = None
                        ) -> FeasibilityResult:
    """Decide whether the relative interiors of the convex hulls intersect.

    Uses x in relint conv(S) iff x is a strictly positive convex combination
    of S.  When every family is affinely independent the barycentric weights
    are linear in x and eliminated from the program; otherwise they stay as
    explicit variables.  Returns the witness x and one barycentric tuple per
    family, in input order.
    """
    fams = [tuple(_qvec(p) for p in fam) for fam in families]
    for fam in fams:
        if not fam:
            raise EmptyFamily("every family must contain at least one point")
    dim = len(fams[0][0]) if dimension is None else dimension
    for fam in fams:
        if any(len(p) != dim for p in fam):
            raise DimensionMismatch("families live in different ambient dimensions")

    # full-simplex fast path: barycentric coords of x are cofactor functionals
    # lambda_j(x) = scale*(cof[j] . (x,1)) / det, all integer data
    if all(len(fam) == dim + 1 for fam in fams):
        cofdets = []
        ok = True
        for fam in fams:
            scale = 1
            for p in fam:
                for v in p:
                    scale = scale * v.denominator // _gcd(scale, v.denominator)
            m = [[int(v * scale) for v in p] + [scale] for p in fam]
            det = integer_det(m)
            if det == 0:
                ok = False
                break
            cofdets.append((_cofactor_matrix(m), det, scale))
        if ok:
            strict = []
            seen = set()
            for cof, det, _ in cofdets:
                sgn = 1 if det > 0 else -1
                for j in range(dim + 1):
                    row = [-sgn * cof[j][c] for c in range(dim)]
                    const = sgn * cof[j][dim]
                    g = 0
                    for v in row:
                        g = _gcd(g, v)
                    g = _gcd(g, const)
                    if g > 1:
                        row = [v // g for v in row]
                        const //= g
                    key = (tuple(row), const)
                    if key not in seen:
                        seen.add(key)
                        strict.append((row, const))
            res = strict_feasible(StrictLinearSystem.build(dim, (), (), strict))
            if not res.feasible:
                return res
            x = res.witness
            bary = []
            for cof, det, scale in cofdets:
                lams = []
                for j in range(dim + 1):
                    num = sum((cof[j][c] * x[c] for c in range(dim)), Q(0)) + cof[j][dim]
                    lams.append(num * scale / det)
                bary.append(tuple(lams))
            return FeasibilityResult(True, x, res.slack, tuple(bary))

    functionals = [_barycentric_functionals(fam) for fam in fams]
    if all(f is not None for f in functionals):
        equalities = []
        strict = []
        for fam, funcs in zip(fams, functionals):
            if len(fam) < dim + 1:
                equalities.extend(_affine_hull_constraints(fam))
            for coeffs, const in funcs:
                # lambda_j(x) > 0  <=>  -coeffs.x < const
                strict.append((tuple(-c for c in coeffs), const))
        res = strict_feasible(StrictLinearSystem.build(dim, equalities, (), strict))
        if not res.feasible:
            return res
        x = res.witness
        bary = tuple(
            tuple(sum((c * xi for c, xi in zip(coeffs, x)), Q(0)) + const
                  for coeffs, const in funcs)
            for funcs in functionals
        )
        return FeasibilityResult(True, x, res.slack, bary)

    # general encoding: variables (x, all lambda)
    sizes = [len(fam) for fam in fams]
    offsets = []
    total = dim
    for s in sizes:
        offsets.append(total)
        total += s
    equalities = []
    strict = []
    for fi, fam in enumerate(fams):
        off = offsets[fi]
        for c in range(dim):
            row = [Q(0)] * total
            row[c] = Q(-1)
            for j, p in enumerate(fam):
                row[off + j] = p[c]
            equalities.append((row, Q(0)))
        row = [Q(0)] * total
        for j in range(len(fam)):
            row[off + j] = Q(1)
        equalities.append((row, Q(1)))
        for j in range(len(fam)):
            row = [Q(0)] * total
            row[off + j] = Q(-1)
            strict.append((row, Q(0)))
    res = strict_feasible(StrictLinearSystem.build(total, equalities, (), strict))
    if not res.feasible:
        return res
    w = res.witness
    bary = tuple(tuple(w[offsets[fi] + j] for j in range(sizes[fi])) for fi in range(len(fams)))
    return FeasibilityResult(True, w[:dim], res.slack, bary)


def verify_result(sys: StrictLinearSystem, res: FeasibilityResult) -> bool:
    """Re-substitute a feasibility witness; used by tests and certificates."""
    if not res.feasible:
        return res.witness is None
    x = res.witness
    dot = lambda a: sum((ai * xi for ai, xi in zip(a, x)), Q(0))
    if any(dot(a) != b for a, b in sys.equalities):
        return False
    if any(dot(a) > b for a, b in sys.weak):
        return False
    return all(b - dot(a) >= res.slack > 0 for a, b in sys.strict)
