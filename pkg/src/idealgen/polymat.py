"""Dense matrices over K[x1..xr] and symbolic elementary matrices.

Row/column indices are 0-based throughout. An elementary matrix is kept as
an :class:`ElementaryOp` and only materialised on request.
"""

from dataclasses import dataclass

from .poly import Polynomial


class DimensionError(ValueError):
    pass


class PolyMatrix:
    """Immutable rows x cols grid of polynomials from one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries):
        entries = tuple(tuple(_coerce(ring, e) for e in row) for row in entries)
        if not entries or not entries[0]:
            raise DimensionError("a matrix needs at least one row and one column")
        width = len(entries[0])
        if any(len(r) != width for r in entries):
            raise DimensionError("ragged rows")
        self.ring = ring
        self.rows = len(entries)
        self.cols = width
        self.entries = entries

    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, rows, cols):
        zero = ring.zero()
        return cls(ring, [[zero] * cols for _ in range(rows)])

    @classmethod
    def column(cls, ring, polys):
        return cls(ring, [[p] for p in polys])

    @classmethod
    def stacked_identity(cls, ring, m, n):
        """[E_n; O_{(m-n) x n}]."""
        if m < n:
            raise DimensionError(f"need m >= n, got m={m}, n={n}")
        return cls.identity(ring, n).vstack(cls.zeros(ring, m - n, n)) if m > n else cls.identity(ring, n)

    @classmethod
    def padded_identity(cls, ring, n, m):
        """(E_n | O_{n x (m-n)})."""
        if m < n:
            raise DimensionError(f"need m >= n, got m={m}, n={n}")
        return cls.identity(ring, n).hstack(cls.zeros(ring, n, m - n)) if m > n else cls.identity(ring, n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return self.rows, self.cols

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(r[j] for r in self.entries)

    def column_list(self):
        if self.cols != 1:
            raise DimensionError("not a column vector")
        return [r[0] for r in self.entries]

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError(f"matrices over different rings: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} + {other.shape}")
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} - {other.shape}")
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return PolyMatrix(self.ring, [[-a for a in r] for r in self.entries])

    def __matmul__(self, other):
        return mat_mul(self, other)

    def scale(self, c):
        return PolyMatrix(self.ring, [[a.scale(c) for a in r] for r in self.entries])

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.entries))

    def is_zero(self):
        return all(not e for r in self.entries for e in r)

    def is_identity(self):
        return self.rows == self.cols and self == PolyMatrix.identity(self.ring, self.rows)

    def max_degree(self):
        return max(e.degree() for r in self.entries for e in r)

    def transpose(self):
        return PolyMatrix(self.ring, list(zip(*self.entries)))

    # -- blocks ------------------------------------------------------------

    def submatrix(self, r0, r1, c0, c1):
        return PolyMatrix(self.ring, [r[c0:c1] for r in self.entries[r0:r1]])

    def split_rows(self, k):
        """(top k rows, remaining rows); the second part is None when empty."""
        top = self.submatrix(0, k, 0, self.cols)
        bottom = self.submatrix(k, self.rows, 0, self.cols) if k < self.rows else None
        return top, bottom

    def split_cols(self, k):
        left = self.submatrix(0, self.rows, 0, k)
        right = self.submatrix(0, self.rows, k, self.cols) if k < self.cols else None
        return left, right

    def vstack(self, other):
        if other is None:
            return self
        self._check(other)
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        return PolyMatrix(self.ring, self.entries + other.entries)

    def hstack(self, other):
        if other is None:
            return self
        self._check(other)
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return PolyMatrix(self.ring, [a + b for a, b in zip(self.entries, other.entries)])

    def permute_rows(self, perm):
        """Row i of the result is row perm[i] of self, i.e. S @ self."""
        return PolyMatrix(self.ring, [self.entries[p] for p in perm])

    def permute_cols(self, perm):
        """Column j of the result is column perm[j] of self, i.e. self @ S^-1."""
        return PolyMatrix(self.ring, [[r[p] for p in perm] for r in self.entries])

    # -- serialisation -----------------------------------------------------

    def to_json(self):
        return [[str(e) for e in r] for r in self.entries]

    @classmethod
    def from_json(cls, ring, rows):
        return cls(ring, [[ring.parse(s) for s in r] for r in rows])

    def __repr__(self):
        return f"PolyMatrix({self.to_json()})"


def _coerce(ring, e):
    if isinstance(e, Polynomial):
        if e.ring != ring:
            raise ValueError(f"entry from {e.ring} in a matrix over {ring}")
        return e
    if isinstance(e, str):
        return ring.parse(e)
    return ring.const(e)


def mat_mul(a, b):
    a._check(b)
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    zero = a.ring.zero()
    bcols = [b.col(j) for j in range(b.cols)]
    out = []
    for row in a.entries:
        new = []
        for col in bcols:
            acc = zero
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return PolyMatrix(a.ring, out)


# ---------------------------------------------------------------------------
# determinants and inverses
# ---------------------------------------------------------------------------

def det_bareiss(m):
    """Fraction-free Gaussian elimination; every division is exact in R."""
    if m.rows != m.cols:
        raise DimensionError(f"determinant of a {m.shape} matrix")
    n = m.rows
    a = [list(r) for r in m.entries]
    sign = 1
    prev = m.ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return m.ring.zero()
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                if prev.is_constant():
                    a[i][j] = num.scale(prev.field.inv(prev.constant_coeff()))
                else:
                    a[i][j] = num.exact_div(prev)
        prev = pivot
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def det_cofactor(m):
    """Laplace expansion along the first row."""
    if m.rows != m.cols:
        raise DimensionError(f"determinant of a {m.shape} matrix")
    return _cofactor(m.entries, m.ring)


def _cofactor(rows, ring):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ring.zero()
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _cofactor(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def mat_det(m, method="bareiss"):
    if method == "bareiss":
        return det_bareiss(m)
    if method == "cofactor":
        return det_cofactor(m)
    raise ValueError(f"unknown determinant method {method!r}")


def adjugate(m):
    if m.rows != m.cols:
        raise DimensionError("adjugate of a non-square matrix")
    n = m.rows
    if n == 1:
        return PolyMatrix.identity(m.ring, 1)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(m.entries) if k != i]
            c = _cofactor(minor, m.ring)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return PolyMatrix(m.ring, out)


def inverse_regular(m):
    """Inverse of a square matrix whose determinant is a nonzero constant."""
    d = mat_det(m)
    if not d or not d.is_constant():
        raise ValueError(f"matrix is not regular over R (det = {d})")
    return adjugate(m).scale(m.ring.field.inv(d.constant_coeff()))


def is_upper_unitriangular(m):
    if m.rows != m.cols:
        return False
    one = m.ring.one()
    for i, r in enumerate(m.entries):
        if r[i] != one:
            return False
        if any(r[j] for j in range(i)):
            return False
    return True


def unitriangular_inverse(u):
    """Back substitution for an upper unitriangular matrix."""
    if not is_upper_unitriangular(u):
        raise ValueError("matrix is not upper unitriangular")
    n = u.rows
    ring = u.ring
    v = [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = ring.zero()
            for k in range(i + 1, j + 1):
                if u.entries[i][k] and v[k][j]:
                    acc = acc + u.entries[i][k] * v[k][j]
            v[i][j] = -acc
    return PolyMatrix(ring, v)


# ---------------------------------------------------------------------------
# elementary matrices
# ---------------------------------------------------------------------------

PERMUTE, SCALE, ADDROW = "permute", "scale", "addrow"


@dataclass(frozen=True)
class ElementaryOp:
    """One generator of E(m).

    * ``permute``: swap rows i and j.
    * ``scale``: multiply row i by the nonzero constant c.
    * ``addrow``: add f times row j to row i.
    """

    kind: str
    size: int
    i: int
    j: int | None = None
    c: object = None
    f: Polynomial | None = None

    def __post_init__(self):
        if not 0 <= self.i < self.size:
            raise ValueError(f"row {self.i} out of range for size {self.size}")
        if self.kind in (PERMUTE, ADDROW):
            if self.j is None or not 0 <= self.j < self.size:
                raise ValueError(f"row {self.j} out of range for size {self.size}")
            if self.i == self.j:
                raise ValueError(f"{self.kind} needs two distinct rows")
        if self.kind == SCALE and not self.c:
            raise ValueError("scale factor must be nonzero")
        if self.kind == ADDROW and self.f is None:
            raise ValueError("addrow needs a polynomial")
        if self.kind not in (PERMUTE, SCALE, ADDROW):
            raise ValueError(f"unknown elementary op {self.kind!r}")

    @classmethod
    def permute(cls, size, i, j):
        return cls(PERMUTE, size, i, j)

    @classmethod
    def scale_row(cls, size, i, c):
        return cls(SCALE, size, i, c=c)

    @classmethod
    def addrow(cls, size, i, j, f):
        return cls(ADDROW, size, i, j, f=f)

    def det(self, field):
        if self.kind == PERMUTE:
            return field(-1)
        if self.kind == SCALE:
            return field(self.c)
        return field(1)

    def matrix(self, ring):
        return apply_elementary(self, PolyMatrix.identity(ring, self.size))

    def to_json(self):
        if self.kind == PERMUTE:
            return {"op": PERMUTE, "i": self.i, "j": self.j}
        if self.kind == SCALE:
            return {"op": SCALE, "i": self.i, "c": str(self.c)}
        return {"op": ADDROW, "i": self.i, "j": self.j, "f": str(self.f)}

    @classmethod
    def from_json(cls, obj, size, ring):
        kind = obj["op"]
        if kind == PERMUTE:
            return cls.permute(size, obj["i"], obj["j"])
        if kind == SCALE:
            return cls.scale_row(size, obj["i"], ring.field(obj["c"]))
        if kind == ADDROW:
            return cls.addrow(size, obj["i"], obj["j"], ring.parse(obj["f"]))
        raise ValueError(f"unknown elementary op {kind!r}")


def apply_elementary(op, m, side="left"):
    """op @ m (side="left", a row operation) or m @ op (side="right").

    Touches only the affected rows/columns.
    """
    if side == "left":
        if op.size != m.rows:
            raise DimensionError(f"op of size {op.size} on {m.rows} rows")
        rows = list(m.entries)
        if op.kind == PERMUTE:
            rows[op.i], rows[op.j] = rows[op.j], rows[op.i]
        elif op.kind == SCALE:
            rows[op.i] = tuple(e.scale(op.c) for e in rows[op.i])
        else:
            rows[op.i] = tuple(a + op.f * b if b else a for a, b in zip(rows[op.i], rows[op.j]))
        return PolyMatrix(m.ring, rows)
    if side == "right":
        if op.size != m.cols:
            raise DimensionError(f"op of size {op.size} on {m.cols} columns")
        rows = [list(r) for r in m.entries]
        for r in rows:
            if op.kind == PERMUTE:
                r[op.i], r[op.j] = r[op.j], r[op.i]
            elif op.kind == SCALE:
                r[op.i] = r[op.i].scale(op.c)
            elif r[op.i]:
                # op has entry f at (i, j): column j gains f * column i
                r[op.j] = r[op.j] + r[op.i] * op.f
        return PolyMatrix(m.ring, rows)
    raise ValueError(f"unknown side {side!r}")


def inverse_of_elementary(op, field=None):
    if op.kind == PERMUTE:
        return op
    if op.kind == SCALE:
        inv = field.inv(op.c) if field is not None else 1 / op.c
        return ElementaryOp.scale_row(op.size, op.i, inv)
    return ElementaryOp.addrow(op.size, op.i, op.j, -op.f)


def product_from_trace(ops, ring, m):
    """U = ops[0] @ ops[1] @ ... @ ops[-1] as an explicit m x m matrix."""
    u = PolyMatrix.identity(ring, m)
    for op in reversed(ops):
        u = apply_elementary(op, u)
    return u


def matrix_from_trace(ops, ring, m, n):
    """A = U [E_n; O] without forming U."""
    a = PolyMatrix.stacked_identity(ring, m, n)
    for op in reversed(ops):
        a = apply_elementary(op, a)
    return a


def left_inverse_from_trace(ops, ring, m, n):
    """B = (E_n | O) U^-1 with U = prod(ops); satisfies B @ A = E_n."""
    b = PolyMatrix.padded_identity(ring, n, m)
    for op in ops:
        if op.size != m:
            raise DimensionError(f"op of size {op.size} in a trace of size {m}")
    # U^-1 = ops[-1]^-1 ... ops[0]^-1, multiplied onto b from the right
    for op in reversed(ops):
        b = apply_elementary(inverse_of_elementary(op, ring.field), b, side="right")
    return b


# ---------------------------------------------------------------------------
# Bruhat-like composition and block splits
# ---------------------------------------------------------------------------

def permutation_matrix(ring, perm):
    """S with S @ M = M.permute_rows(perm)."""
    return PolyMatrix.identity(ring, len(perm)).permute_rows(perm)


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def bruhat_compose(u1, perm, u2):
    """A = U1 S [U2; O] and its left inverse B = (U2^-1 | O) S^-1 U1^-1."""
    if sorted(perm) != list(range(u1.rows)):
        raise ValueError(f"{perm} is not a permutation of size {u1.rows}")
    u1_inv = unitriangular_inverse(u1)
    u2_inv = unitriangular_inverse(u2)
    m, n = u1.rows, u2.rows
    ring = u1.ring
    stacked = u2.vstack(PolyMatrix.zeros(ring, m - n, n) if m > n else None)
    a = mat_mul(u1, stacked.permute_rows(perm))
    padded = u2_inv.hstack(PolyMatrix.zeros(ring, n, m - n) if m > n else None)
    b = mat_mul(padded.permute_cols(perm), u1_inv)
    return a, b


@dataclass(frozen=True)
class BlockSplit:
    """B = (B1 | B2) and A = [A1; A2] with B1, A1 square of size n."""

    B1: PolyMatrix
    B2: PolyMatrix | None
    A1: PolyMatrix
    A2: PolyMatrix | None

    @classmethod
    def of(cls, b, a):
        n = b.rows
        if a.cols != n or a.rows != b.cols:
            raise DimensionError(f"B {b.shape} and A {a.shape} do not conform")
        b1, b2 = b.split_cols(n)
        a1, a2 = a.split_rows(n)
        return cls(b1, b2, a1, a2)

    def reassemble(self):
        return self.B1.hstack(self.B2), self.A1.vstack(self.A2)

    def b2a2(self):
        """B2 @ A2, or the zero matrix when m = n."""
        if self.B2 is None:
            return PolyMatrix.zeros(self.B1.ring, self.B1.rows, self.B1.rows)
        return mat_mul(self.B2, self.A2)

