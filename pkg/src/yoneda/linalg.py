"""Exact sparse linear algebra over the rationals.

Vectors are dicts mapping index -> nonzero Fraction (or int); matrices are
kept column-major.  Two engines share the work:

* ``RowElimination`` -- fraction-free right-looking Gaussian elimination on
  integer-scaled rows, used for ranks (and staged ranks of augmented
  matrices) plus solving.  Pivoting picks the active column with fewest
  nonzeros, then the sparsest row; correctness is pivot-order independent.
* ``ColumnEchelon`` -- left-looking column reduction with optional tracking
  of the combination that produced each column, used for image/kernel
  bases, membership and coordinates relative to a chosen spanning set.

All arithmetic is exact; no floating point, no modular shortcuts.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd


class DimensionMismatch(ValueError):
    pass


class ContainmentViolation(ValueError):
    pass


# ---------------------------------------------------------------------------
# vector helpers


def _vec_gcd_normalize(vec):
    """Divide an integer dict-vector by the gcd of its values, in place."""
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        for k in vec:
            vec[k] //= g
    return vec


def _integerize(vec):
    """Scale a Fraction/int dict-vector to coprime integers; returns a new dict."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            d = v.denominator
            den = den * d // gcd(den, d)
    out = {}
    for k, v in vec.items():
        iv = int(v * den)
        if iv:
            out[k] = iv
    return _vec_gcd_normalize(out)


def vec_add_scaled(target, source, coeff):
    """target += coeff * source for dict-vectors, dropping zeros."""
    if not coeff:
        return target
    for k, v in source.items():
        nv = target.get(k, 0) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)
    return target


# ---------------------------------------------------------------------------
# right-looking integer elimination


class RowElimination:
    """Fraction-free row elimination of a sparse matrix given by columns.

    Columns with index >= ``rhs_start`` are carried through the row
    operations but never pivoted (right-hand sides).  Columns below
    ``stage_limit`` are exhausted as pivots before any later column is
    touched, so ``stage_rank`` is the exact rank of that leading block and
    ``rank`` the rank of the whole pivotable block.
    """

    __slots__ = ("n_cols", "rhs_start", "stage_limit", "rows", "col_rows",
                 "pivots", "rank", "stage_rank", "_done")

    def __init__(self, n_cols, columns, rhs_start=None, stage_limit=None):
        self.n_cols = n_cols
        self.rhs_start = n_cols if rhs_start is None else rhs_start
        self.stage_limit = self.rhs_start if stage_limit is None else stage_limit
        rows = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = v
        self.rows = {}
        for i, row in rows.items():
            if any(isinstance(v, Fraction) for v in row.values()):
                row = _integerize(row)
            else:
                row = _vec_gcd_normalize(dict(row))
            if row:
                self.rows[i] = row
        self.col_rows = {}
        for i, row in self.rows.items():
            for j in row:
                if j < self.rhs_start:
                    self.col_rows.setdefault(j, set()).add(i)
        self.pivots = []
        self.rank = 0
        self.stage_rank = 0
        self._done = False

    def _eliminate_range(self, lo, hi):
        col_rows = self.col_rows
        rows = self.rows
        heap = [(len(rs), j) for j, rs in col_rows.items() if lo <= j < hi and rs]
        heapq.heapify(heap)
        npiv = 0
        while heap:
            nnz, j = heapq.heappop(heap)
            rs = col_rows.get(j)
            if not rs:
                continue
            if len(rs) != nnz:
                heapq.heappush(heap, (len(rs), j))
                continue
            piv_r = min(rs, key=lambda r: (len(rows[r]), r))
            piv_row = rows.pop(piv_r)
            pv = piv_row[j]
            # retire the pivot row from the active column index
            for c in piv_row:
                if c < self.rhs_start:
                    s = col_rows.get(c)
                    if s is not None:
                        s.discard(piv_r)
            touched = set()
            for r in list(col_rows.get(j, ())):
                row = rows[r]
                rv = row.pop(j, 0)
                if not rv:
                    continue
                col_rows[j].discard(r)
                for c, v in piv_row.items():
                    if c == j:
                        continue
                    nv = pv * row.get(c, 0) - rv * v
                    if nv:
                        if c not in row and c < self.rhs_start:
                            col_rows.setdefault(c, set()).add(r)
                            touched.add(c)
                        row[c] = nv
                    elif c in row:
                        del row[c]
                        if c < self.rhs_start:
                            col_rows[c].discard(r)
                            touched.add(c)
                # remaining entries scale by pv
                for c, v in row.items():
                    if c not in piv_row:
                        row[c] = pv * v
                _vec_gcd_normalize(row)
                if not row:
                    del rows[r]
            for c in touched:
                rs2 = col_rows.get(c)
                if rs2 and lo <= c < hi:
                    heapq.heappush(heap, (len(rs2), c))
            self.pivots.append((piv_r, j, piv_row))
            npiv += 1
        return npiv

    def run(self):
        if self._done:
            return self
        self.stage_rank = self._eliminate_range(0, self.stage_limit)
        self.rank = self.stage_rank
        if self.stage_limit < self.rhs_start:
            self.rank += self._eliminate_range(self.stage_limit, self.rhs_start)
        self._done = True
        return self

    def is_consistent(self, rhs_col):
        """After run(): does rhs_col lie in the span of the pivotable columns?"""
        for row in self.rows.values():
            if row.get(rhs_col, 0):
                return False
        return True

    def back_substitute(self, rhs_col=None, fixed=None):
        """Solve the eliminated system for the pivot variables.

        Free pivotable columns take value 0 unless listed in ``fixed``.
        With ``rhs_col`` set, solves  M x = rhs;  otherwise solves  M x = 0.
        Returns a dict col -> Fraction (zeros omitted).
        """
        x = {}
        if fixed:
            x.update(fixed)
        for piv_r, c, row in reversed(self.pivots):
            acc = Fraction(row.get(rhs_col, 0)) if rhs_col is not None else Fraction(0)
            for cc, v in row.items():
                if cc == c or cc >= self.rhs_start:
                    continue
                xv = x.get(cc)
                if xv:
                    acc -= v * xv
            val = acc / row[c]
            if val:
                x[c] = val
            else:
                x.pop(c, None)
        return x


def _columns_of(m):
    cols = [dict() for _ in range(m.cols)]
    for (i, j), v in m.entries.items():
        cols[j][i] = v
    return cols


# ---------------------------------------------------------------------------
# left-looking tracked echelon


class ColumnEchelon:
    """Column echelon form with optional combination tracking.

    Each inserted column may carry a ``tail`` dict recording, in caller
    coordinates, the combination of original columns it represents; the
    reduction updates tails alongside, so a vector that reduces to zero
    yields the exact linear combination that kills it.
    """

    __slots__ = ("pivots", "order")

    def __init__(self):
        self.pivots = {}   # pivot row -> (vec, tail)
        self.order = []    # pivot rows in insertion order

    def reduce(self, vec, tail=None):
        """Reduce vec against the current echelon; returns (vec, tail).

        The returned pair is integer-rescaled; a zero vec means the input
        was dependent and tail holds the certifying combination.
        """
        vec = dict(vec)
        tail = dict(tail) if tail else {}
        if any(isinstance(v, Fraction) for v in vec.values()) or \
           any(isinstance(v, Fraction) for v in tail.values()):
            den = 1
            for v in list(vec.values()) + list(tail.values()):
                if isinstance(v, Fraction):
                    den = den * v.denominator // gcd(den, v.denominator)
            vec = {k: int(v * den) for k, v in vec.items() if v}
            tail = {k: int(v * den) for k, v in tail.items() if v}
        while vec:
            r = min(k for k in vec)
            hit = self.pivots.get(r)
            if hit is None:
                break
            pvec, ptail = hit
            pv = pvec[r]
            rv = vec[r]
            g = gcd(pv, rv)
            a, b = pv // g, rv // g
            for k in vec:
                vec[k] *= a
            for k in tail:
                tail[k] *= a
            vec_add_scaled(vec, pvec, -b)
            vec_add_scaled(tail, ptail, -b)
        if vec:
            g = 0
            for v in vec.values():
                g = gcd(g, v)
            for v in tail.values():
                g = gcd(g, v)
            if g > 1:
                vec = {k: v // g for k, v in vec.items()}
                tail = {k: v // g for k, v in tail.items()}
        return vec, tail

    def insert(self, vec, tail=None):
        """Reduce and, if independent, add as a new pivot column.

        Returns (is_new, vec, tail)."""
        vec, tail = self.reduce(vec, tail)
        if not vec:
            return False, vec, tail
        r = min(vec)
        self.pivots[r] = (vec, tail)
        self.order.append(r)
        return True, vec, tail

    @property
    def dim(self):
        return len(self.pivots)

    def reduced_basis(self):
        """Fully back-reduced basis, pivot entries scaled to 1, by pivot row."""
        items = sorted(self.pivots.items())
        basis = []
        for idx, (r, (vec, _)) in enumerate(items):
            w = {k: Fraction(v) for k, v in vec.items()}
            for r2, (vec2, _) in items[idx + 1:]:
                cv = w.get(r2)
                if cv:
                    scale = cv / vec2[r2]
                    for k, v in vec2.items():
                        nv = w.get(k, 0) - scale * v
                        if nv:
                            w[k] = nv
                        else:
                            w.pop(k, None)
            lead = w[r]
            basis.append({k: v / lead for k, v in w.items()})
        return basis


# ---------------------------------------------------------------------------
# public matrix API


class SparseMatrix:
    """Immutable sparse matrix over Q; no explicit zeros are stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatch(f"entry {(i, j)} outside {rows}x{cols}")
            if v:
                clean[(i, j)] = v if isinstance(v, Fraction) else Fraction(v)
        self.entries = clean

    @classmethod
    def from_columns(cls, rows, columns):
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def transpose(self):
        return SparseMatrix(self.cols, self.rows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    def columns(self):
        return _columns_of(self)

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def apply(self, vec):
        """Matrix-vector product for a dict-vector."""
        out = {}
        for (i, j), v in self.entries.items():
            c = vec.get(j)
            if c:
                nv = out.get(i, 0) + v * c
                if nv:
                    out[i] = nv
                else:
                    out.pop(i, None)
        return out

    def nnz(self):
        return len(self.entries)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


class Subspace:
    """A subspace given by a reduced echelon basis with increasing pivots."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient, vectors, already_reduced=False):
        self.ambient = ambient
        if already_reduced:
            self.basis = list(vectors)
        else:
            ech = ColumnEchelon()
            for v in vectors:
                for k in v:
                    if not 0 <= k < ambient:
                        raise DimensionMismatch(f"index {k} outside ambient {ambient}")
                ech.insert(v)
            self.basis = ech.reduced_basis()

    @property
    def dim(self):
        return len(self.basis)

    def pivot_rows(self):
        return [min(v) for v in self.basis]

    def contains(self, vec):
        ech = ColumnEchelon()
        for v in self.basis:
            ech.insert(v)
        residue, _ = ech.reduce(vec)
        return not residue

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def rank(m):
    """Exact rank over Q."""
    return RowElimination(m.cols, m.columns()).run().rank


def rank_of_columns(n_cols, columns, extra=None):
    """Rank of a column list; with ``extra``, also the rank gained by them.

    Returns (rank_base, rank_gain).  Exact, single staged elimination.
    """
    if extra:
        elim = RowElimination(n_cols + len(extra), list(columns) + list(extra),
                              stage_limit=n_cols)
        elim.run()
        return elim.stage_rank, elim.rank - elim.stage_rank
    elim = RowElimination(n_cols, columns).run()
    return elim.rank, 0


def kernel_basis(m):
    """Subspace of {v : m v = 0}; dimension = cols - rank."""
    elim = RowElimination(m.cols, m.columns()).run()
    pivot_cols = {c for (_, c, _) in elim.pivots}
    vectors = []
    for j in range(m.cols):
        if j in pivot_cols:
            continue
        x = elim.back_substitute(fixed={j: Fraction(1)})
        vectors.append(x)
    return Subspace(m.cols, vectors)


def image_basis(m):
    """Echelonized basis of the column space."""
    ech = ColumnEchelon()
    for col in m.columns():
        ech.insert(col)
    return Subspace(m.rows, ech.reduced_basis(), already_reduced=True)


def quotient_dimension(z, b):
    """dim z - dim b for nested subspaces b <= z (containment is checked)."""
    if z.ambient != b.ambient:
        raise DimensionMismatch("ambient dimensions differ")
    ech = ColumnEchelon()
    for v in z.basis:
        ech.insert(v)
    for v in b.basis:
        residue, _ = ech.reduce(v)
        if residue:
            raise ContainmentViolation("subspace b is not contained in z")
    return z.dim - b.dim


def membership(vec, s):
    """Exact membership of a dict-vector in a Subspace."""
    for k in vec:
        if not 0 <= k < s.ambient:
            raise DimensionMismatch(f"index {k} outside ambient {s.ambient}")
    return s.contains(vec)


def solve(m, vec):
    """One exact preimage of vec under m, or None if inconsistent."""
    for k in vec:
        if not 0 <= k < m.rows:
            raise DimensionMismatch(f"index {k} outside row count {m.rows}")
    cols = m.columns()
    cols.append(dict(vec))
    elim = RowElimination(m.cols + 1, cols, rhs_start=m.cols).run()
    if not elim.is_consistent(m.cols):
        return None
    return elim.back_substitute(rhs_col=m.cols)


def solve_columns(n_cols, columns, vec):
    """solve() on a raw column list; returns dict col -> Fraction or None."""
    cols = list(columns)
    cols.append(dict(vec))
    elim = RowElimination(n_cols + 1, cols, rhs_start=n_cols).run()
    if not elim.is_consistent(n_cols):
        return None
    return elim.back_substitute(rhs_col=n_cols)
