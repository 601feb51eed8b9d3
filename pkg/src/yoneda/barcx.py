"""Normalized bar cochain complex of a finite connected graded algebra.

Cochains in cohomological degree n are tensor words of length n in the dual
basis of the positive part; the complex splits by internal degree p into
finite blocks (words whose degrees sum to p), and Omega^n(.,p) = 0 for
n > p.  The differential is

    delta^n = sum_{t=1..n} (-1)^(t-1) (id x ... x delta^1 x ... x id),
    delta^1(p_x) = sum  c  p_u (x) p_v   over products  u v = c x + ...,

matching the sign of the degree-one coboundary formulas used for the named
2- and 3-cocycles below (kernels and images are independent of the overall
sign choice).  The cup product is tensor concatenation.

For group-graded algebras every block further splits by the product of the
letters' group degrees, and the differential preserves that splitting; rank
computations run per component, which is also what the degree-e invariant
subcomplexes need.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import RowElimination, ColumnEchelon, SparseMatrix, solve_columns


class NotACocycle(ValueError):
    pass


_WORD_CACHE_LIMIT = 40000


@dataclass
class CohomologyClass:
    """A cocycle representative at bidegree (n, p), up to coboundaries.

    The vector maps words (tuples of positive basis indices) to coefficients.
    """

    algebra: object
    n: int
    p: int
    vector: dict

    def normalized(self):
        vec = {w: v for w, v in self.vector.items() if v}
        if not vec:
            return CohomologyClass(self.algebra, self.n, self.p, {})
        lead = min(vec)
        scale = vec[lead]
        return CohomologyClass(self.algebra, self.n, self.p,
                               {w: Fraction(v, 1) / scale for w, v in vec.items()})

    def scaled(self, c):
        return CohomologyClass(self.algebra, self.n, self.p,
                               {w: v * c for w, v in self.vector.items() if v * c})

    def plus(self, other):
        if (self.n, self.p) != (other.n, other.p):
            raise ValueError("bidegrees differ")
        vec = dict(self.vector)
        for w, v in other.vector.items():
            nv = vec.get(w, 0) + v
            if nv:
                vec[w] = nv
            else:
                vec.pop(w, None)
        return CohomologyClass(self.algebra, self.n, self.p, vec)

    def minus(self, other):
        return self.plus(other.scaled(-1))


def cup(f, g):
    """Yoneda product on representatives: tensor concatenation."""
    if f.algebra is not g.algebra:
        raise ValueError("classes live over different algebras")
    vec = {}
    for w1, c1 in f.vector.items():
        for w2, c2 in g.vector.items():
            c = c1 * c2
            if c:
                w = w1 + w2
                nv = vec.get(w, 0) + c
                if nv:
                    vec[w] = nv
                else:
                    del vec[w]
    return CohomologyClass(f.algebra, f.n + g.n, f.p + g.p, vec)


def unit_class(alg):
    return CohomologyClass(alg, 0, 0, {(): Fraction(1)})


@dataclass
class BarComplexBlock:
    """Materialized internal-degree-p slice: word bases and differentials."""

    algebra: object
    p: int
    words: dict    # n -> list of words
    deltas: dict   # n -> SparseMatrix  Omega^n -> Omega^(n+1)


class BarComplex:
    """Lazy bar-complex computations for one algebra, with shared caches.

    All public results are exact; caches hold integers (ranks, dims) plus
    word lists for small blocks only.  Instances are safe to share between
    threads: mutation is lock-guarded and all values are immutable.
    """

    def __init__(self, algebra):
        self.alg = algebra
        self.letters = [i for i in range(algebra.dim) if algebra.degrees[i] > 0]
        self.letter_degree = {i: algebra.degrees[i] for i in self.letters}
        self.top = max(self.letter_degree.values()) if self.letters else 0
        self.splits = {i: [] for i in self.letters}
        for (i, j), terms in algebra.mult.items():
            if algebra.degrees[i] > 0 and algebra.degrees[j] > 0:
                for k, c in terms:
                    ic = int(c) if c.denominator == 1 else c
                    self.splits[k].append((i, j, ic))
        for k in self.splits:
            self.splits[k].sort(key=lambda t: (t[0], t[1]))
        if algebra.gdeg is not None:
            self.group = algebra.group
            self.letter_gidx = {i: algebra.group.index[algebra.gdeg[i]]
                                for i in self.letters}
        else:
            self.group = None
            self.letter_gidx = None
        self._lock = threading.RLock()
        self._rank_cache = {}    # (n, p, g) -> rank of delta^n on the component
        self._dim_cache = {}     # (n, p) -> {g: dim}
        self._word_cache = {}    # (n, p) -> {g: [words]}  (small blocks only)
        self._class_cache = {}   # (n, p) -> ClassBasis

    # -- word bases ----------------------------------------------------------

    def word_component(self, word):
        """Group component of a word: product of the letters' group degrees."""
        if self.group is None:
            return None
        return self.group.product(self.letter_gidx[l] for l in word)

    def block_words(self, n, p):
        """Words of the (n, p) block grouped by component; cached when small."""
        key = (n, p)
        with self._lock:
            hit = self._word_cache.get(key)
        if hit is not None:
            return hit
        if n == 0:
            groups = {None if self.group is None else 0: [()]} if p == 0 else {}
            return groups
        groups = {}
        letters = self.letters
        degree = self.letter_degree
        gidx = self.letter_gidx
        group = self.group
        word = [0] * n

        def rec(slot, remaining, gacc):
            if slot == n:
                if remaining == 0:
                    groups.setdefault(gacc, []).append(tuple(word))
                return
            slots_left = n - slot - 1
            for l in letters:
                d = degree[l]
                rem = remaining - d
                if rem < slots_left or rem > slots_left * self.top:
                    continue
                word[slot] = l
                rec(slot + 1, rem,
                    gacc if group is None else group.mul(gacc, gidx[l]))
                word[slot] = 0

        rec(0, p, None if group is None else 0)
        total = sum(len(v) for v in groups.values())
        if total <= _WORD_CACHE_LIMIT:
            with self._lock:
                self._word_cache[key] = groups
        return groups

    def block_dims(self, n, p):
        key = (n, p)
        with self._lock:
            hit = self._dim_cache.get(key)
        if hit is not None:
            return hit
        if n > p or (n == 0 and p > 0):
            dims = {}
        else:
            dims = {g: len(ws) for g, ws in self.block_words(n, p).items()}
        with self._lock:
            self._dim_cache[key] = dims
        return dims

    def block_dim(self, n, p):
        return sum(self.block_dims(n, p).values())

    # -- differential --------------------------------------------------------

    def delta_columns(self, words, target_index):
        """Columns of delta^n on the given domain words, rows = target_index."""
        splits = self.splits
        cols = []
        for w in words:
            col = {}
            n = len(w)
            for t in range(n):
                sign = -1 if t & 1 else 1
                head = w[:t]
                tail = w[t + 1:]
                for u, v, c in splits[w[t]]:
                    tw = head + (u, v) + tail
                    idx = target_index[tw]
                    nv = col.get(idx, 0) + (c if sign > 0 else -c)
                    if nv:
                        col[idx] = nv
                    else:
                        del col[idx]
            cols.append(col)
        return cols

    def delta_apply(self, vec):
        """Apply the differential to a word-keyed vector (any block)."""
        out = {}
        splits = self.splits
        for w, coeff in vec.items():
            if not coeff:
                continue
            for t in range(len(w)):
                sign = -1 if t & 1 else 1
                head = w[:t]
                tail = w[t + 1:]
                for u, v, c in splits[w[t]]:
                    tw = head + (u, v) + tail
                    nv = out.get(tw, 0) + sign * c * coeff
                    if nv:
                        out[tw] = nv
                    else:
                        del out[tw]
        return out

    def is_cocycle(self, vec):
        return not self.delta_apply(vec)

    def rank_delta(self, n, p, component=None):
        """Exact rank of delta^n restricted to one component of block (n, p)."""
        if n == 0 or n > p:
            return 0
        key = (n, p, component)
        with self._lock:
            if key in self._rank_cache:
                return self._rank_cache[key]
        domain = self.block_words(n, p).get(component, [])
        if not domain or n + 1 > p:
            r = 0
        else:
            target = self.block_words(n + 1, p).get(component, [])
            tindex = {w: i for i, w in enumerate(target)}
            cols = self.delta_columns(domain, tindex)
            r = RowElimination(len(cols), cols).run().rank
        with self._lock:
            self._rank_cache[key] = r
        return r

    def rank_delta_total(self, n, p):
        if n == 0 or n > p:
            return 0
        return sum(self.rank_delta(n, p, g) for g in sorted(
            self.block_dims(n, p), key=lambda x: (x is None, x)))

    # -- cohomology dimensions -------------------------------------------------

    def hdim_component(self, n, p, component):
        if n == 0:
            return 1 if p == 0 and (component in (None, 0)) else 0
        dim = self.block_dims(n, p).get(component, 0)
        if dim == 0:
            return 0
        return dim - self.rank_delta(n, p, component) - self.rank_delta(n - 1, p, component)

    def hdim(self, n, p):
        """dim H^n of the internal-degree-p block."""
        if n == 0:
            return 1 if p == 0 else 0
        dims = self.block_dims(n, p)
        return sum(self.hdim_component(n, p, g) for g in dims)

    def p_range(self, n):
        """Internal degrees where the degree-n block can be nonzero."""
        if n == 0:
            return [0]
        return list(range(n, n * self.top + 1))

    def ext_dim(self, n, p_max=None):
        """(dim Ext^n, per-internal-degree breakdown); blocks above
        n * top_degree are empty, so the default range is exact."""
        if n == 0:
            return 1, {0: 1}
        cutoff = n * self.top
        if p_max is not None:
            if p_max < cutoff:
                raise ValueError(f"p_max={p_max} below the exact cutoff {cutoff}")
        breakdown = {}
        for p in self.p_range(n):
            h = self.hdim(n, p)
            if h:
                breakdown[p] = h
        return sum(breakdown.values()), breakdown

    # -- materialized block (small-scale API) ---------------------------------

    def build_block(self, p, n_max):
        words = {}
        deltas = {}
        for n in range(0, min(n_max, p) + 1):
            groups = self.block_words(n, p)
            flat = []
            for g in sorted(groups, key=lambda x: (x is None, x)):
                flat.extend(groups[g])
            flat.sort()
            words[n] = flat
        for n in range(0, min(n_max, p) + 1):
            rows_words = words.get(n + 1, [])
            tindex = {w: i for i, w in enumerate(rows_words)}
            if n == 0:
                deltas[n] = SparseMatrix.zero(len(rows_words), len(words[n]))
            else:
                cols = self.delta_columns(words[n], tindex)
                deltas[n] = SparseMatrix.from_columns(len(rows_words), cols)
        return BarComplexBlock(self.alg, p, words, deltas)

    # -- coboundary tests -------------------------------------------------------

    def image_columns(self, n, p):
        """Columns of delta^(n-1) into block (n, p), over the flat word index."""
        flat = self.flat_words(n, p)
        tindex = {w: i for i, w in enumerate(flat)}
        if n == 0 or n - 1 == 0 or n - 1 > p:
            return [], tindex, flat
        groups = self.block_words(n - 1, p)
        domain = []
        for g in sorted(groups, key=lambda x: (x is None, x)):
            domain.extend(groups[g])
        return self.delta_columns(domain, tindex), tindex, flat

    def flat_words(self, n, p):
        groups = self.block_words(n, p)
        flat = []
        for g in sorted(groups, key=lambda x: (x is None, x)):
            flat.extend(groups[g])
        flat.sort()
        return flat

    def is_coboundary(self, n, p, vec, want_witness=False):
        """Exact coboundary test for a cocycle at (n, p); optional preimage.

        Raises NotACocycle when the vector is not killed by the differential.
        """
        vec = {w: v for w, v in vec.items() if v}
        if not self.is_cocycle(vec):
            raise NotACocycle("vector is not a cocycle")
        if not vec:
            return (True, {}) if want_witness else True
        if n == 0:
            return (False, None) if want_witness else False
        cols, tindex, _ = self.image_columns(n, p)
        target = {tindex[w]: v for w, v in vec.items()}
        sol = solve_columns(len(cols), cols, target)
        if sol is None:
            return (False, None) if want_witness else False
        if not want_witness:
            return True
        groups = self.block_words(n - 1, p)
        domain = []
        for g in sorted(groups, key=lambda x: (x is None, x)):
            domain.extend(groups[g])
        witness = {domain[j]: c for j, c in sol.items() if c}
        return True, witness

    # -- class bases ------------------------------------------------------------

    def class_basis(self, n, p, candidates=None):
        """Verified basis of H^n(block p); see ClassBasis."""
        key = (n, p)
        with self._lock:
            hit = self._class_cache.get(key)
        if hit is not None:
            return hit
        if candidates is not None:
            cb = ClassBasis.from_candidates(self, n, p, candidates)
        else:
            cb = ClassBasis.from_kernel(self, n, p)
        with self._lock:
            self._class_cache[key] = cb
        return cb

    def cocycle_basis(self, n, p):
        """Representatives whose classes form a basis of H^n(block p)."""
        cb = self.class_basis(n, p)
        return [CohomologyClass(self.alg, n, p, dict(r)).normalized()
                for r in cb.reps]

    def subalgebra_growth(self, generators, n_max):
        """Dims per degree of the span of all cup words in the generators."""
        dims = [1]
        if not generators:
            return dims + [0] * n_max
        for n in range(1, n_max + 1):
            seqs = [[]]
            words = []
            for seq in _gen_sequences(generators, n):
                vec = unit_class(self.alg)
                for g in seq:
                    vec = cup(vec, g)
                words.append(vec)
            by_block = {}
            for w in words:
                by_block.setdefault((w.n, w.p), []).append(w)
            total = 0
            for (wn, wp), cls in sorted(by_block.items()):
                total += self.span_dim_mod_coboundaries(wn, wp, cls)
            dims.append(total)
        return dims

    def span_dim_mod_coboundaries(self, n, p, classes):
        """Dimension of the span of the given cocycle classes in H^n(block p)."""
        cols, tindex, _ = self.image_columns(n, p)
        ech = ColumnEchelon()
        for col in cols:
            ech.insert(col)
        count = 0
        for cls in classes:
            vec = {tindex[w]: v for w, v in cls.vector.items() if v}
            if not self.is_cocycle(cls.vector):
                raise NotACocycle("span candidate is not a cocycle")
            new, _, _ = ech.insert(vec)
            if new:
                count += 1
        return count


def _gen_sequences(generators, n):
    """All sequences of generators with cohomological degrees summing to n."""
    out = []

    def rec(seq, remaining):
        if remaining == 0:
            out.append(list(seq))
            return
        for g in generators:
            if g.n <= remaining:
                seq.append(g)
                rec(seq, remaining - g.n)
                seq.pop()

    rec([], n)
    return out


class ClassBasis:
    """A verified basis of one cohomology block with a coordinate solver.

    The echelon holds the coboundary columns followed by the representative
    columns; tails track representative coordinates, so coords() expresses
    any cocycle of the block over the basis, exactly.
    """

    __slots__ = ("bar", "n", "p", "reps", "windex", "_ech")

    def __init__(self, bar, n, p, reps, windex, ech):
        self.bar = bar
        self.n = n
        self.p = p
        self.reps = reps
        self.windex = windex
        self._ech = ech

    @property
    def dim(self):
        return len(self.reps)

    def classes(self):
        return [CohomologyClass(self.bar.alg, self.n, self.p, dict(r)).normalized()
                for r in self.reps]

    @classmethod
    def _image_echelon(cls, bar, n, p):
        cols, tindex, _ = bar.image_columns(n, p)
        ech = ColumnEchelon()
        for col in cols:
            ech.insert(col)
        return ech, tindex

    @classmethod
    def from_candidates(cls, bar, n, p, candidates):
        """Build from candidate cocycles; verifies they are a basis.

        Each candidate must be a cocycle; together they must be independent
        modulo coboundaries and as many as dim H^n(block p).
        """
        ech, tindex = cls._image_echelon(bar, n, p)
        reps = []
        for cand in candidates:
            vec = cand.vector if isinstance(cand, CohomologyClass) else cand
            vec = {w: v for w, v in vec.items() if v}
            if not bar.is_cocycle(vec):
                raise NotACocycle("candidate representative is not a cocycle")
            ivec = {tindex[w]: v for w, v in vec.items()}
            new, _, _ = ech.insert(ivec, {("rep", len(reps)): 1})
            if not new:
                raise ValueError("candidate classes are dependent modulo coboundaries")
            reps.append(vec)
        expected = bar.hdim(n, p)
        if len(reps) != expected:
            raise ValueError(
                f"candidates span {len(reps)} of {expected} classes at ({n},{p})")
        return cls(bar, n, p, reps, tindex, ech)

    @classmethod
    def from_kernel(cls, bar, n, p):
        """Generic construction: kernel of delta^n sifted modulo the image."""
        expected = bar.hdim(n, p)
        ech, tindex = cls._image_echelon(bar, n, p)
        reps = []
        if expected == 0:
            return cls(bar, n, p, reps, tindex, ech)
        flat = bar.flat_words(n, p)
        up_words = bar.flat_words(n + 1, p) if n + 1 <= p else []
        up_index = {w: i for i, w in enumerate(up_words)}
        cols = bar.delta_columns(flat, up_index)
        elim = RowElimination(len(cols), cols).run()
        pivot_cols = {c for (_, c, _) in elim.pivots}
        for j in range(len(cols)):
            if len(reps) == expected:
                break
            if j in pivot_cols:
                continue
            x = elim.back_substitute(fixed={j: Fraction(1)})
            new, _, _ = ech.insert(x, {("rep", len(reps)): 1})
            if new:
                reps.append({flat[i]: v for i, v in x.items()})
        if len(reps) != expected:
            raise RuntimeError(f"kernel sift found {len(reps)} < {expected} classes")
        return cls(bar, n, p, reps, tindex, ech)

    def coords(self, vec):
        """Coordinates of a cocycle's class over the basis, as Fractions."""
        vec = vec.vector if isinstance(vec, CohomologyClass) else vec
        vec = {w: v for w, v in vec.items() if v}
        if not self.bar.is_cocycle(vec):
            raise NotACocycle("coords of a non-cocycle requested")
        ivec = {self.windex[w]: v for w, v in vec.items()}
        residue, tail = self._ech.reduce(ivec, {("vec", 0): 1})
        if residue:
            raise RuntimeError("cocycle does not reduce over the verified basis")
        scale = tail.pop(("vec", 0))
        out = [Fraction(0)] * len(self.reps)
        for key, v in tail.items():
            out[key[1]] = Fraction(-v, scale)
        return out
