"""Group actions on graded algebras and their bar cochains.

A YDStructure couples a finite group acting by algebra automorphisms with a
group-degree label per basis element satisfying  g . Lambda_h <= Lambda_{ghg^-1}.
Cochains carry the contragredient action letterwise; the group component of
a tensor word is the ordered product of its letters' algebra-side degrees
(the labelling the differential preserves), so the degree-e part of a block
is the words whose letter degrees multiply to the identity.  Invariant
dimensions come from two independent routes -- the exact averaging projector
and the orbit/stabilizer counting formula -- which the tests compare.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .linalg import RowElimination, ColumnEchelon


class YDStructure:
    """Finite-group action on a graded algebra with group-degree labels."""

    def __init__(self, algebra, group, generator_action):
        """generator_action maps group element names (a generating set) to
        {basis label: [(label, coeff), ...]} images of the algebra
        generators; images of longer monomials are composed from products.
        Every axiom (automorphism, composition along the group law,
        compatibility with the group grading) is verified exactly."""
        if algebra.gdeg is None:
            raise ValueError("algebra carries no group-degree labels")
        self.alg = algebra
        self.group = group
        self.gdeg_idx = tuple(group.index[g] for g in algebra.gdeg)
        self.action = self._complete_action(generator_action)
        self._dual_letter = {}
        self._verify()

    # -- construction ---------------------------------------------------------

    def _complete_action(self, generator_action):
        alg, group = self.alg, self.group
        maps = {0: {i: {i: Fraction(1)} for i in range(alg.dim)}}
        frontier = {}
        for name, gen_map in generator_action.items():
            gi = group.index[name]
            amap = {0: {0: Fraction(1)}}
            for lab, terms in gen_map.items():
                amap[alg.index[lab]] = {alg.index[l]: Fraction(c) for l, c in terms}
            for i in range(alg.dim):
                if i not in amap:
                    amap[i] = self._image_of_monomial(i, amap)
            frontier[gi] = amap
        maps.update(frontier)
        changed = True
        while changed:
            changed = False
            for gi, gmap in list(frontier.items()):
                for hi in list(maps):
                    gh = group.mul(gi, hi)
                    if gh not in maps:
                        maps[gh] = self._compose(gmap, maps[hi])
                        changed = True
        if len(maps) != len(group):
            raise ValueError("given elements do not generate the group")
        return maps

    def _image_of_monomial(self, i, amap):
        """Factor basis element i as a product of shorter monomials and push
        the action through; requires a factorization with coefficient 1."""
        alg = self.alg
        for (j, k), terms in alg.mult.items():
            if alg.degrees[j] > 0 and alg.degrees[k] > 0 and \
                    len(terms) == 1 and terms[0][0] == i and terms[0][1] == 1:
                if j not in amap:
                    amap[j] = self._image_of_monomial(j, amap)
                if k not in amap:
                    amap[k] = self._image_of_monomial(k, amap)
                return alg.multiply(amap[j], amap[k])
        raise ValueError(f"no monomial factorization for basis element {i}")

    def _compose(self, gmap, hmap):
        out = {}
        for i, hvec in hmap.items():
            acc = {}
            for j, c in hvec.items():
                for k, d in gmap[j].items():
                    nv = acc.get(k, 0) + c * d
                    if nv:
                        acc[k] = nv
                    else:
                        del acc[k]
            out[i] = acc
        return out

    def _verify(self):
        alg, group = self.alg, self.group
        for gi in group:
            amap = self.action[gi]
            for i, vec in amap.items():
                for k, _ in vec.items():
                    if alg.degrees[k] != alg.degrees[i]:
                        raise ValueError("action does not preserve internal degree")
                    if self.gdeg_idx[k] != group.conj(gi, self.gdeg_idx[i]):
                        raise ValueError("action violates g.V_h <= V_(ghg^-1)")
            for i in range(alg.dim):
                for j in range(alg.dim):
                    lhs = self.apply_algebra(gi, alg.element(i, j))
                    rhs = alg.multiply(amap[i], amap[j])
                    if lhs != rhs:
                        raise ValueError(
                            f"action of {group.names[gi]} is not multiplicative")
        for gi in group:
            for hi in group:
                comp = self._compose(self.action[gi], self.action[hi])
                if comp != self.action[group.mul(gi, hi)]:
                    raise ValueError("action does not compose along the group law")

    # -- actions ----------------------------------------------------------------

    def apply_algebra(self, gi, vec):
        """Action of group element gi on an algebra dict-vector."""
        out = {}
        amap = self.action[gi]
        for i, c in vec.items():
            for k, d in amap[i].items():
                nv = out.get(k, 0) + c * d
                if nv:
                    out[k] = nv
                else:
                    del out[k]
        return out

    def dual_letter_action(self, gi):
        """Contragredient action on dual letters: (g.f)(v) = f(g^-1 . v),
        as {letter x: {letter y: coeff}} meaning g.p_x = sum coeff p_y."""
        hit = self._dual_letter.get(gi)
        if hit is not None:
            return hit
        amap = self.action[self.group.inv(gi)]
        out = {}
        for y, vec in amap.items():
            if self.alg.degrees[y] == 0:
                continue
            for x, c in vec.items():
                out.setdefault(x, {})[y] = c
        for x in out:
            out[x] = dict(sorted(out[x].items()))
        self._dual_letter[gi] = out
        return out

    def functional_gdeg(self, letter):
        """Group degree of the dual letter p_x: the inverse of deg(x)."""
        return self.group.inv(self.gdeg_idx[letter])

    def apply_diagonal(self, gi, vec):
        """Diagonal action on a word-keyed cochain vector."""
        dual = self.dual_letter_action(gi)
        out = {}
        for word, coeff in vec.items():
            partial = [((), coeff)]
            for letter in word:
                img = dual[letter]
                partial = [(w + (y,), c * d) for (w, c) in partial
                           for y, d in img.items()]
            for w, c in partial:
                nv = out.get(w, 0) + c
                if nv:
                    out[w] = nv
                else:
                    del out[w]
        return out


# ---------------------------------------------------------------------------
# spec-level operations


def dual_action(yd):
    """Matrices of the contragredient action on each graded piece of the dual.

    Returns {group element name: {degree: {(row letter, col letter): coeff}}}
    together with the functional group degree of every dual letter.
    """
    alg = yd.alg
    out = {}
    for gi in yd.group:
        dual = yd.dual_letter_action(gi)
        by_degree = {}
        for x, img in dual.items():
            d = alg.degrees[x]
            for y, c in img.items():
                by_degree.setdefault(d, {})[(y, x)] = c
        out[yd.group.names[gi]] = by_degree
    gdegs = {x: yd.group.names[yd.functional_gdeg(x)]
             for x in range(alg.dim) if alg.degrees[x] > 0}
    return out, gdegs


def diagonal_action_block(yd, bar, n, p):
    """Action matrices on the (n, p) block, rows/cols over the flat word list."""
    words = bar.flat_words(n, p)
    windex = {w: i for i, w in enumerate(words)}
    out = {}
    for gi in yd.group:
        cols = []
        for w in words:
            img = yd.apply_diagonal(gi, {w: Fraction(1)})
            cols.append({windex[w2]: c for w2, c in img.items()})
        from .linalg import SparseMatrix
        out[yd.group.names[gi]] = SparseMatrix.from_columns(len(words), cols)
    return words, out

def invariant_dims_direct(yd, bar, n, p, gdeg="e"):
    """Rank of the averaging projector on the given group component.

    The component collects words whose letter degrees multiply to ``gdeg``;
    the projector is (1/|G|) sum_g g, computed exactly (columns scaled by
    |G| so the elimination stays integral).
    """
    group = yd.group
    target = group.index[gdeg] if isinstance(gdeg, str) else gdeg
    groups = bar.block_words(n, p)
    comp = groups.get(target, [])
    if not comp:
        return 0
    conjugates = {group.conj(g, target) for g in group}
    ambient = []
    for g in sorted(conjugates):
        ambient.extend(groups.get(g, []))
    aindex = {w: i for i, w in enumerate(ambient)}
    cols = []
    for w in comp:
        acc = {}
        for gi in group:
            img = yd.apply_diagonal(gi, {w: 1})
            for w2, c in img.items():
                nv = acc.get(w2, 0) + c
                if nv:
                    acc[w2] = nv
                else:
                    del acc[w2]
        cols.append({aindex[w2]: c for w2, c in acc.items()})
    return RowElimination(len(cols), cols).run().rank


def projector_rank_and_trace(yd, bar, n, p, gdeg="e"):
    """(rank, trace) of the averaging projector on a component; in
    characteristic zero the two agree (idempotent operator)."""
    group = yd.group
    target = group.index[gdeg] if isinstance(gdeg, str) else gdeg
    comp = bar.block_words(n, p).get(target, [])
    if not comp:
        return 0, Fraction(0)
    windex = {w: i for i, w in enumerate(comp)}
    order = Fraction(len(group))
    trace = Fraction(0)
    for w in comp:
        for gi in group:
            img = yd.apply_diagonal(gi, {w: Fraction(1)})
            c = img.get(w)
            if c:
                trace += c / order
    rank = invariant_dims_direct(yd, bar, n, p, gdeg)
    return rank, trace


class OrbitData:
    """Orbits of the conjugation action on tuples with product e.

    Tuples are restricted to the supports of the graded pieces given by
    ``letter_support``: component g is admissible in position i when some
    dual letter of degree q_i has algebra degree g.
    """

    def __init__(self, group, tuples):
        self.group = group
        self.orbits = []
        seen = set()
        for x in sorted(tuples):
            if x in seen:
                continue
            orbit = sorted({tuple(group.conj(g, xi) for xi in x) for g in group})
            for y in orbit:
                seen.add(y)
            rep = orbit[0]
            stab = tuple(g for g in group
                         if all(group.conj(g, xi) == xi for xi in rep))
            self.orbits.append((rep, len(orbit), stab))
        for rep, size, stab in self.orbits:
            if size * len(stab) != len(group):
                raise RuntimeError("orbit-stabilizer identity fails")

    def __len__(self):
        return len(self.orbits)


def _partitions(n, total):
    """Nondecreasing n-tuples of positive integers with the given sum."""
    out = []

    def rec(prefix, remaining, minimum):
        slots = n - len(prefix)
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for v in range(minimum, remaining - slots + 2):
            if v * slots > remaining:
                break
            prefix.append(v)
            rec(prefix, remaining - v, v)
            prefix.pop()

    rec([], total, 1)
    return out


def _distinct_permutation_count(q):
    from math import factorial
    count = factorial(len(q))
    for v in set(q):
        count //= factorial(sum(1 for x in q if x == v))
    return count


def invariant_dims_formula(yd, n, p, gdeg="e"):
    """Invariant dimension of the degree-e part by orbit/stabilizer counting.

    Returns (total, terms) where each term is
    (partition q, orbit representative names, orbit size, |q|, local dim)
    and  total = sum |q| * local dim  over orbit representatives.  Only the
    identity component is supported (the formula is stated for it).
    """
    group = yd.group
    if (group.index[gdeg] if isinstance(gdeg, str) else gdeg) != 0:
        raise ValueError("the counting formula applies to the identity component")
    alg = yd.alg
    letters_by = {}
    for i in range(alg.dim):
        d = alg.degrees[i]
        if d > 0:
            letters_by.setdefault((d, yd.gdeg_idx[i]), []).append(i)
    support = {}
    for (d, g), ls in letters_by.items():
        support.setdefault(d, set()).add(g)

    total = 0
    terms = []
    for q in _partitions(n, p):
        if any(qi not in support for qi in q):
            continue
        tuples = []

        def rec(prefix, acc):
            i = len(prefix)
            if i == n:
                if acc == 0:
                    tuples.append(tuple(prefix))
                return
            for g in sorted(support[q[i]]):
                prefix.append(g)
                rec(prefix, group.mul(acc, g))
                prefix.pop()

        rec([], 0)
        if not tuples:
            continue
        mult = _distinct_permutation_count(q)
        data = OrbitData(group, tuples)
        for rep, size, stab in data.orbits:
            local = _local_invariant_dim(yd, q, rep, stab)
            if local:
                total += mult * local
                terms.append((q, tuple(group.names[g] for g in rep),
                              size, mult, local))
    return total, terms


def _local_invariant_dim(yd, q, rep, stab):
    """dim of the stabilizer-invariants of V_(q1,x1) (x) ... (x) V_(qn,xn)."""
    alg, group = yd.alg, yd.group
    letters = []
    for qi, xi in zip(q, rep):
        ls = [i for i in range(alg.dim)
              if alg.degrees[i] == qi and yd.gdeg_idx[i] == xi]
        if not ls:
            return 0
        letters.append(ls)
    words = [()]
    for ls in letters:
        words = [w + (l,) for w in words for l in ls]
    windex = {w: i for i, w in enumerate(words)}
    cols = []
    for w in words:
        acc = {}
        for gi in stab:
            img = yd.apply_diagonal(gi, {w: 1})
            for w2, c in img.items():
                nv = acc.get(w2, 0) + c
                if nv:
                    acc[w2] = nv
                else:
                    del acc[w2]
        cols.append({windex[w2]: c for w2, c in acc.items()})
    return RowElimination(len(cols), cols).run().rank


def invariant_cohomology_dims(yd, bar, n, p_max=None, mode="group",
                              class_basis_provider=None):
    """Invariant dimension of Ext^n under the group action.

    mode="group": dimension of the G-invariants of H^n, computed by
    averaging the induced action on verified class bases (characteristic
    zero makes invariants of cohomology equal cohomology of invariants).
    mode="component": dimension of the identity-degree part of H^n,
    computed blockwise on the degree-e subcomplex.
    """
    ps = bar.p_range(n)
    if p_max is not None:
        ps = [p for p in ps if p <= p_max]
    if mode == "component":
        total = 0
        for p in ps:
            total += bar.hdim_component(n, p, 0)
        return total
    if mode != "group":
        raise ValueError("mode must be 'group' or 'component'")
    total = 0
    for p in ps:
        h = bar.hdim(n, p)
        if h == 0:
            continue
        if class_basis_provider is not None:
            cb = class_basis_provider(n, p)
        else:
            cb = bar.class_basis(n, p)
        mats = []
        for gi in yd.group:
            rows = [cb.coords(yd.apply_diagonal(gi, rep)) for rep in cb.reps]
            mats.append(rows)
        k = cb.dim
        avg_cols = []
        for j in range(k):
            col = {}
            for rows in mats:
                for i in range(k):
                    v = rows[j][i]
                    if v:
                        col[i] = col.get(i, 0) + v
            avg_cols.append({i: v for i, v in col.items() if v})
        total += RowElimination(k, avg_cols).run().rank
    return total
