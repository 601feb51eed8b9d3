"""Finite connected N-graded algebras by basis and structure constants.

Algebras are built degreewise from a presentation: degree n is the quotient
of the span of degree-n generator words by the two-sided ideal slice
I_n = V (x) I_{n-1} + rel (x) words.  The monomial basis kept in each degree
is the set of lexicographically smallest words (echelon eliminates the
largest word of every relation), so structure constants are reproducible
across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import ColumnEchelon


class NonHomogeneousRelation(ValueError):
    pass


class ZeroConstantTerm(ValueError):
    pass


def _fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(x))
    return Fraction(x)


@dataclass(frozen=True)
class Presentation:
    """Generators with degrees and homogeneous relations in the free algebra.

    generators: list of (label, degree >= 1) or (label, degree, gdeg_name).
    relations: list of relations; each relation is a list of
        (coefficient, word) with word a tuple of generator labels.
    """

    generators: tuple
    relations: tuple

    def __init__(self, generators, relations):
        gens = []
        for g in generators:
            if len(g) == 2:
                label, deg = g
                gdeg = None
            else:
                label, deg, gdeg = g
            if deg < 1:
                raise ValueError(f"generator {label} must have degree >= 1")
            gens.append((label, int(deg), gdeg))
        rels = []
        labels = [g[0] for g in gens]
        degree_of = {g[0]: g[1] for g in gens}
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate generator labels")
        for rel in relations:
            terms = []
            degs = set()
            for coeff, word in rel:
                word = tuple(word)
                for w in word:
                    if w not in degree_of:
                        raise ValueError(f"unknown generator {w!r} in relation")
                degs.add(sum(degree_of[w] for w in word))
                terms.append((_fraction(coeff), word))
            if len(degs) != 1:
                raise NonHomogeneousRelation(f"relation {rel} mixes degrees {sorted(degs)}")
            deg = degs.pop()
            if deg < 2:
                raise NonHomogeneousRelation(f"relation of degree {deg} < 2")
            rels.append(tuple(terms))
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "relations", tuple(rels))

    def max_relation_degree(self):
        degree_of = {g[0]: g[1] for g in self.generators}
        out = 2
        for rel in self.relations:
            out = max(out, sum(degree_of[w] for w in rel[0][1]))
        return out


@dataclass(frozen=True)
class HilbertSeries:
    """Graded dimension counts, index = degree."""

    coefficients: tuple

    def __init__(self, coefficients):
        object.__setattr__(self, "coefficients", tuple(coefficients))

    def __getitem__(self, i):
        return self.coefficients[i] if i < len(self.coefficients) else 0

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __eq__(self, other):
        if isinstance(other, HilbertSeries):
            other = other.coefficients
        return self.coefficients == tuple(other)


class FiniteGradedAlgebra:
    """Connected graded algebra with ordered basis and sparse products.

    basis_labels[i] names basis element i; element 0 is the unit.  Products
    are stored as mult[(i, j)] = ((k, coeff), ...).  An optional G-degree
    label per basis element supports group-graded algebras; products must
    then respect  gdeg(b_i b_j) = gdeg(b_i) * gdeg(b_j).
    """

    def __init__(self, basis_labels, degrees, mult, max_degree, *,
                 gdeg=None, group=None, complete=True, check=True):
        self.basis_labels = tuple(basis_labels)
        self.degrees = tuple(degrees)
        self.mult = {k: tuple((int(i), _fraction(c)) for i, c in v)
                     for k, v in mult.items() if v}
        self.max_degree = max_degree
        self.gdeg = tuple(gdeg) if gdeg is not None else None
        self.group = group
        self.complete = complete
        self.dim = len(self.basis_labels)
        self.index = {lab: i for i, lab in enumerate(self.basis_labels)}
        self.by_degree = {}
        for i, d in enumerate(self.degrees):
            self.by_degree.setdefault(d, []).append(i)
        if check:
            self._validate()

    # -- construction-time invariants ------------------------------------

    def _validate(self):
        if self.by_degree.get(0, []) != [0]:
            raise ValueError("algebra must be connected: degree 0 is spanned by the unit")
        for (i, j), terms in self.mult.items():
            d = self.degrees[i] + self.degrees[j]
            for k, c in terms:
                if self.degrees[k] != d:
                    raise ValueError(f"product b{i} b{j} is not homogeneous")
        for i in range(self.dim):
            if self.product_indices(0, i) != ((i, Fraction(1)),):
                raise ValueError("unit law fails on the left")
            if self.product_indices(i, 0) != ((i, Fraction(1)),):
                raise ValueError("unit law fails on the right")
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    left = self.multiply(self.element(i, j), self.unit_vec(k))
                    right = self.multiply(self.unit_vec(i), self.element(j, k))
                    if left != right:
                        raise ValueError(f"associativity fails on ({i},{j},{k})")
        if self.gdeg is not None:
            if self.group is None:
                raise ValueError("gdeg labels require a group")
            gidx = [self.group.index[g] for g in self.gdeg]
            for (i, j), terms in self.mult.items():
                expect = self.group.mul(gidx[i], gidx[j])
                for k, _ in terms:
                    if gidx[k] != expect:
                        raise ValueError(f"G-degree not multiplicative on ({i},{j})")

    # -- basic operations --------------------------------------------------

    def unit_vec(self, i):
        return {i: Fraction(1)}

    def element(self, i, j):
        """Product of basis elements i and j as a dict-vector."""
        return {k: c for k, c in self.mult.get((i, j), ())}

    def product_indices(self, i, j):
        d = self.degrees[i] + self.degrees[j]
        if d == 0:
            return ((0, Fraction(1)),)
        return self.mult.get((i, j), ())

    def multiply(self, v, w):
        """Bilinear product of dict-vectors."""
        out = {}
        for i, a in v.items():
            if not a:
                continue
            for j, b in w.items():
                ab = a * b
                if not ab:
                    continue
                for k, c in self.mult.get((i, j), ()):
                    nv = out.get(k, 0) + ab * c
                    if nv:
                        out[k] = nv
                    else:
                        del out[k]
        return out

    def graded_dims(self):
        coeffs = [0] * (self.max_degree + 1)
        for d, idxs in self.by_degree.items():
            if d <= self.max_degree:
                coeffs[d] = len(idxs)
        return HilbertSeries(coeffs)

    def positive_indices(self):
        return [i for i in range(self.dim) if self.degrees[i] > 0]

    def top_degree(self):
        return max(self.degrees)

    def augmentation(self, v):
        """Projection onto the degree-0 coefficient."""
        return v.get(0, Fraction(0))

    def from_word(self, word):
        """Element given by a product of basis labels."""
        out = self.unit_vec(0)
        for lab in word:
            out = self.multiply(out, self.unit_vec(self.index[lab]))
        return out

    def gdeg_index(self, i):
        return self.group.index[self.gdeg[i]] if self.gdeg is not None else None

    def __repr__(self):
        return (f"FiniteGradedAlgebra(dim={self.dim}, "
                f"dims={list(self.graded_dims())})")


# ---------------------------------------------------------------------------
# construction from a presentation


def _words_of_degree(gen_degrees, total):
    """All generator-index words of the given total degree, lex order."""
    out = []

    def rec(prefix, remaining):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for g, d in enumerate(gen_degrees):
            if d <= remaining:
                prefix.append(g)
                rec(prefix, remaining - d)
                prefix.pop()

    rec([], total)
    return out


class _DegreeSlice:
    """One graded piece during construction: words, ideal echelon, normal forms."""

    def __init__(self, words):
        self.words = words
        self.windex = {w: i for i, w in enumerate(words)}
        self.ech = ColumnEchelon()   # pivots keyed by *negated* word index
        self.ideal_vectors = []

    def add_ideal_vector(self, vec):
        """vec: dict word-index -> coeff.  Keys negated so the largest word leads."""
        flipped = {-k - 1: v for k, v in vec.items()}
        is_new, reduced, _ = self.ech.insert(flipped)
        if is_new:
            self.ideal_vectors.append(reduced)

    def finish(self):
        self.basis_words = [w for i, w in enumerate(self.words)
                            if (-i - 1) not in self.ech.pivots]
        self.basis_pos = {w: n for n, w in enumerate(self.basis_words)}
        # reduced expansions: pivot word -> combination of basis words
        self.expansions = {}
        for row in self.ech.reduced_basis():
            items = sorted(row.items())
            lead = -items[0][0] - 1
            expansion = {}
            for k, v in items[1:]:
                expansion[-k - 1] = -v
            self.expansions[lead] = expansion

    def normal_form(self, word_idx):
        """Expansion of a word over basis words, as dict word-index -> coeff."""
        if word_idx in self.expansions:
            return self.expansions[word_idx]
        return {word_idx: Fraction(1)}


def build_from_presentation(pres, max_degree=8, group=None):
    """Quotient of the free graded algebra by the ideal of a presentation.

    Degrees above the point where the algebra provably vanishes are skipped;
    the result is the degree-truncation at ``max_degree`` (an algebra, since
    the high part is an ideal), with ``complete=True`` when the truncation
    is the whole algebra.
    """
    if max_degree < pres.max_relation_degree():
        raise ValueError("max_degree below the largest relation degree")
    gen_labels = [g[0] for g in pres.generators]
    gen_degrees = [g[1] for g in pres.generators]
    gen_gdegs = [g[2] for g in pres.generators]
    use_gdeg = any(g is not None for g in gen_gdegs)
    if use_gdeg:
        if group is None:
            raise ValueError("generators carry gdeg labels but no group was given")
        if any(g is None for g in gen_gdegs):
            raise ValueError("either all or no generators carry gdeg labels")
    max_gen_degree = max(gen_degrees)

    rel_by_degree = {}
    for rel in pres.relations:
        d = sum(gen_degrees[gen_labels.index(w)] for w in rel[0][1])
        vec = {}
        for coeff, word in rel:
            widx = tuple(gen_labels.index(w) for w in word)
            vec[widx] = vec.get(widx, 0) + coeff
        rel_by_degree.setdefault(d, []).append({k: v for k, v in vec.items() if v})

    slices = {}
    zero_run = 0
    computed_to = 0
    for n in range(1, max_degree + 1):
        words = _words_of_degree(gen_degrees, n)
        sl = _DegreeSlice(words)
        # left-extend the ideal of each lower slice by one generator
        for g in range(len(gen_labels)):
            lower = slices.get(n - gen_degrees[g])
            if lower is None:
                continue
            for vec in lower.ideal_vectors:
                out = {}
                for negk, v in vec.items():
                    w = lower.words[-negk - 1]
                    out[sl.windex[(g,) + w]] = v
                sl.add_ideal_vector(out)
        # relations in leading position
        for d, rels in rel_by_degree.items():
            if d > n:
                continue
            tails = _words_of_degree(gen_degrees, n - d) if n > d else [()]
            for rel in rels:
                for tail in tails:
                    out = {}
                    for word, c in rel.items():
                        out[sl.windex[word + tail]] = c
                    sl.add_ideal_vector(out)
        sl.finish()
        slices[n] = sl
        computed_to = n
        if not sl.basis_words:
            zero_run += 1
            if zero_run >= max_gen_degree:
                break
        else:
            zero_run = 0

    # vanishing for max_gen_degree consecutive degrees forces vanishing above:
    # every longer word has a prefix landing in the zero window
    complete = zero_run >= max_gen_degree

    labels = ["1"]
    degrees = [0]
    gdegs = [group.names[0]] if use_gdeg else None
    word_index = {(): 0}
    for n in range(1, computed_to + 1):
        for w in slices[n].basis_words:
            word_index[w] = len(labels)
            labels.append("".join(gen_labels[g] for g in w))
            degrees.append(n)
            if use_gdeg:
                gdegs.append(group.names[group.product(
                    group.index[gen_gdegs[g]] for g in w)])

    mult = {}
    dim = len(labels)
    words_by_index = {v: k for k, v in word_index.items()}
    for i in range(dim):
        wi = words_by_index[i]
        for j in range(dim):
            wj = words_by_index[j]
            d = degrees[i] + degrees[j]
            if i == 0 or j == 0:
                mult[(i, j)] = ((i + j, Fraction(1)),)
                continue
            if d > computed_to:
                continue  # vanishes (or truncated away)
            sl = slices[d]
            concat = wi + wj
            terms = []
            for widx, c in sorted(sl.normal_form(sl.windex[concat]).items()):
                w = sl.words[widx]
                terms.append((word_index[w], c))
            if terms:
                mult[(i, j)] = tuple(terms)

    return FiniteGradedAlgebra(labels, degrees, mult, max_degree,
                               gdeg=gdegs, group=group if use_gdeg else None,
                               complete=complete)


# ---------------------------------------------------------------------------
# power series


def expand_rational_series(numerator, denominator, n):
    """First n+1 Taylor coefficients of numerator/denominator, exact.

    Coefficient lists are indexed by degree; the constant term of the
    denominator must be nonzero.
    """
    num = [_fraction(c) for c in numerator]
    den = [_fraction(c) for c in denominator]
    if not den or den[0] == 0:
        raise ZeroConstantTerm("denominator has zero constant term")
    out = []
    for k in range(n + 1):
        acc = num[k] if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        val = acc / den[0]
        out.append(int(val) if val.denominator == 1 else val)
    return out


def polynomial_quotient_dims(variables, relations, max_degree):
    """Graded dims of a commutative polynomial ring modulo homogeneous relations.

    variables: list of (name, degree); relations: polynomials as dicts
    mapping exponent tuples to coefficients.  Dimension in each degree is
    computed by exact rank of the span of all relation multiples -- an
    oracle independent of any rewriting theory.
    """
    names = [v[0] for v in variables]
    degs = [v[1] for v in variables]
    nv = len(names)

    def monomials(total):
        out = []

        def rec(i, remaining, expo):
            if i == nv:
                if remaining == 0:
                    out.append(tuple(expo))
                return
            top = remaining // degs[i]
            for e in range(top + 1):
                expo.append(e)
                rec(i + 1, remaining - e * degs[i], expo)
                expo.pop()

        rec(0, total, [])
        return sorted(out)

    def poly_degree(poly):
        ds = {sum(e * d for e, d in zip(expo, degs)) for expo in poly}
        if len(ds) != 1:
            raise NonHomogeneousRelation("relation is not homogeneous")
        return ds.pop()

    rel_degs = [poly_degree(p) for p in relations]
    dims = []
    for n in range(max_degree + 1):
        monos = monomials(n)
        midx = {m: i for i, m in enumerate(monos)}
        ech = ColumnEchelon()
        span = 0
        for poly, d in zip(relations, rel_degs):
            if d > n:
                continue
            for m in monomials(n - d):
                vec = {}
                for expo, c in poly.items():
                    key = tuple(a + b for a, b in zip(expo, m))
                    vec[midx[key]] = vec.get(midx[key], 0) + c
                vec = {k: v for k, v in vec.items() if v}
                new, _, _ = ech.insert(vec)
                if new:
                    span += 1
        dims.append(len(monos) - span)
    return HilbertSeries(dims)
