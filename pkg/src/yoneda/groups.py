"""Small permutation groups with named elements.

Only tiny symmetric groups are needed (S2, S3); elements are stored as
image tuples and addressed by cycle-notation names such as "(12)" or
"(123)".  Products compose right-to-left: (g*h)(x) = g(h(x)).
"""

from __future__ import annotations

from itertools import permutations


def _cycle_name(perm):
    """Cycle notation for an image tuple, 'e' for the identity."""
    n = len(perm)
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        cycles.append(cyc)
    if not cycles:
        return "e"
    return "".join("(" + "".join(str(i + 1) for i in c) + ")" for c in cycles)


class FiniteGroup:
    """Multiplication-table group on named elements; element 0 is the identity."""

    __slots__ = ("names", "perms", "index", "_mul", "_inv")

    def __init__(self, perms):
        perms = [tuple(p) for p in perms]
        self.perms = perms
        self.names = tuple(_cycle_name(p) for p in perms)
        self.index = {name: i for i, name in enumerate(self.names)}
        if self.names[0] != "e":
            raise ValueError("element 0 must be the identity")
        lookup = {p: i for i, p in enumerate(perms)}
        n = len(perms)
        self._mul = [[0] * n for _ in range(n)]
        self._inv = [0] * n
        for i, g in enumerate(perms):
            for j, h in enumerate(perms):
                gh = tuple(g[h[x]] for x in range(len(g)))
                if gh not in lookup:
                    raise ValueError("element set is not closed under products")
                self._mul[i][j] = lookup[gh]
            inv = tuple(sorted(range(len(g)), key=lambda x: g[x]))
            self._inv[i] = lookup[inv]

    @classmethod
    def symmetric(cls, n):
        """S_n ordered by (support size, cycle name): e, (12), (13), (23), (123), ..."""
        perms = sorted(permutations(range(n)),
                       key=lambda p: (sum(p[i] != i for i in range(n)), _cycle_name(p)))
        return cls(perms)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(range(len(self.names)))

    def mul(self, i, j):
        return self._mul[i][j]

    def inv(self, i):
        return self._inv[i]

    def conj(self, g, x):
        """g x g^-1 (indices)."""
        return self._mul[self._mul[g][x]][self._inv[g]]

    def sign(self, i):
        """Permutation sign of element i."""
        perm = self.perms[i]
        sgn = 1
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                if perm[a] > perm[b]:
                    sgn = -sgn
        return sgn

    def product(self, indices):
        """Fold mul over a sequence of element indices (empty -> identity)."""
        acc = 0
        for i in indices:
            acc = self._mul[acc][i]
        return acc

    def centralizer(self, i):
        return tuple(j for j in self if self._mul[j][i] == self._mul[i][j])

    def conjugacy_class(self, i):
        return tuple(sorted({self.conj(g, i) for g in self}))


def s3():
    """The symmetric group on three letters, elements ordered
    e, (12), (13), (23), (123), (132)."""
    return FiniteGroup.symmetric(3)
