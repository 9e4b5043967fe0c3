"""Based root data, diagram automorphisms, orbit classification and
simply-connectedness tests.

The combinatorial dispatcher: a diagram automorphism (the Galois action on
the Dynkin diagram) splits the simple roots into orbits, and each orbit is
classified as a split rank-1 block, a pairwise-orthogonal (disconnected)
orbit handled by restriction of scalars, or the special pair of type A2
handled by the quasi-split unitary group.  Simple connectedness is detected
integrally: the coroots must be primitive and span a direct summand.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import LoopLabError

KIND_SPLIT_A1 = "SplitA1"
KIND_DISCONNECTED = "Disconnected"
KIND_A2_PAIR = "A2Pair"

DISPATCH = {
    KIND_SPLIT_A1: "factor_sl2_torus",
    KIND_DISCONNECTED: "factor_res_sl2_torus",
    KIND_A2_PAIR: "factor_su3_torus_artinian",
}


def _cartan_matrix(letter, rank):
    n = rank
    edges = set()
    lengths = [2] * n  # squared lengths, long = 2 by default

    def chain(k):
        return {(i, i + 1) for i in range(k - 1)}

    if letter == "A":
        if n < 1:
            raise LoopLabError("type A needs rank >= 1")
        edges = chain(n)
    elif letter == "B":
        if n < 2:
            raise LoopLabError("type B needs rank >= 2")
        edges = chain(n)
        lengths[n - 1] = 1  # last root short
    elif letter == "C":
        if n < 2:
            raise LoopLabError("type C needs rank >= 2")
        edges = chain(n)
        lengths = [1] * n
        lengths[n - 1] = 2  # last root long
    elif letter == "D":
        if n < 4:
            raise LoopLabError("type D needs rank >= 4")
        edges = chain(n - 1) | {(n - 3, n - 1)}
    elif letter == "E":
        if n not in (6, 7, 8):
            raise LoopLabError("type E has rank 6, 7 or 8")
        edges = {(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)}
        if n >= 7:
            edges.add((5, 6))
        if n == 8:
            edges.add((6, 7))
    elif letter == "F":
        if n != 4:
            raise LoopLabError("type F has rank 4")
        edges = chain(4)
        lengths = [2, 2, 1, 1]
    elif letter == "G":
        if n != 2:
            raise LoopLabError("type G has rank 2")
        edges = chain(2)
        lengths = [6, 2]
    else:
        raise LoopLabError(f"unknown type '{letter}'")
    cartan = [[0] * n for _ in range(n)]
    for i in range(n):
        cartan[i][i] = 2
    for i, j in edges:
        # <alpha_i, alpha_j^vee> = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)
        # with (alpha_i, alpha_j) = -max(len_i, len_j)/2 on an edge
        inner = -Fraction(max(lengths[i], lengths[j]), 2)
        cartan[i][j] = int(2 * inner / lengths[j])
        cartan[j][i] = int(2 * inner / lengths[i])
    return cartan


def _symmetrizable_positive_definite(cartan):
    n = len(cartan)
    d = [Fraction(0)] * n
    d[0] = Fraction(1)
    # propagate the symmetrizer along edges; disconnected pieces start fresh
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if d[i] == 0:
                continue
            for j in range(n):
                if cartan[i][j] and d[j] == 0:
                    d[j] = d[i] * cartan[j][i] / cartan[i][j]
                    changed = True
        if not changed:
            for i in range(n):
                if d[i] == 0:
                    d[i] = Fraction(1)
                    changed = True
                    break
            else:
                break
    sym = [[d[j] * cartan[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if sym[i][j] != sym[j][i]:
                return False
    # leading principal minors of the symmetrized matrix must be positive
    m = [row[:] for row in sym]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            factor = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= factor * m[k][j]
    return True


@dataclass(frozen=True)
class BasedRootDatum:
    """Simple roots in X = Z^dim, simple coroots in the dual lattice, and
    the Cartan pairing <alpha_i, alpha_j^vee>."""

    label: str
    roots: tuple
    coroots: tuple

    def __post_init__(self):
        if len(self.roots) != len(self.coroots):
            raise LoopLabError("roots and coroots must match in number")
        if not self.roots:
            raise LoopLabError("empty root datum")
        dim = len(self.roots[0])
        if any(len(v) != dim for v in self.roots + self.coroots):
            raise LoopLabError("inconsistent lattice dimension")
        c = self.cartan()
        for i in range(self.rank):
            if c[i][i] != 2:
                raise LoopLabError("<alpha_i, alpha_i^vee> must be 2")
            for j in range(self.rank):
                if i != j and c[i][j] > 0:
                    raise LoopLabError("off-diagonal Cartan entries must be <= 0")
        if not _symmetrizable_positive_definite(c):
            raise LoopLabError("Cartan matrix is not of finite type")

    @property
    def rank(self):
        return len(self.roots)

    @property
    def dim(self):
        return len(self.roots[0])

    def pairing(self, i, j):
        """<alpha_i, alpha_j^vee>."""
        return sum(a * b for a, b in zip(self.roots[i], self.coroots[j]))

    def cartan(self):
        r = self.rank
        return [[self.pairing(i, j) for j in range(r)] for i in range(r)]


def datum_make(letter, rank):
    """The standard simply connected based root datum of a finite type:
    coroots are the standard basis of Z^rank and roots are the Cartan rows."""
    cartan = _cartan_matrix(letter, rank)
    coroots = tuple(tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank))
    roots = tuple(tuple(row) for row in cartan)
    return BasedRootDatum(f"{letter}{rank}", roots, coroots)


# ---------------------------------------------------------------------------
# integer lattice tests
# ---------------------------------------------------------------------------


def smith_invariants(rows):
    """Nonzero elementary divisors of an integer matrix, by direct row and
    column reduction."""
    m = [list(r) for r in rows]
    if not m:
        return []
    rows_n, cols_n = len(m), len(m[0])
    divisors = []
    top = 0
    left = 0
    while top < rows_n and left < cols_n:
        # find the smallest nonzero entry to pivot on
        pivot = None
        for i in range(top, rows_n):
            for j in range(left, cols_n):
                if m[i][j] and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        for row in m:
            row[left], row[pj] = row[pj], row[left]
        dirty = False
        for i in range(top + 1, rows_n):
            q = m[i][left] // m[top][left]
            if q:
                for j in range(left, cols_n):
                    m[i][j] -= q * m[top][j]
            if m[i][left]:
                dirty = True
        for j in range(left + 1, cols_n):
            q = m[top][j] // m[top][left]
            if q:
                for i in range(top, rows_n):
                    m[i][j] -= q * m[i][left]
            if m[top][j]:
                dirty = True
        if dirty:
            continue
        divisors.append(abs(m[top][left]))
        top += 1
        left += 1
    # normalize divisibility d1 | d2 | ...
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            a, b = divisors[i], divisors[j]
            g = math.gcd(a, b)
            divisors[i], divisors[j] = g, a * b // g if g else 0
    return sorted(divisors)


def is_simply_connected(datum):
    """True iff every simple coroot is primitive and the coroots span a
    direct summand of the cocharacter lattice; returns (flag, witness) with
    per-coroot content gcds and the elementary divisors."""
    gcds = [math.gcd(*(abs(c) for c in v)) if any(v) else 0 for v in datum.coroots]
    divisors = smith_invariants(datum.coroots)
    ok = (
        all(g == 1 for g in gcds)
        and len(divisors) == datum.rank
        and all(d == 1 for d in divisors)
    )
    witness = {"coroot_gcds": gcds, "elementary_divisors": divisors}
    return ok, witness


# ---------------------------------------------------------------------------
# diagram automorphisms and orbit classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramAutomorphism:
    """A permutation of the simple roots preserving the Cartan pairing."""

    datum: BasedRootDatum
    perm: tuple

    def __post_init__(self):
        r = self.datum.rank
        if sorted(self.perm) != list(range(r)):
            raise LoopLabError("not a permutation of the simple roots")
        for i in range(r):
            for j in range(r):
                if self.datum.pairing(self.perm[i], self.perm[j]) != self.datum.pairing(i, j):
                    raise LoopLabError("permutation does not preserve the Cartan matrix")

    @property
    def order(self):
        n = 1
        current = self.perm
        ident = tuple(range(self.datum.rank))
        while current != ident:
            current = tuple(self.perm[i] for i in current)
            n += 1
        return n

    def orbits(self):
        r = self.datum.rank
        seen = [False] * r
        out = []
        for i in range(r):
            if seen[i]:
                continue
            orbit = []
            j = i
            while not seen[j]:
                seen[j] = True
                orbit.append(j)
                j = self.perm[j]
            out.append(tuple(sorted(orbit)))
        return sorted(out)


def named_automorphism(datum, name):
    """The automorphisms addressable from diagram strings: 'id', 'flip'
    (the order-2 diagram symmetry of types A, D, E6), and 'rot3' (the
    triality rotation of D4)."""
    r = datum.rank
    letter = datum.label[0]
    if name == "id":
        return DiagramAutomorphism(datum, tuple(range(r)))
    if name == "flip":
        if letter == "A" and r >= 2:
            return DiagramAutomorphism(datum, tuple(r - 1 - i for i in range(r)))
        if letter == "D":
            perm = list(range(r))
            perm[r - 2], perm[r - 1] = perm[r - 1], perm[r - 2]
            return DiagramAutomorphism(datum, tuple(perm))
        if letter == "E" and r == 6:
            return DiagramAutomorphism(datum, (5, 1, 4, 3, 2, 0))
        raise LoopLabError(f"type {datum.label} has no 'flip' automorphism")
    if name == "rot3":
        if letter == "D" and r == 4:
            # rotate the three outer nodes 0 -> 2 -> 3 -> 0 around the center 1
            return DiagramAutomorphism(datum, (2, 1, 3, 0))
        raise LoopLabError("'rot3' exists only for D4")
    raise LoopLabError(f"unknown automorphism '{name}'")


def all_automorphisms(datum):
    """Brute-force list of all Cartan-preserving permutations."""
    out = []
    r = datum.rank
    cartan = datum.cartan()
    for perm in itertools.permutations(range(r)):
        if all(cartan[perm[i]][perm[j]] == cartan[i][j]
               for i in range(r) for j in range(r)):
            out.append(DiagramAutomorphism(datum, perm))
    return out


@dataclass(frozen=True)
class OrbitClassification:
    """Orbits of the diagram automorphism with their kinds and the name of
    the torus-factorization routine each kind dispatches to."""

    datum: BasedRootDatum
    orbits: tuple
    kinds: tuple

    def dispatch(self):
        return tuple(DISPATCH[k] for k in self.kinds)

    def by_kind(self, kind):
        return [o for o, k in zip(self.orbits, self.kinds) if k == kind]


def classify_orbits(datum, aut):
    """Classify each orbit of the automorphism: a singleton is a split
    rank-1 block; an orbit with all pairings zero is disconnected (handled
    by restriction of scalars); a 2-orbit with nonzero pairing is the
    special A2 pair (handled by the quasi-split unitary group)."""
    if aut.datum != datum:
        raise LoopLabError("automorphism belongs to a different datum")
    orbits = aut.orbits()
    kinds = []
    for orbit in orbits:
        if len(orbit) == 1:
            kinds.append(KIND_SPLIT_A1)
            continue
        pairs = [(i, j) for i in orbit for j in orbit if i != j]
        if all(datum.pairing(i, j) == 0 for i, j in pairs):
            kinds.append(KIND_DISCONNECTED)
        elif len(orbit) == 2:
            kinds.append(KIND_A2_PAIR)
        else:
            # cannot occur for an automorphism of a finite-type diagram
            raise LoopLabError(
                f"orbit {orbit} is connected with more than two roots")
    return OrbitClassification(datum, tuple(orbits), tuple(kinds))


# ---------------------------------------------------------------------------
# the split torus plan
# ---------------------------------------------------------------------------


def split_torus_factor_plan(datum, diagonal=None, prec=None):
    """Express a torus point as an ordered product of coroot cocharacters
    alpha_i^vee(a_i), one per simple root.

    Requires the datum to be simply connected (the coroot cocharacters then
    multiply isomorphically onto the torus).  With no diagonal the plan is
    symbolic (parameters None).  For the implemented rank-1 and rank-2
    type-A matrix models, passing the diagonal entries solves for the
    parameters: diag(a, 1/a) gives [a]; diag(x1, x2, x3) gives
    a1 = x1, a2 = x1*x2.
    """
    ok, witness = is_simply_connected(datum)
    if not ok:
        raise LoopLabError(
            f"datum is not simply connected: {witness}")
    if diagonal is None:
        return [(i, None) for i in range(datum.rank)]
    letter = datum.label[0]
    if letter != "A" or datum.rank > 2:
        raise LoopLabError(
            "coroot coordinates are implemented for the A1/A2 matrix models only")
    if datum.rank == 1:
        if len(diagonal) != 2:
            raise LoopLabError("rank-1 plan expects diag(a, 1/a)")
        return [(0, diagonal[0])]
    if len(diagonal) != 3:
        raise LoopLabError("rank-2 plan expects diag(x1, x2, x3)")
    x1, x2 = diagonal[0], diagonal[1]
    return [(0, x1), (1, x1 * x2)]
