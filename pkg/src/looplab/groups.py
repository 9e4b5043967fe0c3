"""Matrix models of SL2, SL3 and the quasi-split special unitary group SU3.

SL2/SL3 matrices have Laurent-series entries; SU3 matrices live over the
ramified quadratic extension and satisfy sigma(g^T) J g = J for the fixed
antidiagonal form J (J^2 = 1), together with det g = 1.  Subgroup tags are
advisory metadata validated structurally on construction; multiplication
degrades tags conservatively.
"""

from __future__ import annotations

from .errors import ConstraintViolation, ContextMismatch, LoopLabError, NotAUnit
from .rings import DEFAULT_PRECISION, INF, LaurentSeries, QuadExtElement

GROUP_SL2 = "sl2"
GROUP_SL3 = "sl3"
GROUP_SU3 = "su3"

TAG_UPLUS = "U+"
TAG_UMINUS = "U-"
TAG_TORUS = "T"
TAG_GENERIC = "G"

_DIM = {GROUP_SL2: 2, GROUP_SL3: 3, GROUP_SU3: 3}


def _is_exact_zero(x):
    return x.exact and x.is_zero()


def _is_exact_one(x):
    if isinstance(x, QuadExtElement):
        return x.exact and x.even.is_one() and x.odd.is_zero()
    return x.exact and x.is_one()


def shape_defects(entries, n, tag):
    """Entries violating the structural form of a subgroup tag: upper/lower
    unipotent triangles need exact zeros below/above and exact ones on the
    diagonal; the torus needs exact zeros off the diagonal."""
    bad = []
    if tag == TAG_UPLUS:
        bad = [(i, j) for i in range(n) for j in range(n)
               if i > j and not _is_exact_zero(entries[i][j])]
        bad += [(i, i) for i in range(n) if not _is_exact_one(entries[i][i])]
    elif tag == TAG_UMINUS:
        bad = [(i, j) for i in range(n) for j in range(n)
               if i < j and not _is_exact_zero(entries[i][j])]
        bad += [(i, i) for i in range(n) if not _is_exact_one(entries[i][i])]
    elif tag == TAG_TORUS:
        bad = [(i, j) for i in range(n) for j in range(n)
               if i != j and not _is_exact_zero(entries[i][j])]
    return bad


class GroupElement:
    """A 2x2 or 3x3 matrix over a ring context with a group tag and an
    advisory subgroup tag; immutable."""

    __slots__ = ("group", "entries", "subgroup", "note")

    def __init__(self, group, entries, subgroup=TAG_GENERIC, note=""):
        if group not in _DIM:
            raise LoopLabError(f"unknown group tag '{group}'")
        n = _DIM[group]
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != n or any(len(r) != n for r in entries):
            raise LoopLabError(f"{group} needs a {n}x{n} matrix")
        want_quad = group == GROUP_SU3
        for row in entries:
            for x in row:
                if isinstance(x, QuadExtElement) != want_quad:
                    raise ContextMismatch(
                        "su3 entries must be quadratic-extension elements, "
                        "sl2/sl3 entries plain series")
        self.group = group
        self.entries = entries
        self.subgroup = subgroup
        self.note = note
        if subgroup != TAG_GENERIC:
            self._validate_shape()

    # -- context -------------------------------------------------------------

    @property
    def dim(self):
        return _DIM[self.group]

    @property
    def alg(self):
        return self.entries[0][0].alg

    @property
    def var(self):
        return self.entries[0][0].var

    def _zero(self):
        if self.group == GROUP_SU3:
            return QuadExtElement.zero(self.alg, self.var)
        return LaurentSeries.zero(self.alg, self.var)

    def _one(self):
        if self.group == GROUP_SU3:
            return QuadExtElement.one(self.alg, self.var)
        return LaurentSeries.one(self.alg, self.var)

    def _validate_shape(self):
        bad = shape_defects(self.entries, self.dim, self.subgroup)
        if bad:
            raise ConstraintViolation(
                f"subgroup tag {self.subgroup} violated at entries {bad}")

    def with_note(self, note):
        return GroupElement(self.group, self.entries, self.subgroup, note)

    def with_tag(self, subgroup):
        return GroupElement(self.group, self.entries, subgroup, self.note)

    # -- predicates ------------------------------------------------------------

    def is_exact_identity(self):
        n = self.dim
        return all(
            _is_exact_one(self.entries[i][j]) if i == j else _is_exact_zero(self.entries[i][j])
            for i in range(n) for j in range(n)
        )

    def eq_window(self, other):
        if self.group != other.group:
            raise ContextMismatch("elements of different groups")
        ok_all = True
        window = INF
        for ra, rb in zip(self.entries, other.entries):
            for a, b in zip(ra, rb):
                ok, w = a.eq_window(b)
                ok_all = ok_all and ok
                window = min(window, w)
        return ok_all, window

    def reduce(self, qmap):
        return GroupElement(
            self.group,
            [[x.reduce(qmap) for x in row] for row in self.entries],
            self.subgroup,
            self.note,
        )

    def lift(self, qmap):
        return GroupElement(
            self.group,
            [[x.lift(qmap) for x in row] for row in self.entries],
            self.subgroup,
            self.note,
        )

    def transpose(self):
        n = self.dim
        return GroupElement(self.group, [[self.entries[j][i] for j in range(n)] for i in range(n)])

    def __repr__(self):
        from .literals import format_entry

        rows = "], [".join(", ".join(format_entry(x) for x in row) for row in self.entries)
        return f"{self.group}:{self.subgroup} [[{rows}]]"


def identity(group, alg, var):
    n = _DIM[group]
    if group == GROUP_SU3:
        one, zero = QuadExtElement.one(alg, var), QuadExtElement.zero(alg, var)
    else:
        one, zero = LaurentSeries.one(alg, var), LaurentSeries.zero(alg, var)
    return GroupElement(group, [[one if i == j else zero for j in range(n)] for i in range(n)],
                        TAG_TORUS)


# ---------------------------------------------------------------------------
# group law
# ---------------------------------------------------------------------------


def _grid_mul(a, b, zero):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                x, y = a[i][k], b[k][j]
                if _is_exact_zero(x) or _is_exact_zero(y):
                    continue
                term = x * y
                acc = term if acc is None else acc + term
            row.append(zero if acc is None else acc)
        out.append(row)
    return out


def mat_mul(a, b):
    if a.group != b.group:
        raise ContextMismatch("product of elements of different groups")
    if a.var != b.var or a.alg != b.alg:
        raise ContextMismatch("product over different ring contexts")
    if a.subgroup == b.subgroup and a.subgroup in (TAG_UPLUS, TAG_UMINUS):
        tag = a.subgroup
    else:
        tag = TAG_GENERIC
    return GroupElement(a.group, _grid_mul(a.entries, b.entries, a._zero()), tag)


def mat_det(a):
    e = a.entries
    if a.dim == 2:
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]
    return (
        e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
        - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
    )


def mat_inv(a):
    """Inverse via the adjugate; valid since det = 1, so no division."""
    e = a.entries
    if a.subgroup in (TAG_UPLUS, TAG_UMINUS, TAG_TORUS):
        tag = a.subgroup
    else:
        tag = TAG_GENERIC
    if a.dim == 2:
        entries = [[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]]
        return GroupElement(a.group, entries, tag)

    def minor(i, j):
        rows = [r for r in range(3) if r != i]
        cols = [c for c in range(3) if c != j]
        return (e[rows[0]][cols[0]] * e[rows[1]][cols[1]]
                - e[rows[0]][cols[1]] * e[rows[1]][cols[0]])

    adj = [[minor(j, i) if (i + j) % 2 == 0 else -minor(j, i) for j in range(3)]
           for i in range(3)]
    return GroupElement(a.group, adj, tag)


def mat_word(factors):
    """Left-to-right product of a nonempty factor list."""
    acc = factors[0]
    for f in factors[1:]:
        acc = mat_mul(acc, f)
    return acc


# ---------------------------------------------------------------------------
# SL2 and SL3 generators
# ---------------------------------------------------------------------------


def sl2_uplus(x):
    one = LaurentSeries.one(x.alg, x.var)
    zero = LaurentSeries.zero(x.alg, x.var)
    return GroupElement(GROUP_SL2, [[one, x], [zero, one]], TAG_UPLUS)


def sl2_uminus(x):
    one = LaurentSeries.one(x.alg, x.var)
    zero = LaurentSeries.zero(x.alg, x.var)
    return GroupElement(GROUP_SL2, [[one, zero], [x, one]], TAG_UMINUS)


def sl2_torus(a, prec=DEFAULT_PRECISION):
    zero = LaurentSeries.zero(a.alg, a.var)
    return GroupElement(GROUP_SL2, [[a, zero], [zero, a.inverse(prec)]], TAG_TORUS)


def sl2_weyl(alg, var):
    one = LaurentSeries.one(alg, var)
    zero = LaurentSeries.zero(alg, var)
    return GroupElement(GROUP_SL2, [[zero, -one], [one, zero]])


def sl2_generators(kind, param, prec=DEFAULT_PRECISION):
    """Dispatch uplus | uminus | torus on the standard SL2 generators."""
    if kind == "uplus":
        return sl2_uplus(param)
    if kind == "uminus":
        return sl2_uminus(param)
    if kind == "torus":
        if param.is_unit() != "unit":
            raise NotAUnit("torus parameter must be a unit")
        return sl2_torus(param, prec)
    raise LoopLabError(f"unknown generator kind '{kind}'")


def sl3_elementary(i, j, x):
    """Identity plus x in position (i, j), i != j."""
    if i == j:
        raise LoopLabError("elementary matrices are off-diagonal")
    one = LaurentSeries.one(x.alg, x.var)
    zero = LaurentSeries.zero(x.alg, x.var)
    entries = [[one if r == c else zero for c in range(3)] for r in range(3)]
    entries[i][j] = x
    return GroupElement(GROUP_SL3, entries, TAG_UPLUS if i < j else TAG_UMINUS)


def sl3_diag(d1, d2, d3):
    zero = LaurentSeries.zero(d1.alg, d1.var)
    return GroupElement(GROUP_SL3, [[d1, zero, zero], [zero, d2, zero], [zero, zero, d3]],
                        TAG_TORUS)


def sl3_coroot(i, a, prec=DEFAULT_PRECISION):
    """The simple coroot cocharacters of SL3: index 0 gives diag(a, 1/a, 1),
    index 1 gives diag(1, a, 1/a)."""
    one = LaurentSeries.one(a.alg, a.var)
    ainv = a.inverse(prec)
    if i == 0:
        return sl3_diag(a, ainv, one)
    if i == 1:
        return sl3_diag(one, a, ainv)
    raise LoopLabError("SL3 has two simple coroots")


# ---------------------------------------------------------------------------
# SU3
# ---------------------------------------------------------------------------


def su3_form(alg, var):
    """The antidiagonal hermitian form J = antidiag(1, -1, 1), J^2 = 1."""
    one = QuadExtElement.one(alg, var)
    zero = QuadExtElement.zero(alg, var)
    return ((zero, zero, one), (zero, -one, zero), (one, zero, zero))


def su3_check(g):
    """Membership test in polynomial form: sigma(g^T) J g = J and det g = 1,
    on the stored precision window."""
    ok, _ = su3_check_detailed(g)
    return ok


def su3_check_detailed(g):
    """Returns (ok, window): the agreement window of the two defining
    identities; structural exactness is not required here."""
    if g.group != GROUP_SU3:
        return False, INF
    J = su3_form(g.alg, g.var)
    n = 3
    st = [[g.entries[j][i].sigma() for j in range(n)] for i in range(n)]
    # right-multiplying by the antidiagonal J reverses columns and negates
    # the middle one, so only one real grid product is needed
    stJ = [[row[2], -row[1], row[0]] for row in st]
    zero = QuadExtElement.zero(g.alg, g.var)
    lhs = _grid_mul(stJ, g.entries, zero)
    ok = True
    window = INF
    for i in range(n):
        for j in range(n):
            same, w = lhs[i][j].eq_window(J[i][j])
            ok = ok and same
            window = min(window, w)
    d = mat_det(g)
    one = QuadExtElement.one(g.alg, g.var)
    same, w = d.eq_window(one)
    return ok and same, min(window, w)


def su3_u_plus(u, w):
    """Upper unipotent [[1,u,w],[0,1,sigma(u)],[0,0,1]]; requires
    w + sigma(w) = u*sigma(u)."""
    defect = w + w.sigma() - u * u.sigma()
    if not defect.is_zero():
        raise ConstraintViolation("w + sigma(w) != u*sigma(u)", defect)
    one = QuadExtElement.one(u.alg, u.var)
    zero = QuadExtElement.zero(u.alg, u.var)
    return GroupElement(GROUP_SU3,
                        [[one, u, w], [zero, one, u.sigma()], [zero, zero, one]],
                        TAG_UPLUS)


def su3_u_minus(u, w):
    """Transpose shape of su3_u_plus, same constraint."""
    defect = w + w.sigma() - u * u.sigma()
    if not defect.is_zero():
        raise ConstraintViolation("w + sigma(w) != u*sigma(u)", defect)
    one = QuadExtElement.one(u.alg, u.var)
    zero = QuadExtElement.zero(u.alg, u.var)
    return GroupElement(GROUP_SU3,
                        [[one, zero, zero], [u, one, zero], [w, u.sigma(), one]],
                        TAG_UMINUS)


def su3_uplus_params(g):
    return g.entries[0][1], g.entries[0][2]


def su3_uminus_params(g):
    return g.entries[1][0], g.entries[2][0]


def su3_torus(y, prec=DEFAULT_PRECISION):
    """diag(y, y^(-1)sigma(y), sigma(y)^(-1)) for a unit y."""
    if y.is_unit() != "unit":
        raise NotAUnit("torus parameter must be a unit")
    ninv = y.norm().inverse(prec)
    sy = y.sigma()
    d2 = sy * sy * ninv       # sigma(y)/y
    d3 = y * ninv             # 1/sigma(y)
    zero = QuadExtElement.zero(y.alg, y.var)
    return GroupElement(GROUP_SU3,
                        [[y, zero, zero], [zero, d2, zero], [zero, zero, d3]],
                        TAG_TORUS)


def su3_n(y, prec=DEFAULT_PRECISION):
    """The antidiagonal element with corner y: rows (0,0,y),
    (0,-sigma(y)/y,0), (1/sigma(y),0,0)."""
    if y.is_unit() != "unit":
        raise NotAUnit("parameter must be a unit")
    ninv = y.norm().inverse(prec)
    sy = y.sigma()
    zero = QuadExtElement.zero(y.alg, y.var)
    return GroupElement(GROUP_SU3, [
        [zero, zero, y],
        [zero, -(sy * sy * ninv), zero],
        [y * ninv, zero, zero],
    ])


def su3_a(lam, prec=DEFAULT_PRECISION):
    """diag(lam, 1, 1/lam) for a sigma-fixed unit lam."""
    if isinstance(lam, QuadExtElement):
        if not lam.odd.is_zero():
            raise ConstraintViolation("parameter must be sigma-fixed", lam.odd)
        lam = lam.even
    if lam.is_unit() != "unit":
        raise NotAUnit("parameter must be a unit")
    one = QuadExtElement.one(lam.alg, lam.var)
    zero = QuadExtElement.zero(lam.alg, lam.var)
    return GroupElement(GROUP_SU3, [
        [QuadExtElement.from_series(lam), zero, zero],
        [zero, one, zero],
        [zero, zero, QuadExtElement.from_series(lam.inverse(prec))],
    ], TAG_TORUS)


def su3_named(kind, param, prec=DEFAULT_PRECISION):
    """Dispatch the named elements: a (sigma-fixed unit), b (torus), n."""
    if kind == "a":
        return su3_a(param, prec)
    if kind == "b":
        return su3_torus(param, prec)
    if kind == "n":
        return su3_n(param, prec)
    raise LoopLabError(f"unknown named element '{kind}'")
