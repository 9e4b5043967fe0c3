"""Big-cell membership, unique L*D*U factorization, and the field-level
translate search.

Over a local ring context a matrix lies in the big cell iff all of its
leading principal minors are units; the factorization is then unique and is
produced by principal-minor Gaussian elimination.  A general element is
moved into the big cell by one of finitely many exact translates over
K = k((t)): the coefficient kernel of R((t)) -> k((t)) is nilpotent, so
minors are units exactly when their residues over K are nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndeterminatePrecision, InternalConsistencyError, NotInBigCell
from .groups import (
    GROUP_SL2,
    GROUP_SL3,
    GROUP_SU3,
    TAG_TORUS,
    TAG_UMINUS,
    TAG_UPLUS,
    GroupElement,
    identity,
    mat_inv,
    mat_mul,
    su3_check_detailed,
    su3_n,
    su3_u_minus,
    su3_u_plus,
    su3_uminus_params,
    su3_uplus_params,
)
from .rings import (
    DEFAULT_PRECISION,
    INDETERMINATE,
    NONUNIT,
    UNIT,
    LaurentSeries,
    QuadExtElement,
)


@dataclass(frozen=True)
class BigCellFactors:
    """The unique lower-unipotent, torus, upper-unipotent factors."""

    lower: GroupElement
    torus: GroupElement
    upper: GroupElement

    def recompose(self):
        return mat_mul(mat_mul(self.lower, self.torus), self.upper)

    def factors(self):
        return [self.lower, self.torus, self.upper]


def leading_minors(x):
    """The leading principal minors of a 2x2 or 3x3 matrix."""
    e = x.entries
    out = [e[0][0]]
    if x.dim >= 2:
        out.append(e[0][0] * e[1][1] - e[0][1] * e[1][0])
    if x.dim == 3:
        out.append(
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )
    return out


def minor_unit_status(x):
    """Combined unit status of the leading principal minors: 'unit' when all
    are units, 'nonunit' when some minor is known not to be one,
    'indeterminate' otherwise; also returns the index of the first
    offending minor (1-based)."""
    saw_indeterminate = None
    for i, m in enumerate(leading_minors(x)):
        st = m.is_unit()
        if st == NONUNIT:
            return NONUNIT, i + 1
        if st == INDETERMINATE and saw_indeterminate is None:
            saw_indeterminate = i + 1
    if saw_indeterminate is not None:
        return INDETERMINATE, saw_indeterminate
    return UNIT, 0


def ldu_decompose(x, prec=DEFAULT_PRECISION):
    """Factor x = L * D * U with L lower unipotent, D diagonal, U upper
    unipotent, by Gaussian elimination on unit pivots.

    Raises NotInBigCell when a leading principal minor is a non-unit and
    IndeterminatePrecision when a minor's unit status cannot be decided at
    the current precision.  For SU3 input the three factors again satisfy
    the unitary condition (a consequence of uniqueness; callers may check).
    """
    status, idx = minor_unit_status(x)
    if status == NONUNIT:
        raise NotInBigCell(idx)
    if status == INDETERMINATE:
        raise IndeterminatePrecision(
            f"leading principal minor {idx} is undecidable at the current precision")
    n = x.dim
    if x.group == GROUP_SU3:
        zero = QuadExtElement.zero(x.alg, x.var)
        one = QuadExtElement.one(x.alg, x.var)
    else:
        zero = LaurentSeries.zero(x.alg, x.var)
        one = LaurentSeries.one(x.alg, x.var)
    M = [list(row) for row in x.entries]
    L = [[one if i == j else zero for j in range(n)] for i in range(n)]
    U = [[one if i == j else zero for j in range(n)] for i in range(n)]
    D = [[zero] * n for _ in range(n)]
    for k in range(n):
        p = M[k][k]
        pinv = p.inverse(prec)
        D[k][k] = p
        for i in range(k + 1, n):
            L[i][k] = M[i][k] * pinv
        for j in range(k + 1, n):
            U[k][j] = pinv * M[k][j]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = M[i][j] - M[i][k] * pinv * M[k][j]
    g = x.group
    lower = GroupElement(g, L, TAG_UMINUS)
    torus = GroupElement(g, D, TAG_TORUS)
    upper = GroupElement(g, U, TAG_UPLUS)
    if g == GROUP_SU3:
        # uniqueness makes each factor sigma-theta-fixed, so the unipotent
        # parts are of the parametrized form; rebuild them structurally
        # after checking agreement, and check the torus factor directly
        rebuilt_l = su3_u_minus(*su3_uminus_params(lower))
        rebuilt_u = su3_u_plus(*su3_uplus_params(upper))
        ok_l, _ = lower.eq_window(rebuilt_l)
        ok_u, _ = upper.eq_window(rebuilt_u)
        ok_t, _ = su3_check_detailed(torus)
        if not (ok_l and ok_u and ok_t):
            raise InternalConsistencyError(
                "factors of a unitary element fail the unitary condition")
        lower, upper = rebuilt_l, rebuilt_u
    return BigCellFactors(lower=lower, torus=torus, upper=upper)


def _sl3_weyl_candidates(alg, var):
    one = LaurentSeries.one(alg, var)
    zero = LaurentSeries.zero(alg, var)

    def refl(i):
        # the 2x2 block [[0,-1],[1,0]] embedded at rows/cols (i, i+1)
        e = [[one if r == c else zero for c in range(3)] for r in range(3)]
        e[i][i] = zero
        e[i + 1][i + 1] = zero
        e[i][i + 1] = -one
        e[i + 1][i] = one
        return GroupElement(GROUP_SL3, e)

    s1, s2 = refl(0), refl(1)
    return [
        identity(GROUP_SL3, alg, var),
        s1,
        s2,
        mat_mul(s1, s2),
        mat_mul(s2, s1),
        mat_mul(s1, mat_mul(s2, s1)),
    ]


def translate_candidates(group, alg, var):
    """The fixed, deterministically ordered list of relative-Weyl
    representatives tried as translates; identity first.  All entries are
    exact constants, so the candidates are elements over K = k((t))."""
    if group == GROUP_SL2:
        one = LaurentSeries.one(alg, var)
        zero = LaurentSeries.zero(alg, var)
        w = GroupElement(GROUP_SL2, [[zero, -one], [one, zero]])
        return [identity(GROUP_SL2, alg, var), w]
    if group == GROUP_SU3:
        return [identity(GROUP_SU3, alg, var), su3_n(QuadExtElement.one(alg, var))]
    if group == GROUP_SL3:
        return _sl3_weyl_candidates(alg, var)
    raise InternalConsistencyError(f"no translate table for group '{group}'")


def translate_to_big_cell(x, prec=DEFAULT_PRECISION):
    """Find g with exact entries over K such that y = g^(-1) x has unit
    leading principal minors, i.e. x = g*y with y in the big cell.

    The search reduces x along R -> k and tests the candidates there;
    the kernel is nilpotent, so unit detection over R((t)) and over K agree.
    """
    qmap = x.alg.residue_map()
    xbar = x.reduce(qmap)
    saw_indeterminate = False
    for g in translate_candidates(x.group, xbar.alg, xbar.var):
        cand = mat_mul(mat_inv(g), xbar)
        status, _ = minor_unit_status(cand)
        if status == UNIT:
            g_lifted = g.lift(qmap)
            return g_lifted, mat_mul(mat_inv(g_lifted), x)
        if status == INDETERMINATE:
            saw_indeterminate = True
    if saw_indeterminate:
        raise IndeterminatePrecision(
            "translate search undecidable at the current precision")
    raise InternalConsistencyError(
        "no translate moves the element into the big cell; "
        "this cannot happen for a genuine group element")
