"""Independent oracles the tests check the library against.

These deliberately avoid the code paths they validate: the unit test solves
f*g = 1 as a plain linear system over the residue field, and the alternate
elimination builds U before L.
"""

from fractions import Fraction

from looplab import GroupElement, LaurentSeries, TAG_TORUS, TAG_UMINUS, TAG_UPLUS


def _field_solve(rows, rhs, field):
    """Gaussian elimination over Q or F_p; returns a solution vector or None
    when the system is inconsistent."""
    p = field.char
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    m = [[Fraction(v) if not p else v % p for v in row] + [rhs_v]
         for row, rhs_v in zip(rows, [Fraction(v) if not p else v % p for v in rhs])]

    def inv(x):
        return pow(x, -1, p) if p else Fraction(1) / x

    pivot_cols = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        piv_inv = inv(m[r][c])
        m[r] = [(v * piv_inv) % p if p else v * piv_inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [(a - factor * b) % p if p else a - factor * b
                        for a, b in zip(m[i], m[r])]
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if m[i][n_cols]:
            return None
    x = [0] * n_cols
    for i, c in enumerate(pivot_cols):
        x[c] = m[i][n_cols]
    return x


def brute_force_is_unit(f, window=16):
    """Decide invertibility of an exact series by solving f*g = 1 for g
    supported on a bounded exponent window, coefficientwise over k.

    g is sought on [-hi, -hi + window); the product is constrained on the
    window of the same width starting at low - hi, which contains exponent 0
    whenever the support width of f is below the window width.
    """
    alg = f.alg
    field = alg.field
    if f.is_zero():
        return False
    lo, hi = f.low, f.low + len(f.coeffs) - 1
    g_exps = list(range(-hi, -hi + window))
    eq_exps = list(range(lo - hi, lo - hi + window))
    assert eq_exps[0] <= 0 <= eq_exps[-1]
    dim = alg.dim
    n_unknowns = len(g_exps) * dim
    rows = []
    rhs = []
    # one scalar equation per (product exponent, basis monomial)
    for m_exp in eq_exps:
        for out_slot in range(dim):
            row = [0] * n_unknowns
            for gi, g_exp in enumerate(g_exps):
                c = f.coeff(m_exp - g_exp)
                if not c:
                    continue
                for (i, j, k) in alg.mul_table:
                    if k != out_slot:
                        continue
                    row[gi * dim + j] += c.vec[i]
            rows.append(row)
            rhs.append(1 if (m_exp == 0 and out_slot == 0) else 0)
    return _field_solve(rows, rhs, field) is not None


def ldu_crout(x, prec):
    """The factorization computed the other way around: solve L*D*U = x
    directly for each column of L and row of U from the original entries
    (no Schur-complement updates).  Agreement with the elimination-based
    factorization witnesses uniqueness."""
    n = x.dim
    sample = x.entries[0][0]
    if isinstance(sample, LaurentSeries):
        one = LaurentSeries.one(x.alg, x.var)
        zero = LaurentSeries.zero(x.alg, x.var)
    else:
        from looplab import QuadExtElement

        one = QuadExtElement.one(x.alg, x.var)
        zero = QuadExtElement.zero(x.alg, x.var)
    e = x.entries
    lower = [[one if i == j else zero for j in range(n)] for i in range(n)]
    upper = [[one if i == j else zero for j in range(n)] for i in range(n)]
    diag = [[zero] * n for _ in range(n)]
    d = [None] * n
    for k in range(n):
        acc = e[k][k]
        for m in range(k):
            acc = acc - lower[k][m] * d[m] * upper[m][k]
        d[k] = acc
        diag[k][k] = acc
        dinv = acc.inverse(prec)
        for j in range(k + 1, n):
            acc = e[k][j]
            for m in range(k):
                acc = acc - lower[k][m] * d[m] * upper[m][j]
            upper[k][j] = dinv * acc
        for i in range(k + 1, n):
            acc = e[i][k]
            for m in range(k):
                acc = acc - lower[i][m] * d[m] * upper[m][k]
            lower[i][k] = acc * dinv
    return (
        GroupElement(x.group, lower, TAG_UMINUS),
        GroupElement(x.group, diag, TAG_TORUS),
        GroupElement(x.group, upper, TAG_UPLUS),
    )
