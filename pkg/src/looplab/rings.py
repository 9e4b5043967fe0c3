"""Exact arithmetic for the coefficient tower k -> R -> R((t)) -> R((t))[pi].

The base field k is the rationals or a prime field.  R is an Artinian local
k-algebra presented by nilpotent generators and a monomial ideal, so every
element has a unique normal form on the monomials outside the ideal.  Laurent
series over R carry an absolute precision bound plus an exactness flag, with
p-adic style combination rules.  The quadratic extension adjoins pi with
pi^2 = t and sigma(pi) = -pi (tamely ramified, characteristic != 2 only).

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import (
    ContextMismatch,
    IndeterminatePrecision,
    LoopLabError,
    NotAUnit,
)

DEFAULT_PRECISION = 32
INF = math.inf

# unit-status values returned by is_unit()
UNIT = "unit"
NONUNIT = "nonunit"
INDETERMINATE = "indeterminate"


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class BaseField:
    """The residue field k: the rationals (char 0) or the prime field F_p.

    Elements are plain ints in [0, p) for positive characteristic and
    ints/Fractions for characteristic zero.
    """

    _cache = {}

    def __new__(cls, char):
        if char in cls._cache:
            return cls._cache[char]
        if char != 0 and not _is_prime(char):
            raise LoopLabError(f"characteristic must be 0 or prime, got {char}")
        self = super().__new__(cls)
        self.char = char
        cls._cache[char] = self
        return self

    def coerce(self, x):
        if isinstance(x, str):
            if "/" in x:
                num, den = x.split("/", 1)
                x = Fraction(int(num), int(den))
            else:
                x = int(x)
        if self.char:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.char) % self.char
            return x % self.char
        return x if isinstance(x, (int, Fraction)) else Fraction(x)

    def inverse(self, x):
        if self.char:
            if x % self.char == 0:
                raise NotAUnit("division by zero in the residue field")
            return pow(x, -1, self.char)
        if x == 0:
            raise NotAUnit("division by zero in the residue field")
        return Fraction(1) / x

    def format(self, x):
        if self.char:
            return str(x % self.char)
        return str(Fraction(x))

    def __repr__(self):
        return "Q" if self.char == 0 else f"F{self.char}"


def _divisible(mono, by):
    return all(a >= b for a, b in zip(mono, by))


class ArtinLocalAlgebra:
    """A finite-dimensional local k-algebra k[eps_1..eps_m]/(monomial ideal).

    The ideal must contain a pure power of every generator, so the monomials
    outside it form a finite basis and the maximal ideal m = (eps_1..eps_m)
    is nilpotent.  An element is a unit iff its constant term is nonzero.
    """

    def __init__(self, field, gen_names, relations):
        self.field = field
        self.gen_names = tuple(gen_names)
        m = len(self.gen_names)
        if len(set(self.gen_names)) != m:
            raise LoopLabError("duplicate generator names")
        rels = {tuple(r) for r in relations}
        if any(len(r) != m for r in rels):
            raise LoopLabError("relation arity does not match generator count")
        if any(all(e == 0 for e in r) for r in rels):
            raise LoopLabError("the defining ideal contains 1")
        # a pure power of every generator must appear, otherwise the algebra
        # is not Artinian with residue field k
        self._pure_powers = []
        for i in range(m):
            powers = [r[i] for r in rels if all(e == 0 for j, e in enumerate(r) if j != i) and r[i] > 0]
            if not powers:
                raise LoopLabError(
                    f"no pure power of generator '{self.gen_names[i]}' in the ideal"
                )
            self._pure_powers.append(min(powers))
        def rel_key(r):
            live = [i for i, e in enumerate(r) if e]
            if len(live) == 1:
                return (0, live[0], r)  # pure powers first, in generator order
            return (1, sum(r), r)

        self.relations = tuple(sorted(rels, key=rel_key))
        box = itertools.product(*(range(b) for b in self._pure_powers)) if m else [()]
        basis = [mo for mo in box if not any(_divisible(mo, r) for r in rels)]
        basis.sort(key=lambda mo: (sum(mo), mo))
        self.basis = tuple(basis)
        self.index = {mo: i for i, mo in enumerate(self.basis)}
        self.dim = len(self.basis)
        # smallest e with m^e = 0: one more than the largest basis degree
        self.nilpotency = 1 + max((sum(mo) for mo in self.basis), default=0)
        # multiplication table on basis indices; products falling in the
        # ideal are dropped
        table = []
        for i, a in enumerate(self.basis):
            for j, c in enumerate(self.basis):
                prod = tuple(x + y for x, y in zip(a, c))
                k = self.index.get(prod)
                if k is not None:
                    table.append((i, j, k))
        self.mul_table = tuple(table)
        self.zero = AlgElement(self, (0,) * self.dim)
        one = [0] * self.dim
        one[0] = self.field.coerce(1)
        self.one = AlgElement(self, tuple(one))
        self._quotients = {}

    # -- constructors ------------------------------------------------------

    def element(self, coeffs):
        """Build an element from {monomial: coefficient}; monomials may be
        exponent tuples or generator-name strings like 'e' or 'e*d'."""
        vec = [0] * self.dim
        for mono, c in coeffs.items():
            if isinstance(mono, str):
                mono = self._mono_from_name(mono)
            mono = tuple(mono)
            if mono not in self.index:
                continue  # lies in the ideal: normal form drops it
            vec[self.index[mono]] = self.field.coerce(c)
        return AlgElement(self, tuple(vec))

    def scalar(self, c):
        vec = [0] * self.dim
        vec[0] = self.field.coerce(c)
        return AlgElement(self, tuple(vec))

    def gen(self, name):
        mono = tuple(1 if g == name else 0 for g in self.gen_names)
        if name not in self.gen_names:
            raise LoopLabError(f"unknown generator '{name}'")
        return self.element({mono: 1})

    def _mono_from_name(self, text):
        mono = [0] * len(self.gen_names)
        for part in text.split("*"):
            if "^" in part:
                name, _, exp = part.partition("^")
                e = int(exp)
            else:
                name, e = part, 1
            if name not in self.gen_names:
                raise LoopLabError(f"unknown generator '{name}'")
            mono[self.gen_names.index(name)] += e
        return tuple(mono)

    def format_monomial(self, mono):
        parts = []
        for name, e in zip(self.gen_names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    # -- quotients ---------------------------------------------------------

    def quotient(self, cut):
        """The quotient R/m^cut, presented by the same generators."""
        if cut >= self.nilpotency:
            return self
        if cut in self._quotients:
            return self._quotients[cut]
        kept = [r for r in self.relations if sum(r) <= cut]
        extra = [mo for mo in _degree_monomials(len(self.gen_names), cut)
                 if not any(_divisible(mo, r) for r in kept)]
        alg = ArtinLocalAlgebra(self.field, self.gen_names, list(kept) + extra)
        self._quotients[cut] = alg
        return alg

    def quotient_map(self, cut):
        return QuotientMap(self, self.quotient(cut))

    def residue_map(self):
        return self.quotient_map(1)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ArtinLocalAlgebra)
            and self.field is other.field
            and self.gen_names == other.gen_names
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field.char, self.gen_names, self.basis))

    def __repr__(self):
        from .literals import format_ring

        return format_ring(self)


def _degree_monomials(nvars, degree):
    if nvars == 0:
        return []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, nvars)
    return out


def alg_make(char, gens, extra_relations=()):
    """Construct an Artinian local algebra over Q (char 0) or F_char.

    ``gens`` is a list of (name, power) pairs: each generator eps satisfies
    eps^power = 0.  ``extra_relations`` is a list of further monomials
    (exponent tuples or 'e*d'-style strings) generating the ideal.
    """
    field = BaseField(char)
    names = [n for n, _ in gens]
    rels = []
    for i, (_, power) in enumerate(gens):
        if power < 1:
            raise LoopLabError("pure powers must be at least 1")
        rels.append(tuple(power if j == i else 0 for j in range(len(gens))))
    probe = ArtinLocalAlgebra(field, names, rels) if gens else None
    for rel in extra_relations:
        if isinstance(rel, str):
            rels.append(probe._mono_from_name(rel))
        else:
            rels.append(tuple(rel))
    return ArtinLocalAlgebra(field, names, rels)


class AlgElement:
    """An element of an Artinian local algebra in normal form."""

    __slots__ = ("alg", "vec", "nz")

    def __init__(self, alg, vec):
        self.alg = alg
        self.vec = vec
        self.nz = any(vec)

    def _check(self, other):
        if self.alg is not other.alg and self.alg != other.alg:
            raise ContextMismatch("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        p = self.alg.field.char
        if p:
            return AlgElement(self.alg, tuple((a + b) % p for a, b in zip(self.vec, other.vec)))
        return AlgElement(self.alg, tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __sub__(self, other):
        self._check(other)
        p = self.alg.field.char
        if p:
            return AlgElement(self.alg, tuple((a - b) % p for a, b in zip(self.vec, other.vec)))
        return AlgElement(self.alg, tuple(a - b for a, b in zip(self.vec, other.vec)))

    def __neg__(self):
        p = self.alg.field.char
        if p:
            return AlgElement(self.alg, tuple(-a % p for a in self.vec))
        return AlgElement(self.alg, tuple(-a for a in self.vec))

    def __mul__(self, other):
        self._check(other)
        a, b = self.vec, other.vec
        out = [0] * self.alg.dim
        for i, j, k in self.alg.mul_table:
            x = a[i]
            if x:
                y = b[j]
                if y:
                    out[k] += x * y
        p = self.alg.field.char
        if p:
            out = [v % p for v in out]
        return AlgElement(self.alg, tuple(out))

    def __bool__(self):
        return self.nz

    def __eq__(self, other):
        return (
            isinstance(other, AlgElement)
            and (self.alg is other.alg or self.alg == other.alg)
            and all(a == b for a, b in zip(self.vec, other.vec))
        )

    def __hash__(self):
        return hash(tuple(Fraction(v) for v in self.vec))

    def residue(self):
        """Image in the residue field k (the constant term)."""
        return self.vec[0]

    def is_unit(self):
        return bool(self.vec[0])

    def in_max_ideal(self):
        return not self.vec[0]

    def nilpotent_part(self):
        return self - self.alg.scalar(self.vec[0])

    def inverse(self):
        """Exact inverse of a unit: geometric series in the nilpotent part."""
        c = self.vec[0]
        if not c:
            raise NotAUnit("constant term is zero")
        cinv = self.alg.field.inverse(c)
        # self = c*(1 + n) with n nilpotent; sum the finite geometric series
        n = self.nilpotent_part().scaled(cinv)
        acc = self.alg.one
        term = self.alg.one
        for _ in range(1, self.alg.nilpotency):
            term = -(term * n)
            if not term:
                break
            acc = acc + term
        return acc.scaled(cinv)

    def scaled(self, c):
        c = self.alg.field.coerce(c)
        p = self.alg.field.char
        if p:
            return AlgElement(self.alg, tuple(v * c % p for v in self.vec))
        return AlgElement(self.alg, tuple(v * c for v in self.vec))

    def __repr__(self):
        from .literals import format_alg_element

        return format_alg_element(self)


class QuotientMap:
    """A quotient R -> R/m^cut in a square-zero chain, with its canonical
    k-linear section (the target basis is a subset of the source basis)."""

    def __init__(self, source, target):
        self.source = source
        self.target = target
        self._fwd = [target.index.get(mo) for mo in source.basis]
        self._back = [source.index[mo] for mo in target.basis]
        self.kernel_monomials = tuple(
            mo for mo, idx in zip(source.basis, self._fwd) if idx is None
        )

    def apply(self, elem):
        if elem.alg is not self.source and elem.alg != self.source:
            raise ContextMismatch("element does not live over the map's source")
        vec = [0] * self.target.dim
        for v, idx in zip(elem.vec, self._fwd):
            if idx is not None:
                vec[idx] = v
        return AlgElement(self.target, tuple(vec))

    def section(self, elem):
        if elem.alg is not self.target and elem.alg != self.target:
            raise ContextMismatch("element does not live over the map's target")
        vec = [0] * self.source.dim
        for v, idx in zip(elem.vec, self._back):
            vec[idx] = v
        return AlgElement(self.source, tuple(vec))

    def __repr__(self):
        return f"QuotientMap({self.source!r} -> {self.target!r})"


class SquareZeroChain:
    """R = R_1 -> R_2 -> ... -> R_n = k with every kernel squaring to zero."""

    def __init__(self, rings, maps):
        self.rings = tuple(rings)
        self.maps = tuple(maps)

    def __len__(self):
        return len(self.rings)

    def __repr__(self):
        return " -> ".join(repr(r) for r in self.rings)


def square_zero_filtration(alg):
    """The m-adic chain R/m^e -> R/m^(e-1) -> ... -> R/m = k.

    Each kernel m^i/m^(i+1) squares to zero since (m^i)^2 lies in m^(i+1)
    for i >= 1.
    """
    e = alg.nilpotency
    rings = [alg] + [alg.quotient(c) for c in range(e - 1, 0, -1)]
    maps = [QuotientMap(rings[i], rings[i + 1]) for i in range(len(rings) - 1)]
    return SquareZeroChain(rings, maps)


# ---------------------------------------------------------------------------
# integer convolution kernel (Kronecker substitution)
# ---------------------------------------------------------------------------


def _kron_pack(seq, w):
    """Pack an integer sequence into one big integer with w-byte slots,
    splitting positive and negative parts so each pack is unsigned."""
    if all(v >= 0 for v in seq):
        return int.from_bytes(b"".join(v.to_bytes(w, "little") for v in seq), "little")
    pos = b"".join((v if v > 0 else 0).to_bytes(w, "little") for v in seq)
    neg = b"".join((-v if v < 0 else 0).to_bytes(w, "little") for v in seq)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kron_convolve(f, g):
    """Convolution of two integer sequences by packing them into big
    integers and multiplying once; signed digits are recovered with an
    offset so each slot lands in [0, 2^B)."""
    mf = max(abs(x) for x in f)
    mg = max(abs(x) for x in g)
    n = len(f) + len(g) - 1
    if not (mf and mg):
        return [0] * n
    bound = mf * mg * min(len(f), len(g))
    B = ((bound.bit_length() + 2 + 7) // 8) * 8
    w = B // 8
    F = _kron_pack(f, w)
    G = _kron_pack(g, w)
    slot = (1 << (B - 1)).to_bytes(w, "little")
    offset = int.from_bytes(slot * n, "little")
    raw = (F * G + offset).to_bytes(w * (n + 1), "little", signed=False)
    half = 1 << (B - 1)
    return [int.from_bytes(raw[k * w:(k + 1) * w], "little") - half for k in range(n)]


def _lcm_denominator(cols):
    den = 1
    for col in cols:
        for v in col:
            d = v.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
    return den


def _int_columns(coeffs, alg):
    """Integer numerator columns per basis slot plus the cleared common
    denominator; the basis for all convolution arithmetic."""
    dim = alg.dim
    cols = [[v.vec[i] for v in coeffs] for i in range(dim)]
    if alg.field.char:
        return 1, cols
    den = _lcm_denominator(cols)
    if den != 1:
        cols = [[int(v * den) for v in col] for col in cols]
    else:
        cols = [[v if type(v) is int else int(v) for v in col] for col in cols]
    return den, cols


def _wrap_value(v, den, p):
    if p:
        return v % p
    if den == 1:
        return v
    out = Fraction(v, den)
    return out.numerator if out.denominator == 1 else out


def _convolve_packed(fpack, gpack, alg, nnz_f, nnz_g, nf, ng):
    """Convolve two packed coefficient blocks (den, columns) over the
    algebra's monomial multiplication table; returns a list of AlgElements."""
    nout = nf + ng - 1
    dim = alg.dim
    p = alg.field.char
    den_f, fcols = fpack
    den_g, gcols = gpack
    den = den_f * den_g
    zero = alg.zero

    if nnz_f * nnz_g <= 256 or min(nnz_f, nnz_g) <= 4:
        # sparse path: direct loops over integer numerators
        out = [None] * nout
        table = alg.mul_table
        f_pos = [x for x in range(nf) if any(col[x] for col in fcols)]
        g_pos = [x for x in range(ng) if any(col[x] for col in gcols)]
        for x in f_pos:
            fvec = [col[x] for col in fcols]
            for y in g_pos:
                row = out[x + y]
                if row is None:
                    row = out[x + y] = [0] * dim
                for i, j, k in table:
                    a = fvec[i]
                    if a:
                        b = gcols[j][y]
                        if b:
                            row[k] += a * b
        return [AlgElement(alg, tuple(_wrap_value(v, den, p) for v in row))
                if row is not None else zero for row in out]

    # dense path: one integer convolution per surviving basis pair
    f_live = [any(col) for col in fcols]
    g_live = [any(col) for col in gcols]
    out_cols = [None] * dim
    for i, j, k in alg.mul_table:
        if not (f_live[i] and g_live[j]):
            continue
        conv = _kron_convolve(fcols[i], gcols[j])
        tgt = out_cols[k]
        if tgt is None:
            out_cols[k] = conv
        else:
            for idx, v in enumerate(conv):
                tgt[idx] += v
    rows = []
    for x in range(nout):
        if not any(col[x] for col in out_cols if col is not None):
            rows.append(zero)
        else:
            rows.append(AlgElement(alg, tuple(
                _wrap_value(col[x], den, p) if col is not None else 0
                for col in out_cols)))
    return rows


# ---------------------------------------------------------------------------
# Laurent series
# ---------------------------------------------------------------------------


class LaurentSeries:
    """An element of R((t)) with finite lower support and absolute precision.

    Coefficients are stored densely for exponents [low, prec).  When the
    exact flag is set, all coefficients at exponents >= prec are asserted
    zero and prec is only a storage bound.  Equality is decidable only up to
    the minimum of the operands' effective precisions.
    """

    __slots__ = ("alg", "var", "low", "coeffs", "prec", "exact", "nnz", "_pack")

    def __init__(self, alg, var, low, coeffs, prec, exact):
        # normalize: strip leading zeros, and trailing zeros when exact
        coeffs = list(coeffs)
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            low += 1
        if exact:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            prec = low + len(coeffs)
            if not coeffs:
                low = prec = 0
        else:
            if not coeffs:
                low = prec
        if low > prec:
            raise LoopLabError("series low exceeds its precision")
        if len(coeffs) != prec - low:
            raise LoopLabError("coefficient window does not match [low, prec)")
        self.alg = alg
        self.var = var
        self.low = low
        self.coeffs = tuple(coeffs)
        self.prec = prec
        self.exact = exact
        self.nnz = sum(1 for c in coeffs if c.nz)
        self._pack = None

    def _packed(self):
        if self._pack is None:
            self._pack = _int_columns(self.coeffs, self.alg)
        return self._pack

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, alg, var, terms, prec=None):
        """Exact series (Laurent polynomial) from {exponent: coefficient};
        pass prec to mark the tail unknown instead."""
        coeffs = {}
        for k, c in terms.items():
            if not isinstance(c, AlgElement):
                c = alg.scalar(c)
            coeffs[k] = coeffs.get(k, alg.zero) + c
        if prec is None:
            if not coeffs:
                return cls(alg, var, 0, [], 0, True)
            lo = min(coeffs)
            hi = max(coeffs) + 1
            return cls(alg, var, lo, [coeffs.get(k, alg.zero) for k in range(lo, hi)], hi, True)
        lo = min(coeffs, default=prec)
        return cls(alg, var, lo, [coeffs.get(k, alg.zero) for k in range(lo, prec)], prec, False)

    @classmethod
    def zero(cls, alg, var):
        return cls(alg, var, 0, [], 0, True)

    @classmethod
    def one(cls, alg, var):
        return cls(alg, var, 0, [alg.one], 1, True)

    @classmethod
    def var_power(cls, alg, var, k):
        return cls(alg, var, k, [alg.one], k + 1, True)

    @classmethod
    def constant(cls, c, var):
        return cls(c.alg, var, 0, [c], 1, True)

    @classmethod
    def big_oh(cls, alg, var, prec):
        return cls(alg, var, prec, [], prec, False)

    # -- inspection ---------------------------------------------------------

    @property
    def effective_prec(self):
        return INF if self.exact else self.prec

    def coeff(self, k):
        if self.low <= k < self.low + len(self.coeffs):
            return self.coeffs[k - self.low]
        return self.alg.zero

    def support(self):
        return [self.low + i for i, c in enumerate(self.coeffs) if c]

    def is_zero(self):
        """True when every stored coefficient vanishes (a genuine zero when
        exact, zero-within-window otherwise)."""
        return self.nnz == 0

    def is_one(self):
        """True when the stored window reads exactly 1 (and nothing else)."""
        return self.coeff(0) == self.alg.one and sum(1 for c in self.coeffs if c) == 1

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise ContextMismatch(f"expected a series, got {type(other).__name__}")
        if self.var != other.var or (self.alg is not other.alg and self.alg != other.alg):
            raise ContextMismatch("series over different rings or variables")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, QuadExtElement):
            return NotImplemented
        self._check(other)
        prec = min(self.effective_prec, other.effective_prec)
        exact = self.exact and other.exact
        lo = min(self.low, other.low) if (self.coeffs or other.coeffs) else 0
        if exact:
            hi = max(self.prec, other.prec, lo)
        else:
            hi = prec
            lo = min(lo, hi)
        a_low, a_c = self.low, self.coeffs
        b_low, b_c = other.low, other.coeffs
        n_a, n_b = len(a_c), len(b_c)
        out = []
        for k in range(lo, hi):
            ia = k - a_low
            ib = k - b_low
            a = a_c[ia] if 0 <= ia < n_a else None
            b = b_c[ib] if 0 <= ib < n_b else None
            if a is None:
                out.append(b if b is not None else self.alg.zero)
            elif b is None:
                out.append(a)
            elif not a:
                out.append(b)
            elif not b:
                out.append(a)
            else:
                out.append(a + b)
        return LaurentSeries(self.alg, self.var, lo, out, hi, exact)

    def __sub__(self, other):
        if isinstance(other, QuadExtElement):
            return NotImplemented
        self._check(other)
        prec = min(self.effective_prec, other.effective_prec)
        exact = self.exact and other.exact
        lo = min(self.low, other.low) if (self.coeffs or other.coeffs) else 0
        if exact:
            hi = max(self.prec, other.prec, lo)
        else:
            hi = prec
            lo = min(lo, hi)
        a_low, a_c = self.low, self.coeffs
        b_low, b_c = other.low, other.coeffs
        n_a, n_b = len(a_c), len(b_c)
        out = []
        for k in range(lo, hi):
            ia = k - a_low
            ib = k - b_low
            a = a_c[ia] if 0 <= ia < n_a else None
            b = b_c[ib] if 0 <= ib < n_b else None
            if b is None or not b:
                out.append(a if a is not None else self.alg.zero)
            elif a is None or not a:
                out.append(-b)
            else:
                out.append(a - b)
        return LaurentSeries(self.alg, self.var, lo, out, hi, exact)

    def __neg__(self):
        return LaurentSeries(self.alg, self.var, self.low, [-c for c in self.coeffs], self.prec, self.exact)

    def __mul__(self, other):
        if isinstance(other, QuadExtElement):
            return NotImplemented
        self._check(other)
        if self.exact and self.nnz == 0:
            return self
        if other.exact and other.nnz == 0:
            return other
        prec = min(other.effective_prec + self.low, self.effective_prec + other.low)
        exact = self.exact and other.exact
        lo = self.low + other.low
        if not (self.coeffs and other.coeffs):
            # at least one operand is an O(t^k) with empty window
            return LaurentSeries(self.alg, self.var, lo, [], min(prec, lo), False) if not exact \
                else LaurentSeries.zero(self.alg, self.var)
        conv = _convolve_packed(self._packed(), other._packed(), self.alg,
                                self.nnz, other.nnz,
                                len(self.coeffs), len(other.coeffs))
        if not exact:
            conv = conv[: max(0, prec - lo)]
            return LaurentSeries(self.alg, self.var, lo, conv, min(prec, lo + len(conv)), False)
        return LaurentSeries(self.alg, self.var, lo, conv, lo + len(conv), True)

    def scaled(self, c):
        """Multiply by a ring constant."""
        if not isinstance(c, AlgElement):
            c = self.alg.scalar(c)
        return LaurentSeries(self.alg, self.var, self.low,
                             [x * c for x in self.coeffs], self.prec, self.exact)

    def shifted(self, k):
        """Multiply by var^k."""
        return LaurentSeries(self.alg, self.var, self.low + k, self.coeffs, self.prec + k, self.exact)

    def truncated(self, prec):
        """Forget all information at exponents >= prec."""
        if self.exact and self.prec <= prec:
            return self
        if not self.exact and self.prec <= prec:
            return self
        if prec <= self.low:
            return LaurentSeries(self.alg, self.var, prec, [], prec, False)
        return LaurentSeries(self.alg, self.var, self.low,
                             self.coeffs[:prec - self.low], prec, False)

    # -- comparisons ---------------------------------------------------------

    def eq_window(self, other):
        """Compare on the window both operands determine; returns
        (equal, window) where window is the exponent bound used (inf when
        both sides are exact)."""
        self._check(other)
        window = min(self.effective_prec, other.effective_prec)
        lo = min(self.low, other.low)
        hi = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        if window != INF:
            hi = min(hi, window)
        for k in range(lo, hi):
            if self.coeff(k) != other.coeff(k):
                return False, window
        return True, window

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.var == other.var
            and self.alg == other.alg
            and self.low == other.low
            and self.prec == other.prec
            and self.exact == other.exact
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.var, self.low, self.prec, self.exact, self.coeffs))

    # -- units and inversion --------------------------------------------------

    def is_unit(self):
        """'unit' iff some stored coefficient is a unit of R; 'nonunit' iff
        exact with all coefficients in m; 'indeterminate' for an inexact
        series whose known coefficients all lie in m."""
        if any(c.is_unit() for c in self.coeffs):
            return UNIT
        return NONUNIT if self.exact else INDETERMINATE

    def inverse(self, prec=DEFAULT_PRECISION):
        """Invert a unit: split off the part below the first unit coefficient
        (nilpotent, handled by a terminating geometric series) and invert the
        remainder by factoring its leading term.

        The result is exact whenever both geometric tails terminate;
        otherwise it is truncated to absolute precision ``prec``.
        """
        status = self.is_unit()
        if status == NONUNIT:
            raise NotAUnit("series has all coefficients in the maximal ideal")
        if status == INDETERMINATE:
            raise IndeterminatePrecision(
                "all known coefficients lie in the maximal ideal; raise the precision")
        n = next(self.low + i for i, c in enumerate(self.coeffs) if c.is_unit())
        an = self.coeff(n)
        an_inv = an.inverse()
        # u = sum_{i>=n} a_i t^i = a_n t^n (1 + s) with s of positive valuation
        s = LaurentSeries(self.alg, self.var, 1,
                          [self.coeffs[i] * an_inv for i in range(n - self.low + 1, len(self.coeffs))],
                          max(self.prec - n, 1), self.exact)
        e = self.alg.nilpotency
        v_width = n - self.low  # number of stored coefficients below n
        rel_target = prec + n + (e + 1) * max(v_width, 0) + 1
        geo = self._geometric_inverse(s, rel_target)
        u_inv = geo.scaled(an_inv).shifted(-n)
        if v_width > 0:
            # v has finitely many coefficients, all in m, so (u^-1 v)^e = 0
            v = LaurentSeries(self.alg, self.var, self.low,
                              self.coeffs[:v_width], n, True)
            tail = -(u_inv * v)
            acc = LaurentSeries.one(self.alg, self.var)
            term = acc
            for _ in range(1, e):
                term = term * tail
                if term.exact and term.is_zero():
                    break
                acc = acc + term
            result = acc * u_inv
        else:
            result = u_inv
        if not result.exact:
            result = result.truncated(min(result.prec, prec))
        return result

    def _geometric_inverse(self, s, target):
        """(1 + s)^(-1) to absolute precision ``target`` (relative to
        exponent 0); exact when s is zero or has all coefficients in m."""
        one = LaurentSeries.one(self.alg, self.var)
        if s.is_zero():
            return one if s.exact else one.truncated(min(target, s.prec))
        if all(c.in_max_ideal() for c in s.coeffs) and s.exact:
            # nilpotent tail: coefficients of s^j lie in m^j
            acc = one
            term = one
            for _ in range(1, self.alg.nilpotency):
                term = -(term * s)
                if term.exact and term.is_zero():
                    break
                acc = acc + term
            return acc
        # the geometric series sum_j (-s)^j, computed coefficientwise by the
        # equivalent recurrence g_0 = 1, g_m = -sum_j s_j g_(m-j)
        alg = self.alg
        q = min(target, s.effective_prec)
        if q == INF:
            q = target
        q = int(q)
        s_terms = [(s.low + i, c) for i, c in enumerate(s.coeffs) if c]
        g = [alg.one] + [alg.zero] * (max(q, 1) - 1)
        for m in range(1, q):
            acc = None
            for j, c in s_terms:
                if j > m:
                    break
                prev = g[m - j]
                if prev:
                    term = c * prev
                    acc = term if acc is None else acc + term
            if acc is not None:
                g[m] = -acc
        return LaurentSeries(alg, self.var, 0, g, q, False)

    # -- reduction -----------------------------------------------------------

    def reduce(self, qmap):
        return LaurentSeries(qmap.target, self.var, self.low,
                             [qmap.apply(c) for c in self.coeffs], self.prec, self.exact)

    def lift(self, qmap):
        """Canonical coefficientwise section along a quotient map."""
        return LaurentSeries(qmap.source, self.var, self.low,
                             [qmap.section(c) for c in self.coeffs], self.prec, self.exact)

    def __repr__(self):
        from .literals import format_series

        return format_series(self)


# ---------------------------------------------------------------------------
# spec-level operation wrappers
# ---------------------------------------------------------------------------


def series_arith(f, g, op):
    """Dispatch add | sub | mul on two series with the standard precision
    combination rules."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise LoopLabError(f"unknown operation '{op}'")


def is_unit_series(f):
    return f.is_unit()


def invert_series(f, target_prec=DEFAULT_PRECISION):
    return f.inverse(target_prec)


def reduce_series(f, qmap):
    return f.reduce(qmap)


# ---------------------------------------------------------------------------
# ramified quadratic extension
# ---------------------------------------------------------------------------


class QuadExtElement:
    """even + odd*pi with pi^2 = t and sigma(even + odd*pi) = even - odd*pi.

    Requires characteristic != 2: sigma-splitting and the constants used by
    the unitary-group machinery need 2 invertible.
    """

    __slots__ = ("even", "odd")

    def __init__(self, even, odd):
        if even.var != odd.var or even.alg != odd.alg:
            raise ContextMismatch("components over different rings or variables")
        if even.alg.field.char == 2:
            raise LoopLabError("the quadratic extension requires characteristic != 2")
        self.even = even
        self.odd = odd

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_series(cls, even):
        return cls(even, LaurentSeries.zero(even.alg, even.var))

    @classmethod
    def pi(cls, alg, var):
        return cls(LaurentSeries.zero(alg, var), LaurentSeries.one(alg, var))

    @classmethod
    def zero(cls, alg, var):
        z = LaurentSeries.zero(alg, var)
        return cls(z, z)

    @classmethod
    def one(cls, alg, var):
        return cls(LaurentSeries.one(alg, var), LaurentSeries.zero(alg, var))

    @property
    def alg(self):
        return self.even.alg

    @property
    def var(self):
        return self.even.var

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            other = QuadExtElement.from_series(other)
        return QuadExtElement(self.even + other.even, self.odd + other.odd)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            other = QuadExtElement.from_series(other)
        return QuadExtElement(self.even - other.even, self.odd - other.odd)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QuadExtElement(-self.even, -self.odd)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return QuadExtElement(self.even * other, self.odd * other)
        # (a + b pi)(c + d pi) = (ac + t bd) + (ad + bc) pi
        a, b = self.even, self.odd
        c, d = other.even, other.odd
        return QuadExtElement(a * c + (b * d).shifted(1), a * d + b * c)

    def __rmul__(self, other):
        if isinstance(other, LaurentSeries):
            return QuadExtElement(self.even * other, self.odd * other)
        return NotImplemented

    def scaled(self, c):
        return QuadExtElement(self.even.scaled(c), self.odd.scaled(c))

    def sigma(self):
        return QuadExtElement(self.even, -self.odd)

    def trace(self):
        """x + sigma(x) as an element of the sigma-fixed subring R((t))."""
        return self.even + self.even

    def norm(self):
        """x * sigma(x) = even^2 - t*odd^2 in R((t))."""
        return self.even * self.even - (self.odd * self.odd).shifted(1)

    def is_unit(self):
        return self.norm().is_unit()

    def inverse(self, prec=DEFAULT_PRECISION):
        return self.sigma() * self.norm().inverse(prec)

    # -- predicates ---------------------------------------------------------------

    def is_zero(self):
        return self.even.is_zero() and self.odd.is_zero()

    def is_one(self):
        return self.even.is_one() and self.odd.is_zero()

    def eq_window(self, other):
        ok_e, w_e = self.even.eq_window(other.even)
        ok_o, w_o = self.odd.eq_window(other.odd)
        return ok_e and ok_o, min(w_e, w_o)

    def __eq__(self, other):
        if not isinstance(other, QuadExtElement):
            return NotImplemented
        return self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    @property
    def effective_prec(self):
        return min(self.even.effective_prec, self.odd.effective_prec)

    @property
    def exact(self):
        return self.even.exact and self.odd.exact

    def truncated(self, prec):
        return QuadExtElement(self.even.truncated(prec), self.odd.truncated(prec))

    def reduce(self, qmap):
        return QuadExtElement(self.even.reduce(qmap), self.odd.reduce(qmap))

    def lift(self, qmap):
        return QuadExtElement(self.even.lift(qmap), self.odd.lift(qmap))

    def __repr__(self):
        from .literals import format_quad

        return format_quad(self)


def quad_ops(x, which, other=None, prec=DEFAULT_PRECISION):
    """Dispatch sigma | trace | norm | mul | inv on quadratic-extension
    elements; trace and norm land in the sigma-fixed subring."""
    if which == "sigma":
        return x.sigma()
    if which == "trace":
        return x.trace()
    if which == "norm":
        return x.norm()
    if which == "mul":
        return x * other
    if which == "inv":
        return x.inverse(prec)
    raise LoopLabError(f"unknown operation '{which}'")
