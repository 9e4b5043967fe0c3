"""Seeded random generation of ring and group elements for the identity
suites; everything is driven by an explicit random.Random so runs are
reproducible from the recorded seed."""

from __future__ import annotations

from fractions import Fraction

from .groups import (
    GROUP_SL2,
    GROUP_SU3,
    identity,
    mat_mul,
    sl2_torus,
    sl2_uminus,
    sl2_uplus,
    sl2_weyl,
    su3_n,
    su3_torus,
    su3_u_minus,
    su3_u_plus,
)
from .rings import DEFAULT_PRECISION, UNIT, LaurentSeries, QuadExtElement


def random_field_element(rng, field, nonzero=False):
    if field.char:
        lo = 1 if nonzero else 0
        return rng.randrange(lo, field.char)
    num = rng.randint(-3, 3)
    while nonzero and num == 0:
        num = rng.randint(-3, 3)
    return Fraction(num, rng.choice([1, 1, 2]))


def random_alg_element(rng, alg, in_max_ideal=False, unit=False):
    vec = [random_field_element(rng, alg.field) for _ in range(alg.dim)]
    if in_max_ideal:
        vec[0] = 0
    if unit:
        vec[0] = random_field_element(rng, alg.field, nonzero=True)
    return alg.element(dict(zip(alg.basis, vec)))


def random_series(rng, alg, var, lo=-3, hi=3, density=0.7, in_max_ideal=False):
    """An exact Laurent polynomial with support in [lo, hi]."""
    terms = {}
    for k in range(lo, hi + 1):
        if rng.random() < density:
            terms[k] = random_alg_element(rng, alg, in_max_ideal=in_max_ideal)
    return LaurentSeries.from_terms(alg, var, terms)


def random_unit_series(rng, alg, var, lo=-3, hi=3, mixed=True):
    """A random unit: some coefficient is forced to be a unit of the ring.
    With mixed=True the unit may sit above nilpotent lower coefficients;
    otherwise it is placed at the lowest exponent."""
    f = random_series(rng, alg, var, lo, hi, in_max_ideal=mixed)
    pos = rng.randint(lo, hi) if mixed else lo
    terms = {f.low + i: c for i, c in enumerate(f.coeffs)}
    terms[pos] = random_alg_element(rng, alg, unit=True)
    out = LaurentSeries.from_terms(alg, var, terms)
    if not mixed:
        # make every coefficient below the unit vanish
        out = LaurentSeries.from_terms(alg, var, {k: c for k, c in terms.items() if k >= pos})
    assert out.is_unit() == UNIT
    return out


def random_quad(rng, alg, var, lo=-2, hi=2, in_max_ideal=False):
    return QuadExtElement(
        random_series(rng, alg, var, lo, hi, in_max_ideal=in_max_ideal),
        random_series(rng, alg, var, lo, hi, in_max_ideal=in_max_ideal),
    )


def random_quad_unit(rng, alg, var, lo=-2, hi=2):
    while True:
        y = random_quad(rng, alg, var, lo, hi)
        if y.is_unit() == UNIT:
            return y


def random_trace_zero_quad_unit(rng, alg, var, lo=-2, hi=2):
    """A unit with zero trace: purely odd, with a unit odd part."""
    return QuadExtElement(
        LaurentSeries.zero(alg, var),
        random_unit_series(rng, alg, var, lo, hi),
    )


def random_su3_uplus_params(rng, alg, var, lo=-1, hi=1):
    """A valid (u, w) pair: w = u*sigma(u)/2 + (odd part), so the constraint
    w + sigma(w) = u*sigma(u) holds by construction."""
    u = random_quad(rng, alg, var, lo, hi)
    half = alg.field.coerce("1/2")
    odd = QuadExtElement(LaurentSeries.zero(alg, var),
                         random_series(rng, alg, var, lo, hi))
    return u, (u * u.sigma()).scaled(half) + odd


def random_word(rng, group, alg, var, length, prec=DEFAULT_PRECISION):
    """A random product of generators: unipotents, torus elements, and the
    fixed Weyl representative."""
    word = identity(group, alg, var)
    for _ in range(length):
        if group == GROUP_SL2:
            kind = rng.randrange(4)
            if kind == 0:
                g = sl2_uplus(random_series(rng, alg, var, -2, 2))
            elif kind == 1:
                g = sl2_uminus(random_series(rng, alg, var, -2, 2))
            elif kind == 2:
                g = sl2_torus(random_unit_series(rng, alg, var, -2, 2), prec)
            else:
                g = sl2_weyl(alg, var)
        else:
            kind = rng.randrange(4)
            if kind == 0:
                g = su3_u_plus(*random_su3_uplus_params(rng, alg, var))
            elif kind == 1:
                g = su3_u_minus(*random_su3_uplus_params(rng, alg, var))
            elif kind == 2:
                g = su3_torus(random_quad_unit(rng, alg, var, -1, 1), prec)
            else:
                g = su3_n(QuadExtElement.one(alg, var))
        word = mat_mul(word, g)
    return word
