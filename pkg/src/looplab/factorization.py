"""Torus-into-unipotents factorization algorithms and end-to-end
factorization certificates.

The building blocks: the six-matrix identity writing diag(a, 1/a) as a
product of elementary SL2 matrices (valid over any ring), its Weil-restricted
form over R((u)) with u^e = t, the three-matrix identity for the antidiagonal
SU3 elements n_y, the square-zero torus identity, and the induction that
walks the m-adic square-zero chain of an Artinian local coefficient ring.
Every factorization is returned as an ordered list of tagged unipotent
matrices whose product recomposes the target, and the full pipeline emits a
self-contained, independently re-checkable certificate.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

from .bigcell import ldu_decompose, translate_to_big_cell
from .errors import (
    ConstraintViolation,
    IndeterminatePrecision,
    InternalConsistencyError,
    LoopLabError,
    NotAUnit,
    SchemaError,
)
from .groups import (
    GROUP_SL2,
    GROUP_SU3,
    TAG_GENERIC,
    TAG_UMINUS,
    TAG_UPLUS,
    GroupElement,
    identity,
    mat_det,
    mat_inv,
    mat_mul,
    mat_word,
    shape_defects,
    sl2_uminus,
    sl2_uplus,
    su3_check_detailed,
    su3_torus,
    su3_u_minus,
    su3_u_plus,
    su3_uminus_params,
    su3_uplus_params,
)
from .rings import (
    DEFAULT_PRECISION,
    INF,
    UNIT,
    LaurentSeries,
    QuadExtElement,
    square_zero_filtration,
)

SCHEMA = "loop-factorization-certificate/1"

GROUP_RES_SL2 = "res_sl2"

# extra absolute precision used internally by the pipeline so that the
# recomposed product still agrees with the input on the stated window
PIPELINE_PAD_FACTOR = 2


# ---------------------------------------------------------------------------
# SL2: the six-matrix identity
# ---------------------------------------------------------------------------


def factor_sl2_torus(a, prec=DEFAULT_PRECISION):
    """diag(a, 1/a) as the fixed product of six elementary matrices, valid
    over any ring in which a is a unit."""
    status = a.is_unit()
    if status != UNIT:
        raise (NotAUnit if status == "nonunit" else IndeterminatePrecision)(
            f"torus parameter is {status}")
    ainv = a.inverse(prec)
    one = LaurentSeries.one(a.alg, a.var)
    mats = [
        sl2_uplus(a),
        sl2_uminus(-ainv),
        sl2_uplus(-one),
        sl2_uminus(one),
        sl2_uplus(-one),
        sl2_uminus(-a),
    ]
    return [m.with_note(f"sl2 torus identity {i + 1}/6") for i, m in enumerate(mats)]


def factor_res_sl2_torus(a, ext_degree, prec=DEFAULT_PRECISION):
    """The same identity over R((u)) viewed along the tame extension
    u^ext_degree = t; only the bookkeeping differs."""
    char = a.alg.field.char
    if ext_degree < 1:
        raise LoopLabError("extension degree must be positive")
    if char and math.gcd(ext_degree, char) != 1:
        raise LoopLabError(
            f"wild extension: degree {ext_degree} is divisible by the characteristic {char}")
    note = f"restricted sl2 torus identity over {a.var} with {a.var}^{ext_degree} = t"
    return [m.with_note(f"{note} ({i + 1}/6)")
            for i, m in enumerate(factor_sl2_torus(a, prec))]


# ---------------------------------------------------------------------------
# SU3: field-level identities
# ---------------------------------------------------------------------------


def su3_n_factor(y, x, prec=DEFAULT_PRECISION):
    """The antidiagonal element with corner y as a product U+ * U- * U+,
    for any x with trace(y) = x*sigma(x)."""
    if y.is_unit() != UNIT:
        raise NotAUnit("parameter must be a unit")
    defect = y.trace() - x.norm()
    if not defect.is_zero():
        raise ConstraintViolation("trace(y) != x*sigma(x)", defect)
    ninv = y.norm().inverse(prec)
    y_inv = y.sigma() * ninv
    sy_inv = y * ninv
    f1 = su3_u_plus(x, y)
    f2 = su3_u_minus(-(x.sigma() * sy_inv), sy_inv)
    f3 = su3_u_plus(y.sigma() * x * y_inv, y)
    return [
        f1.with_note("n-element identity 1/3"),
        f2.with_note("n-element identity 2/3"),
        f3.with_note("n-element identity 3/3"),
    ]


def su3_a_factor(lam, prec=DEFAULT_PRECISION):
    """diag(lam, 1, 1/lam) for a sigma-fixed unit lam, via two trace-zero
    n-elements with corners pi*lam and -pi."""
    if isinstance(lam, QuadExtElement):
        if not lam.odd.is_zero():
            raise ConstraintViolation("parameter must be sigma-fixed", lam.odd)
        lam = lam.even
    if lam.is_unit() != UNIT:
        raise NotAUnit("parameter must be a unit")
    pi = QuadExtElement.pi(lam.alg, lam.var)
    zero = QuadExtElement.zero(lam.alg, lam.var)
    first = su3_n_factor(pi * lam, zero, prec)
    second = su3_n_factor(-pi, zero, prec)
    return [m.with_note(f"a-element block: {m.note}") for m in first + second]


def _n_element_factors(y, prec):
    """Factor the antidiagonal element with corner y: directly when
    trace(y) = 0, otherwise through y*trace(y) and an a-element."""
    tr = y.trace()
    if tr.is_zero():
        return su3_n_factor(y, QuadExtElement.zero(y.alg, y.var), prec)
    if tr.is_unit() == UNIT:
        x = QuadExtElement.from_series(tr)
        return su3_n_factor(y * tr, x, prec) + su3_a_factor(tr, prec)
    raise ConstraintViolation(
        "trace(y) is neither zero nor a unit; use factor_su3_torus_artinian "
        "for Artinian coefficient rings", tr)


def su3_b_factor(y, prec=DEFAULT_PRECISION):
    """The torus element diag(y, sigma(y)/y, 1/sigma(y)) as a product of
    unipotents: the n-element with corner y followed by the one with
    corner 1."""
    if y.is_unit() != UNIT:
        raise NotAUnit("torus parameter must be a unit")
    one = QuadExtElement.one(y.alg, y.var)
    closing = [m.with_note(f"closing n_1 block: {m.note}")
               for m in _n_element_factors(one, prec)]
    return _n_element_factors(y, prec) + closing


# ---------------------------------------------------------------------------
# SU3: square-zero identity and lifting
# ---------------------------------------------------------------------------


def squarezero_target(x):
    """diag(1+x, 1-x+sigma(x), 1-sigma(x)) as a group element."""
    one = QuadExtElement.one(x.alg, x.var)
    zero = QuadExtElement.zero(x.alg, x.var)
    sx = x.sigma()
    return GroupElement(GROUP_SU3, [
        [one + x, zero, zero],
        [zero, one - x + sx, zero],
        [zero, zero, one - sx],
    ], "T")


def su3_squarezero_torus_factor(x, prec=DEFAULT_PRECISION):
    """Factor diag(1+x, 1-x+sigma(x), 1-sigma(x)) for x with coefficients in
    a square-zero ideal.

    The three-matrix identity U+(x,0) * U-(1,1,z) * U+(-x,0) with
    z + sigma(z) = 1 produces a lower-triangular matrix with the target
    diagonal; a fourth corrective factor, the inverse of its unipotent lower
    part conjugated into place, lands in U- and makes the product exactly
    diagonal.  Everything is division-free, so exact inputs stay exact.
    """
    sq = x * x
    if not sq.is_zero():
        raise ConstraintViolation("x^2 != 0: not a square-zero parameter", sq)
    nr = x.norm()
    if not nr.is_zero():
        raise ConstraintViolation("x*sigma(x) != 0: not a square-zero parameter", nr)
    alg, var = x.alg, x.var
    zero = QuadExtElement.zero(alg, var)
    one = QuadExtElement.one(alg, var)
    half = one.scaled(alg.field.coerce("1/2"))
    a = su3_u_plus(x, zero)
    b = su3_u_minus(one, half)  # z = 1/2 satisfies z + sigma(z) = 1
    c = su3_u_plus(-x, zero)
    target = squarezero_target(x)
    partial = mat_mul(mat_mul(a, b), c)
    corr = mat_mul(mat_inv(partial), target)
    u, w = su3_uminus_params(corr)
    rebuilt = su3_u_minus(u, w)  # re-checks the unipotent constraint
    same, _ = corr.eq_window(rebuilt)
    if not same:
        raise InternalConsistencyError(
            "square-zero corrective factor is not lower unipotent")
    corr = rebuilt
    return [
        a.with_note("square-zero identity 1/4: U+(x, 0)"),
        b.with_note("square-zero identity 2/4: U-(1, 1/2)"),
        c.with_note("square-zero identity 3/4: U+(-x, 0)"),
        corr.with_note("square-zero identity 4/4: corrective U-"),
    ]


def _lift_params(u, w, qmap):
    """Lift unipotent parameters along the canonical section so that the
    constraint w + sigma(w) = u*sigma(u) holds exactly upstairs."""
    half = u.alg.field.coerce("1/2")
    ut = u.lift(qmap)
    v = w - (u * u.sigma()).scaled(half)
    if not v.even.is_zero():
        raise ConstraintViolation(
            "factor violates w + sigma(w) = u*sigma(u); cannot lift", v.even)
    # v is sigma-odd up to its window; force the lift to be exactly odd so
    # the lifted constraint holds structurally
    vt = QuadExtElement(LaurentSeries.zero(u.alg, u.var), v.odd).lift(qmap)
    wt = (ut * ut.sigma()).scaled(half) + vt
    return ut, wt


def lift_factorization(factors, qmap, prec=DEFAULT_PRECISION):
    """Lift tagged unipotent factors over R0((t)) to R((t)) along a
    square-zero quotient q: R -> R0, preserving the subgroup constraints
    exactly and reducing back to the inputs."""
    out = []
    for f in factors:
        if f.group == GROUP_SU3:
            if f.subgroup == TAG_UPLUS:
                u, w = su3_uplus_params(f)
                lifted = su3_u_plus(*_lift_params(u, w, qmap))
            elif f.subgroup == TAG_UMINUS:
                u, w = su3_uminus_params(f)
                lifted = su3_u_minus(*_lift_params(u, w, qmap))
            else:
                raise LoopLabError("factor without a unipotent subgroup tag")
        else:
            if f.subgroup == TAG_UPLUS:
                lifted = sl2_uplus(f.entries[0][1].lift(qmap))
            elif f.subgroup == TAG_UMINUS:
                lifted = sl2_uminus(f.entries[1][0].lift(qmap))
            else:
                raise LoopLabError("factor without a unipotent subgroup tag")
        out.append(lifted.with_note(f.note))
    return out


def factor_su3_torus_artinian(y, prec=DEFAULT_PRECISION):
    """Factor the torus element of a unit y over R((t)) for Artinian local R.

    Walk the m-adic square-zero chain from the residue field up: factor over
    k((t)) at the bottom, then at each square-zero step lift the factor list,
    split the defect of the lifted product against the target torus element
    in the big cell (its minors are 1 mod the step's ideal, so this always
    succeeds), factor the diagonal part by the square-zero identity, and
    keep the unipotent boundary parts as extra factors.
    """
    if y.is_unit() != UNIT:
        raise NotAUnit("torus parameter must be a unit")
    chain = square_zero_filtration(y.alg)
    ys = [y]
    for q in chain.maps:
        ys.append(ys[-1].reduce(q))
    factors = [f.with_note(f"field level: {f.note}")
               for f in su3_b_factor(ys[-1], prec)]
    for level in range(len(chain.maps) - 1, -1, -1):
        q = chain.maps[level]
        factors = lift_factorization(factors, q, prec)
        h = su3_torus(ys[level], prec)
        lifted_product = mat_word(factors)
        defect = mat_mul(mat_inv(lifted_product), h)
        fac = ldu_decompose(defect, prec)
        one = QuadExtElement.one(fac.torus.alg, fac.torus.var)
        x_d = fac.torus.entries[0][0] - one
        block = su3_squarezero_torus_factor(x_d, prec)
        same, _ = fac.torus.eq_window(squarezero_target(x_d))
        if not same:
            raise InternalConsistencyError(
                "defect diagonal does not have the square-zero torus shape")
        step = len(chain.maps) - level
        factors = (
            factors
            + [fac.lower.with_note(f"square-zero step {step}: boundary U-")]
            + [m.with_note(f"square-zero step {step}: {m.note}") for m in block]
            + [fac.upper.with_note(f"square-zero step {step}: boundary U+")]
        )
    return factors


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertFactor:
    """One tagged factor of a certificate."""

    tag: str
    element: GroupElement
    note: str


@dataclass(frozen=True)
class FactorizationCertificate:
    """A self-contained record of input = translate * (product of factors),
    re-checkable without trusting the producer."""

    ring: object
    variable: str
    precision: int
    group: str
    input: GroupElement
    translate: GroupElement
    factors: tuple
    ext_degree: int = 0

    def matrix_group(self):
        return GROUP_SL2 if self.group == GROUP_RES_SL2 else self.group

    def document(self):
        """The canonical dictionary form, including the digest."""
        from .literals import format_entry, format_ring

        def mat(g):
            return [[format_entry(x) for x in row] for row in g.entries]

        doc = {
            "schema": SCHEMA,
            "ring": format_ring(self.ring),
            "variable": self.variable,
            "precision": self.precision,
            "group": self.group,
            "ext_degree": self.ext_degree,
            "input": mat(self.input),
            "translate": mat(self.translate),
            "factors": [
                {"tag": f.tag, "matrix": mat(f.element), "note": f.note}
                for f in self.factors
            ],
        }
        doc["digest"] = certificate_digest(doc)
        return doc

    def to_text(self):
        return json.dumps(self.document(), sort_keys=True, indent=1) + "\n"


def certificate_digest(doc):
    payload = {k: v for k, v in doc.items() if k != "digest"}
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def make_certificate(ring, variable, precision, group, input_elt, translate,
                     factors, ext_degree=0):
    return FactorizationCertificate(
        ring=ring,
        variable=variable,
        precision=precision,
        group=group,
        input=input_elt,
        translate=translate,
        factors=tuple(CertFactor(f.subgroup, f, f.note) for f in factors),
        ext_degree=ext_degree,
    )


def certificate_from_document(doc):
    """Re-parse a certificate document into fresh objects; raises SchemaError
    on malformed input."""
    from .literals import parse_entry, parse_ring

    if not isinstance(doc, dict):
        raise SchemaError("certificate must be a JSON object")
    required = {"schema", "ring", "variable", "precision", "group",
                "ext_degree", "input", "translate", "factors", "digest"}
    missing = required - set(doc)
    if missing:
        raise SchemaError(f"missing fields: {sorted(missing)}")
    if doc["schema"] != SCHEMA:
        raise SchemaError(f"unsupported schema '{doc['schema']}', expected '{SCHEMA}'")
    if not isinstance(doc["precision"], int) or doc["precision"] < 4:
        raise SchemaError("precision must be an integer >= 4")
    group = doc["group"]
    if group not in (GROUP_SL2, GROUP_SU3, GROUP_RES_SL2):
        raise SchemaError(f"unknown group '{group}'")
    try:
        ring = parse_ring(doc["ring"])
    except LoopLabError as e:
        raise SchemaError(f"bad ring descriptor: {e}") from e
    var = doc["variable"]
    mgroup = GROUP_SL2 if group == GROUP_RES_SL2 else group
    quad = mgroup == GROUP_SU3
    dim = 2 if mgroup == GROUP_SL2 else 3

    def mat(cells, what):
        if (not isinstance(cells, list) or len(cells) != dim
                or any(not isinstance(r, list) or len(r) != dim for r in cells)):
            raise SchemaError(f"{what}: expected a {dim}x{dim} matrix of strings")
        try:
            entries = [[parse_entry(c, ring, var, quad) for c in row] for row in cells]
        except LoopLabError as e:
            raise SchemaError(f"{what}: {e}") from e
        return GroupElement(mgroup, entries)

    factors = []
    for i, f in enumerate(doc["factors"]):
        if not isinstance(f, dict) or set(f) != {"tag", "matrix", "note"}:
            raise SchemaError(f"factor {i}: expected tag/matrix/note")
        if f["tag"] not in (TAG_UPLUS, TAG_UMINUS):
            raise SchemaError(f"factor {i}: tag must be one of {TAG_UPLUS!r}, {TAG_UMINUS!r}")
        factors.append(CertFactor(f["tag"], mat(f["matrix"], f"factor {i}"), str(f["note"])))
    return FactorizationCertificate(
        ring=ring,
        variable=var,
        precision=doc["precision"],
        group=group,
        input=mat(doc["input"], "input"),
        translate=mat(doc["translate"], "translate"),
        factors=tuple(factors),
        ext_degree=doc["ext_degree"],
    )


# ---------------------------------------------------------------------------
# the end-to-end pipeline
# ---------------------------------------------------------------------------


def check_membership(x, prec=None):
    """det = 1 on the stored window, plus the unitary condition for SU3."""
    one = identity(x.group, x.alg, x.var).entries[0][0]
    ok, _ = mat_det(x).eq_window(one)
    if not ok:
        return False
    if x.group == GROUP_SU3:
        ok, _ = su3_check_detailed(x)
    return ok


def factor_loop_element(x, group=None, prec=DEFAULT_PRECISION, ext_degree=0,
                        internal_prec=None):
    """Run the full pipeline on x over R((t)): move into the big cell by an
    exact translate, split off the unipotent L and U parts, expand the torus
    part with the matching identity, and emit a verified certificate.

    The stated precision is recorded in the certificate; internal inversions
    run at a padded precision so the recomposition still covers the stated
    window.  An unsound certificate is never returned: verification failures
    raise instead.
    """
    group = group or x.group
    mgroup = GROUP_SL2 if group == GROUP_RES_SL2 else group
    if mgroup != x.group:
        raise LoopLabError(f"element group {x.group} does not match requested {group}")
    if group == GROUP_RES_SL2:
        char = x.alg.field.char
        if ext_degree < 1:
            raise LoopLabError("res_sl2 requires a positive extension degree")
        if char and math.gcd(ext_degree, char) != 1:
            raise LoopLabError("wild extension degree")
    if not check_membership(x):
        raise ConstraintViolation("input fails its group membership predicate")
    if x.is_exact_identity():
        cert = make_certificate(x.alg, x.var, prec, group, x,
                                identity(x.group, x.alg, x.var), [], ext_degree)
        _self_check(cert)
        return cert
    if internal_prec is not None:
        pads = [internal_prec]
    else:
        base = prec * (1 + PIPELINE_PAD_FACTOR)
        pads = [base, 2 * base]  # deterministic retry when precision runs out
    last = None
    for internal in pads:
        try:
            return _run_pipeline(x, group, prec, ext_degree, internal)
        except IndeterminatePrecision as e:
            last = e
    raise last


def _run_pipeline(x, group, prec, ext_degree, internal):
    g, y = translate_to_big_cell(x, internal)
    fac = ldu_decompose(y, internal)
    if group == GROUP_SU3:
        torus_factors = factor_su3_torus_artinian(fac.torus.entries[0][0], internal)
    elif group == GROUP_RES_SL2:
        torus_factors = factor_res_sl2_torus(fac.torus.entries[0][0], ext_degree, internal)
    else:
        torus_factors = factor_sl2_torus(fac.torus.entries[0][0], internal)
    factors = (
        [fac.lower.with_note("big-cell lower unipotent")]
        + torus_factors
        + [fac.upper.with_note("big-cell upper unipotent")]
    )
    cert = make_certificate(x.alg, x.var, prec, group, x, g, factors, ext_degree)
    _self_check(cert)
    return cert


def _self_check(cert):
    report = verify_certificate(cert)
    if report.accepted:
        return
    if any(not c.ok and c.window is not None and c.window < cert.precision
           for c in report.checks):
        raise IndeterminatePrecision(
            "certificate refused: accumulated precision fell below the stated "
            "window; raise the internal precision")
    failing = next(c for c in report.checks if not c.ok)
    raise InternalConsistencyError(f"emitted certificate failed its own "
                                   f"verification: {failing.name}: {failing.detail}")


# ---------------------------------------------------------------------------
# the independent checker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    ok: bool
    detail: str = ""
    window: object = None


@dataclass(frozen=True)
class VerificationReport:
    accepted: bool
    checks: tuple
    seed: object = None

    def to_json(self):
        return {
            "accepted": self.accepted,
            "checks": [
                {
                    "name": c.name,
                    "ok": c.ok,
                    "detail": c.detail,
                    "window": None if c.window is None else
                    ("exact" if c.window == INF else c.window),
                }
                for c in self.checks
            ],
        }

    def failures(self):
        return [c for c in self.checks if not c.ok]


def _window_str(w):
    return "exact" if w == INF else str(w)


def _check_factor_shape(elt, tag, name, checks):
    defects = shape_defects(elt.entries, elt.dim, tag)
    checks.append(VerificationCheck(
        f"{name}: {tag} shape (structural zeros and ones exact)",
        not defects,
        "" if not defects else f"non-structural entries at {defects}"))
    if elt.group != GROUP_SU3:
        return
    if tag == TAG_UPLUS:
        u, w = su3_uplus_params(elt)
        mirror = elt.entries[1][2]
    else:
        u, w = su3_uminus_params(elt)
        mirror = elt.entries[2][1]
    sigma_ok = mirror == u.sigma()
    checks.append(VerificationCheck(
        f"{name}: sigma-mirrored entry equals sigma(u) exactly", sigma_ok))
    defect = w + w.sigma() - u * u.sigma()
    dw = defect.effective_prec
    checks.append(VerificationCheck(
        f"{name}: w + sigma(w) = u*sigma(u)",
        defect.is_zero(),
        f"window {_window_str(dw)}", dw))
    ok, w_mem = su3_check_detailed(elt)
    checks.append(VerificationCheck(
        f"{name}: unitary membership", ok, f"window {_window_str(w_mem)}", w_mem))


def verify_certificate(cert, seed=None):
    """Re-parse every element, re-check all subgroup predicates, recompose
    the product with fresh arithmetic, and report per-entry agreement.

    Accepts a FactorizationCertificate or its document form; the certificate
    is always round-tripped through the document so the check never shares
    objects with the producer.  Failures are report entries, not exceptions
    (malformed documents raise SchemaError before checking starts).
    """
    if isinstance(cert, FactorizationCertificate):
        doc = cert.document()
    else:
        doc = cert
    fresh = certificate_from_document(doc)
    checks = []
    checks.append(VerificationCheck(
        "digest matches the payload",
        doc.get("digest") == certificate_digest(doc),
        str(doc.get("digest"))))
    stated = fresh.precision
    checks.append(VerificationCheck(
        "input passes its group membership predicate",
        check_membership(fresh.input)))
    tr = fresh.translate
    exact_translate = all(x.exact for row in tr.entries for x in row)
    checks.append(VerificationCheck(
        "translate has exact entries", exact_translate))
    checks.append(VerificationCheck(
        "translate passes its group membership predicate",
        check_membership(tr)))
    for i, f in enumerate(fresh.factors):
        _check_factor_shape(f.element, f.tag, f"factor {i}", checks)
    product = fresh.translate
    for f in fresh.factors:
        product = mat_mul(product, f.element)
    n = product.dim
    for i in range(n):
        for j in range(n):
            a = product.entries[i][j]
            b = fresh.input.entries[i][j]
            same, w = a.eq_window(b)
            ok = same and w >= stated
            detail = f"agreement window {_window_str(w)}, stated {stated}"
            if not same:
                detail = f"recomposed product differs from the input ({detail})"
            checks.append(VerificationCheck(
                f"recomposition entry ({i},{j})", ok, detail, w))
    return VerificationReport(
        accepted=all(c.ok for c in checks),
        checks=tuple(checks),
        seed=seed,
    )
