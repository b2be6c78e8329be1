"""Analytic positivity, complete-positivity and decomposability criteria.

Every criterion returns a Verdict carrying a signed margin (distance to
the condition boundary) rather than a bare flag, because the interesting
maps in this family sit exactly on boundaries.  Margins inside a small
band around zero are reported as "marginal"; summary flags are then
derived boundary-inclusively for the conditions whose boundary belongs
to the satisfied side, and never from marginal noise on the other side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import determinant, outer_product
from .maps import (
    CklParams,
    CoefficientMatrix,
    FormClass,
    KyeParams,
    ScalingVector,
    apply_map,
    averaged_params,
    classify_form,
    cp_check,
    geometric_means,
    matches_b_only,
    matches_cyclic_bc,
    matches_kye_form,
    scaled_ckl_matrix,
)

HOLDS = "holds"
FAILS = "fails"
NOT_APPLICABLE = "not_applicable"
MARGINAL = "marginal"

DEFAULT_MARGIN_BAND = 1e-9


class InternalInconsistencyError(RuntimeError):
    """Two proven criteria contradicted each other: an implementation bug."""


@dataclass(frozen=True)
class Verdict:
    status: str
    margin: float | None = None
    detail: str = ""


def make_verdict(margin: float, band: float = DEFAULT_MARGIN_BAND, detail: str = "") -> Verdict:
    if abs(margin) < band:
        return Verdict(MARGINAL, float(margin), detail)
    return Verdict(HOLDS if margin > 0 else FAILS, float(margin), detail)


def not_applicable(detail: str = "") -> Verdict:
    return Verdict(NOT_APPLICABLE, None, detail)


def affirmative(v: Verdict) -> bool:
    """Boundary-inclusive truth: marginal counts as satisfied at margin >= 0."""
    if v.status == HOLDS:
        return True
    if v.status == MARGINAL:
        return v.margin is not None and v.margin >= 0.0
    return False


def refuted(v: Verdict) -> bool:
    """True only when the condition fails beyond the marginal band."""
    return v.status == FAILS


def ckl_is_positive(p: CklParams, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Positivity of the constant cyclic map with coefficients (a, b, c).

    Positive exactly when a >= 2 (the completely positive branch, where
    the coupled submatrix has smallest eigenvalue a - 2) or when
    a + b + c >= 2 together with a + sqrt(bc) >= 1.  The margin is the
    larger of the two branch slacks, each branch slack being the minimum
    over its active constraints.
    """
    a, b, c = p.a, p.b, p.c
    cp_branch = a - 2.0
    main_branch = min(a + b + c - 2.0, a + math.sqrt(b * c) - 1.0)
    margin = max(cp_branch, main_branch)
    if cp_branch >= main_branch:
        detail = "completely positive branch (a >= 2)"
    else:
        detail = "sum and product conditions (a+b+c >= 2, a+sqrt(bc) >= 1)"
    return make_verdict(margin, band, detail)


def ckl_is_indecomposable(p: CklParams, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Indecomposability of a positive constant cyclic map: 4bc < (2-a)^2.

    The condition is strict, so the boundary 4bc = (2-a)^2 belongs to the
    decomposable side.  Maps with a > 2 are completely positive, hence
    decomposable, and fall outside this criterion.
    """
    pos = ckl_is_positive(p, band)
    if not affirmative(pos):
        return not_applicable("map is not positive")
    if p.a > 2.0:
        return not_applicable("completely positive region (a > 2): decomposable")
    margin = (2.0 - p.a) ** 2 - 4.0 * p.b * p.c
    return make_verdict(margin, band, "strict condition 4bc < (2-a)^2")


def kye_check(k: KyeParams, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Positive-but-not-completely-positive test for the zero-b family.

    Holds exactly when 1 <= a < 2 and c1 c2 c3 >= (2-a)^3; a holding map
    is moreover indecomposable.  (The exact boundary a = 1 with
    c1 c2 c3 = 1 is additionally extremal, a literature fact reported in
    the detail but never tested here.)
    """
    a = k.a
    cprod = k.c1 * k.c2 * k.c3
    margin = min(a - 1.0, 2.0 - a, cprod - (2.0 - a) ** 3)
    detail = "requires 1 <= a < 2 and c1*c2*c3 >= (2-a)^3"
    if abs(a - 1.0) <= band and abs(cprod - 1.0) <= band:
        detail += "; exact boundary point: extremal per the literature (not tested)"
    return make_verdict(margin, band, detail)


def average_necessary(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Necessary condition: the shift-averaged constant map must be positive."""
    if A.n != 3:
        return not_applicable("defined for n = 3 only")
    p = averaged_params(A)
    inner = ckl_is_positive(p, band)
    detail = f"averaged coefficients ({p.a!r}, {p.b!r}, {p.c!r}); {inner.detail}"
    return Verdict(inner.status, inner.margin, detail)


def pairwise_necessary(
    A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND
) -> list[tuple[tuple[int, int], Verdict]]:
    """Per-pair necessary bounds sqrt(a_ii a_jj) + sqrt(a_ij a_ji) >= 1.

    Any failing pair certifies that the map is not positive.  Pairs with
    a_ij a_ji = 0 are still evaluated literally (a limiting argument
    supports necessity there); the detail notes the degeneracy.
    """
    out = []
    a = A.a
    for i in range(A.n):
        for j in range(i + 1, A.n):
            cross = a[i, j] * a[j, i]
            margin = math.sqrt(a[i, i] * a[j, j]) + math.sqrt(cross) - 1.0
            detail = f"pair ({i + 1},{j + 1})"
            if cross == 0.0:
                detail += "; degenerate cross product a_ij*a_ji = 0"
            out.append(((i + 1, j + 1), make_verdict(margin, band, detail)))
    return out


def pairwise_sufficient(
    A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND
) -> list[tuple[tuple[int, int], Verdict]]:
    """Per-pair sufficient bounds sqrt(a_ii a_jj)/(n-1) + sqrt(a_ij a_ji) >= 1.

    If every pair holds, the map is positive and decomposable.
    """
    out = []
    a = A.a
    for i in range(A.n):
        for j in range(i + 1, A.n):
            margin = (
                math.sqrt(a[i, i] * a[j, j]) / (A.n - 1)
                + math.sqrt(a[i, j] * a[j, i])
                - 1.0
            )
            out.append(((i + 1, j + 1), make_verdict(margin, band, f"pair ({i + 1},{j + 1})")))
    return out


def c3_mean(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Geometric-mean bound a* + b* + c* >= 2.

    Conjectured necessary for positivity in general; proven only for the
    special cyclic and zero-pattern forms, which have their own gated
    criteria.  This verdict therefore never decides non-positivity on
    its own.
    """
    if A.n != 3:
        return not_applicable("defined for n = 3 only")
    g = geometric_means(A)
    margin = g.a + g.b + g.c - 2.0
    return make_verdict(
        margin, band, "conjectured necessary; proven only for special coefficient patterns"
    )


def cyclic_necessary(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Necessary bound a* + b + c >= 2 for cyclic matrices with constant
    b, c > 0 and every a_i >= 1.  A failure certifies non-positivity."""
    if A.n != 3 or not matches_cyclic_bc(A):
        return not_applicable("requires constant b and c slots (n = 3)")
    b = float(A.b_cyclic[0])
    c = float(A.c_cyclic[0])
    if b <= 0.0 or c <= 0.0:
        return not_applicable("requires b > 0 and c > 0")
    if float(np.min(A.a_diag)) < 1.0:
        return not_applicable("requires every a_i >= 1")
    a_star = float(np.prod(A.a_diag) ** (1.0 / 3.0))
    return make_verdict(a_star + b + c - 2.0, band, f"a* = {a_star!r}")


def b_only_necessary(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Necessary bound a* + b* >= 2 for matrices with zero c slots,
    positive b slots and every a_i >= 1.  A failure certifies
    non-positivity."""
    if A.n != 3 or not matches_b_only(A):
        return not_applicable("requires zero c slots and positive b slots (n = 3)")
    if float(np.min(A.a_diag)) < 1.0:
        return not_applicable("requires every a_i >= 1")
    a_star = float(np.prod(A.a_diag) ** (1.0 / 3.0))
    b_star = float(np.prod(A.b_cyclic) ** (1.0 / 3.0))
    return make_verdict(a_star + b_star - 2.0, band, f"a* = {a_star!r}, b* = {b_star!r}")


def scaling_sufficient(
    A: CoefficientMatrix,
    params: CklParams,
    scaling: ScalingVector,
    band: float = DEFAULT_MARGIN_BAND,
) -> Verdict:
    """Entrywise-dominance certificate against a rescaled constant map.

    Requires positive constant coefficients; holds when every entry of
    A - (rescaled constant matrix) is >= -1e-12, proving positivity.
    """
    if A.n != 3:
        return not_applicable("defined for n = 3 only")
    if not affirmative(ckl_is_positive(params, band)):
        raise ValueError("reference constant coefficients do not define a positive map")
    reference = scaled_ckl_matrix(params, scaling)
    margin = float(np.min(A.a - reference.a))
    status = HOLDS if margin >= -1e-12 else FAILS
    return Verdict(status, margin, "minimum entry of the dominance gap matrix")


def _ckl_margin_grid(a: float, b, c) -> np.ndarray:
    """Vectorized positivity margin of (a, b, c) over arrays b, c."""
    main = np.minimum(a + b + c - 2.0, a + np.sqrt(b * c) - 1.0)
    return np.maximum(a - 2.0, main)


def scaling_sufficient_search(
    A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND
) -> Verdict:
    """Search for a positivity certificate by dominance over a rescaled
    constant map.

    The diagonal reference is fixed at a = min_i a_i (larger diagonals
    only help).  Closed-form shortcuts handle the b = 0 and c = 0 axes:
    the map is certified positive when min_i a_i >= 1 and
    min_i a_i + c* >= 2 (or symmetrically with b*).  Otherwise (b, c) is
    scanned over [0, b*] x [0, c*] on a 64 x 64 grid with two refinement
    levels around the best cells, subject to b c <= min_i b_i c_{i+1}.
    """
    if A.n != 3:
        return not_applicable("defined for n = 3 only")
    a0 = float(np.min(A.a_diag))
    g = geometric_means(A)
    b_star, c_star = g.b, g.c

    # Shortcuts along the axes: with b = 0 (or c = 0) the cyclic product
    # caps are vacuous and the constant map is positive iff a >= 1 and
    # a + (other mean) >= 2, so the best margin is available in closed form.
    axis_margin = max(
        min(a0 - 1.0, a0 + c_star - 2.0),
        min(a0 - 1.0, a0 + b_star - 2.0),
    )
    best = axis_margin
    best_params = (a0, 0.0, c_star) if a0 + c_star >= a0 + b_star else (a0, b_star, 0.0)
    if axis_margin >= 0.0:
        return make_verdict(
            axis_margin, band,
            f"axis certificate with (a, b, c) = {best_params!r}",
        )

    bc_vals = A.b_cyclic * np.roll(A.c_cyclic, -1)  # b_i * c_{i+1}
    cap = float(np.min(bc_vals))

    def scan(b_lo, b_hi, c_lo, c_hi, points=64):
        bs = np.linspace(b_lo, b_hi, points)
        cs = np.linspace(c_lo, c_hi, points)
        bb, cc = np.meshgrid(bs, cs, indexing="ij")
        score = np.minimum(_ckl_margin_grid(a0, bb, cc), cap - bb * cc)
        k = int(np.argmax(score))
        i, j = np.unravel_index(k, score.shape)
        return float(score[i, j]), float(bb[i, j]), float(cc[i, j]), (bs, cs, i, j)

    if b_star > 0.0 and c_star > 0.0:
        score, b_at, c_at, (bs, cs, i, j) = scan(0.0, b_star, 0.0, c_star)
        level = 0
        while level < 2:
            if score > best:
                best, best_params = score, (a0, b_at, c_at)
            if score >= 0.0:
                break
            db = (bs[1] - bs[0]) if len(bs) > 1 else b_star
            dc = (cs[1] - cs[0]) if len(cs) > 1 else c_star
            b_lo = max(0.0, bs[i] - db)
            b_hi = min(b_star, bs[i] + db)
            c_lo = max(0.0, cs[j] - dc)
            c_hi = min(c_star, cs[j] + dc)
            score, b_at, c_at, (bs, cs, i, j) = scan(b_lo, b_hi, c_lo, c_hi)
            level += 1
        if score > best:
            best, best_params = score, (a0, b_at, c_at)

    detail = f"best reference (a, b, c) = {best_params!r} with joint slack {best!r}"
    return make_verdict(best, band, detail)


def n2_positive(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """Exact positivity test for n = 2: sqrt(a11 a22) + sqrt(a12 a21) >= 1."""
    if A.n != 2:
        return not_applicable("defined for n = 2 only")
    a = A.a
    margin = math.sqrt(a[0, 0] * a[1, 1]) + math.sqrt(a[0, 1] * a[1, 0]) - 1.0
    return make_verdict(margin, band, "if and only if condition")


def boundary_witness_vector(a1: float, a2: float, a3: float) -> np.ndarray:
    """Rank-one test vector for diagonals on the a* + b = 2 boundary."""
    return np.array(
        [
            a1 ** (-1.0 / 6.0) * a3 ** (1.0 / 6.0),
            a2 ** (-1.0 / 6.0) * a1 ** (1.0 / 6.0),
            a3 ** (-1.0 / 6.0) * a2 ** (1.0 / 6.0),
        ],
        dtype=complex,
    )


def cyclic_form_witness(a1: float, a2: float, a3: float) -> np.ndarray:
    """Block-positivity test vector for cyclic matrices with constant b, c."""
    return np.array(
        [
            (a2 * a3 / a1) ** (1.0 / 12.0),
            (a1 * a3 / a2) ** (1.0 / 12.0),
            (a1 * a2 / a3) ** (1.0 / 12.0),
        ],
        dtype=complex,
    )


def cyclic_form_witness_simple(a1: float, a2: float, a3: float) -> np.ndarray:
    """Simpler variant of the cyclic test vector: entries a_i^(-1/6)."""
    return np.array(
        [a1 ** (-1.0 / 6.0), a2 ** (-1.0 / 6.0), a3 ** (-1.0 / 6.0)], dtype=complex
    )


def zero_pattern_witnesses(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Block-positivity test pair (xi, eta) for zero-c-slot matrices.

    ``a`` and ``b`` are the diagonals (a1, a2, a3) and the positive b
    slots (b1, b2, b3).  Under this package's block convention (units in
    the first tensor factor) the certifying product vector is eta (x) xi;
    its value is (sum_i a_i^(1/3) / a*) (a* + b*- 2).
    """
    a1, a2, a3 = a
    b1, b2, b3 = b
    sixth = 1.0 / 6.0
    xi = np.array(
        [
            a1 ** -sixth * b1 ** -sixth * b3 ** sixth,
            a2 ** -sixth * b2 ** -sixth * b1 ** sixth,
            a3 ** -sixth * b3 ** -sixth * b2 ** sixth,
        ],
        dtype=complex,
    )
    eta = np.array(
        [
            a1 ** -sixth * b1 ** sixth * b3 ** -sixth,
            a2 ** -sixth * b2 ** sixth * b1 ** -sixth,
            a3 ** -sixth * b3 ** sixth * b2 ** -sixth,
        ],
        dtype=complex,
    )
    return xi, eta


def boundary_proposition(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> Verdict:
    """No-go verdict on the a* + b = 2 boundary (constant b, zero c).

    On that boundary the map is positive only when the diagonal entries
    are all equal; otherwise the rank-one witness built from the
    diagonals is a positive input whose image has negative determinant
    D = 6 (a* - a-bar) / a*.  The verdict margin is D (always <= 0 by
    the arithmetic-geometric mean inequality), and the detail records
    both the closed-form and the numerically evaluated determinant,
    which must agree.
    """
    if A.n != 3 or not matches_cyclic_bc(A):
        return not_applicable("requires constant b and c slots (n = 3)")
    adiag = A.a_diag
    b = float(A.b_cyclic[0])
    c = float(A.c_cyclic[0])
    if c > 1e-12:
        return not_applicable("requires zero c slots")
    if float(np.min(adiag)) <= 0.0:
        return not_applicable("requires strictly positive diagonal entries")
    a_star = float(np.prod(adiag) ** (1.0 / 3.0))
    if abs(a_star + b - 2.0) >= 1e-9:
        return not_applicable(f"not on the boundary: a* + b = {a_star + b!r}")

    a_bar = float(np.mean(adiag))
    d_formula = 6.0 * (a_star - a_bar) / a_star
    xi = boundary_witness_vector(*adiag)
    d_numeric = determinant(apply_map(A, outer_product(xi)))
    if abs(d_formula - d_numeric) > 1e-8 * max(1.0, abs(d_formula)):
        raise InternalInconsistencyError(
            f"boundary determinant identity violated: {d_formula!r} vs {d_numeric!r}"
        )
    spread = float(np.max(adiag) - np.min(adiag))
    detail = (
        f"D_formula = {d_formula!r}, D_numeric = {d_numeric!r}, diagonal spread = {spread!r}; "
        "positive only for equal diagonals (and then only when a >= 1)"
    )
    return make_verdict(d_formula, band, detail)


@dataclass(frozen=True)
class ConditionReport:
    """Aggregated verdicts of every applicable criterion plus summary flags.

    Summary flags: cp_proven implies positive_proven and
    decomposable_proven; not_positive_proven excludes all positive-side
    flags; "inconclusive" means positivity was neither proven nor
    refuted by the analytic criteria.
    """

    form: FormClass
    cp: Verdict
    ckl_positive: Verdict
    ckl_indecomposable: Verdict
    kye: Verdict
    average_necessary: Verdict
    pairwise_necessary: list = field(default_factory=list)
    pairwise_sufficient: list = field(default_factory=list)
    c3_mean: Verdict = not_applicable()
    cyclic_necessary: Verdict = not_applicable()
    b_only_necessary: Verdict = not_applicable()
    scaling_sufficient: Verdict = not_applicable()
    boundary_proposition: Verdict = not_applicable()
    summary: tuple[str, ...] = ()


def full_report(A: CoefficientMatrix, band: float = DEFAULT_MARGIN_BAND) -> ConditionReport:
    """Run every applicable criterion and reconcile the summary flags.

    Flags are only asserted by non-marginal verdicts (or, for boundary-
    inclusive conditions, marginal verdicts with nonnegative margin), so
    the provably-positive and provably-not-positive flag sets can never
    both fire unless an implementation bug makes two theorems disagree,
    which raises InternalInconsistencyError.
    """
    form = classify_form(A)
    cp_flag, cp_min_eig = cp_check(A, tol=band)
    cp_verdict = make_verdict(cp_min_eig, band, "smallest eigenvalue of the coupled submatrix")

    positive_reasons: list[str] = []
    not_positive_reasons: list[str] = []
    indecomposable_reasons: list[str] = []
    decomposable_reasons: list[str] = []

    if affirmative(cp_verdict):
        positive_reasons.append("cp")
        decomposable_reasons.append("cp")

    ckl_pos = not_applicable("constant cyclic pattern not matched")
    ckl_indec = not_applicable("constant cyclic pattern not matched")
    if form.tag == "constant_ckl":
        p = CklParams(form.parameters["a"], form.parameters["b"], form.parameters["c"])
        ckl_pos = ckl_is_positive(p, band)
        ckl_indec = ckl_is_indecomposable(p, band)
        if affirmative(ckl_pos):
            positive_reasons.append("ckl_positive")
        elif refuted(ckl_pos):
            not_positive_reasons.append("ckl_positive")
        if ckl_indec.status == HOLDS:
            indecomposable_reasons.append("ckl_indecomposable")
        elif ckl_indec.status == FAILS or (
            ckl_indec.status == MARGINAL and ckl_indec.margin is not None and ckl_indec.margin <= 0
        ):
            decomposable_reasons.append("ckl_indecomposable")

    kye_verdict = not_applicable("zero-b pattern not matched")
    if A.n == 3 and matches_kye_form(A):
        c = A.c_cyclic
        k = KyeParams(float(A.a_diag[0]), float(c[0]), float(c[1]), float(c[2]))
        kye_verdict = kye_check(k, band)
        if affirmative(kye_verdict):
            positive_reasons.append("kye")
            indecomposable_reasons.append("kye")
        elif refuted(kye_verdict) and k.a < 2.0 - band:
            not_positive_reasons.append("kye")

    avg_verdict = average_necessary(A, band)
    if refuted(avg_verdict):
        not_positive_reasons.append("average_necessary")

    pnec = pairwise_necessary(A, band)
    for pair, v in pnec:
        if refuted(v):
            not_positive_reasons.append(f"pairwise_necessary{pair}")

    psuf = pairwise_sufficient(A, band)
    if psuf and all(affirmative(v) for _, v in psuf):
        positive_reasons.append("pairwise_sufficient")
        decomposable_reasons.append("pairwise_sufficient")

    c3_verdict = c3_mean(A, band)

    cyc_verdict = cyclic_necessary(A, band)
    if refuted(cyc_verdict):
        not_positive_reasons.append("cyclic_necessary")

    bonly_verdict = b_only_necessary(A, band)
    if refuted(bonly_verdict):
        not_positive_reasons.append("b_only_necessary")

    scaling_verdict = scaling_sufficient_search(A, band)
    if affirmative(scaling_verdict):
        positive_reasons.append("scaling_sufficient")

    boundary_verdict = boundary_proposition(A, band)
    if refuted(boundary_verdict):
        not_positive_reasons.append("boundary_proposition")

    if positive_reasons and not_positive_reasons:
        raise InternalInconsistencyError(
            f"positivity proven by {positive_reasons} but refuted by {not_positive_reasons}"
        )
    if indecomposable_reasons and decomposable_reasons:
        raise InternalInconsistencyError(
            f"indecomposability proven by {indecomposable_reasons} "
            f"but decomposability by {decomposable_reasons}"
        )

    flags: list[str] = []
    if not_positive_reasons:
        flags.append("not_positive_proven")
    else:
        if affirmative(cp_verdict):
            flags.append("cp_proven")
        if positive_reasons:
            flags.append("positive_proven")
        if indecomposable_reasons:
            flags.append("indecomposable_proven")
        if decomposable_reasons:
            flags.append("decomposable_proven")
        if not positive_reasons:
            flags.append("inconclusive")

    return ConditionReport(
        form=form,
        cp=cp_verdict,
        ckl_positive=ckl_pos,
        ckl_indecomposable=ckl_indec,
        kye=kye_verdict,
        average_necessary=avg_verdict,
        pairwise_necessary=pnec,
        pairwise_sufficient=psuf,
        c3_mean=c3_verdict,
        cyclic_necessary=cyc_verdict,
        b_only_necessary=bonly_verdict,
        scaling_sufficient=scaling_verdict,
        boundary_proposition=boundary_verdict,
        summary=tuple(flags),
    )
