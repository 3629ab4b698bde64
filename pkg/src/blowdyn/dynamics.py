"""Dynamics read off from the lifted quadratic part.

Once a germ has been lifted through the full blow-up tower, its quadratic
part in the distinguished chart drives everything dynamical that this
package computes: fixed directions of the projectivized quadratic form
(with their multipliers and the allowability cut against the singular
divisor), the attraction matrix at a fixed direction, the closed-form
orbit asymptotics in the generic case, and the planar refined invariants
in the nongeneric one.

The second half of the module is numerical plumbing around actual orbits:
high-precision iteration, power-law fitting of coordinate decay, the
stage-by-stage regularity verdicts obtained by pulling an orbit back
through the chart transitions, and the Cesaro-type limit used to justify
the 1/k rates.

Conventions.  Directions are stored as projective representatives; the
multiplier lam scales linearly with the representative (Q(cv) = c lam on
cv).  All numeric thresholds are module constants, declared once below;
nothing is inferred at run time.
"""

import cmath
import itertools
import math
import statistics
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath

from .blowup import pi_inverse, projection_formulas
from .errors import (
    BlowdynError,
    DegenerateDirection,
    InsufficientData,
    NoAllowableDirection,
    NonConvergent,
    NonGeneric,
    PreconditionViolated,
    UnsupportedSpectrum,
    ZeroCoordinate,
)
from .exactalg import mat_vec
from .lifting import (
    is_diagonalizable,
    lift,
    lifted_linear_part,
    lifted_quadratic_part,
)
from .scalars import GaussianRational, gaussian_sqrt

# Numeric policy (declared, not derived):
NEWTON_MAX_ITER = 50
NEWTON_RESIDUAL_TOL = 1e-10     # at sup-norm-1 normalization
DEGENERATE_EPS = 1e-8           # |lam| below this counts as degenerate (numeric)
PROJECTIVE_DEDUP_TOL = 1e-6
ALLOWABLE_EPS = 1e-10           # after sup-norm normalization
POWERLAW_RESIDUAL_TOL = 0.02
EXPONENT_SNAP = 0.125           # snap fitted exponents this close to an integer
REG_WINDOW = 50                 # samples per window in regularity verdicts
DIRECTION_TOL = 1e-3            # tau: Cauchy threshold on window means
DIRECTION_SCATTER_TOL = 5e-2    # intra-window spread; oscillation detector
STANDARD_MATCH_TOL = 1e-4       # projective match against a reference direction
DEFAULT_RADIUS = 10.0           # orbit divergence radius (sup norm)

_ONE = GaussianRational(1)


def _to_complex(x):
    if isinstance(x, GaussianRational):
        return x.to_complex()
    return complex(x)


def projective_distance(a, b):
    """Distance between the complex lines spanned by a and b.

    Equals min over a phase theta of ||a/|a| - e^{i theta} b/|b| ||, i.e.
    the chord sqrt(2 (1 - |<a,b>| / (|a| |b|))), evaluated as the norm of
    the phase-aligned difference so that distances far below sqrt(eps)
    remain resolvable.  Zero iff the lines agree.
    """
    za = [_to_complex(x) for x in a]
    zb = [_to_complex(x) for x in b]
    if len(za) != len(zb):
        raise PreconditionViolated("dimension mismatch")
    na = math.sqrt(sum(abs(x) ** 2 for x in za))
    nb = math.sqrt(sum(abs(x) ** 2 for x in zb))
    if na == 0.0 or nb == 0.0:
        raise PreconditionViolated("zero vector has no projective class")
    za = [x / na for x in za]
    zb = [x / nb for x in zb]
    inner = sum(x * y.conjugate() for x, y in zip(za, zb))
    if inner == 0:
        return math.sqrt(2.0)
    phase = inner / abs(inner)
    return math.sqrt(sum(abs(x - phase * y) ** 2 for x, y in zip(za, zb)))


def _argmax_abs(v):
    """Index of the largest-modulus coordinate (first on ties)."""
    best, besta = 0, None
    for i, x in enumerate(v):
        ax = x.abs2() if isinstance(x, GaussianRational) else abs(x) ** 2
        if besta is None or ax > besta:
            best, besta = i, ax
    return best


def _rep(v):
    """Canonical projective representative v / v_{i0}, i0 the largest
    coordinate; entries bounded by 1, coordinate i0 exactly 1."""
    i0 = _argmax_abs(v)
    piv = v[i0]
    return tuple(_to_complex(x) / _to_complex(piv) for x in v), i0


# -- characteristic directions -------------------------------------------

@dataclass(frozen=True)
class CharDirection:
    """A fixed direction of the quadratic part: Q(v) = lam * v.

    v is a projective representative; lam is tied to it (rescaling v by c
    rescales lam by c).  allowable is None until the singular-divisor test
    has been applied.  residual is the max deviation |Q(v)_j - lam v_j|
    at the stored representative (exactly zero for exact modes).
    """

    v: tuple
    lam: object
    degenerate: bool
    mode: str
    residual: float = 0.0
    allowable: object = None
    hakim_spectrum: object = None

    @property
    def n(self):
        return len(self.v)

    def is_exact(self):
        return all(isinstance(x, GaussianRational) for x in self.v)


def _structured_directions(Q, S):
    """The closed-form allowable nondegenerate direction of a fully lifted
    unipotent germ, normalized to lam = 1, verified exactly against the
    fixed-direction equations before being returned."""
    if S is None:
        raise PreconditionViolated("structured mode needs the block structure")
    if Q.n != S.n:
        raise PreconditionViolated("quadratic form / structure dimension mismatch")
    if any(x != _ONE for x in S.lam):
        raise UnsupportedSpectrum(
            "structured closed form requires every block eigenvalue equal to 1"
        )
    if S.has_equal_top_blocks():
        raise NoAllowableDirection(
            "tied leading blocks: no allowable nondegenerate direction exists "
            "at the final stage"
        )
    mu1 = S.mu[0]
    # The leading coefficient reappears in the lifted chart as minus the
    # w_1^2 coefficient of component 1.
    a = -Q.monomial_coefficient(1, 1, 1)
    if not a:
        raise NoAllowableDirection(
            "leading quadratic coefficient vanishes; the closed form degenerates"
        )
    lam = _ONE
    v = [GaussianRational(0) for _ in range(S.n)]
    v[0] = GaussianRational(2 * mu1 - 1) / a
    for j in range(2, mu1 + 1):
        v[j - 1] = GaussianRational(mu1 + j - 2)
    for l in range(2, S.rho + 1):
        mul = S.mu[l - 1]
        nul = S.nu[l - 1]
        if mul == mu1 - 1:
            # this block's own leading coefficient, read off the lifted chart:
            # the w_1 w_{mu1} monomial of component nu_l + mu_l
            al = Q.monomial_coefficient(nul + mul, 1, mu1)
            for h in range(1, mul + 1):
                v[nul + h - 1] = (al / a) * GaussianRational(mul + h)
        # blocks with mul < mu1 - 1 stay identically zero
    for j in range(1, S.n + 1):
        if Q.value(j, v) != lam * v[j - 1]:
            raise PreconditionViolated(
                "closed-form direction fails the fixed-direction equations "
                "(component %d); is Q the final-stage quadratic part?" % j
            )
    return [
        CharDirection(
            v=tuple(v), lam=lam, degenerate=False, mode="structured",
            residual=0.0, allowable=True,
        )
    ]


def _exact2d_directions(Q):
    """Exact fixed directions for n = 2 via the slope equation.

    Writing directions [1 : t], the slope t must kill
    sigma(t) = Q_2(1,t) - t Q_1(1,t).  When component 1 has no w_2^2 term
    (the shape every once-blown-up planar germ has) sigma has degree <= 2
    and the roots are radical expressions; they are returned exactly when
    the discriminant has a square root in Q(i).
    """
    if Q.n != 2:
        raise PreconditionViolated("exact2d mode requires n = 2")
    ent = []
    for j in (1, 2):
        for hk in ((1, 1), (1, 2), (2, 2)):
            c = Q.monomial_coefficient(j, *hk)
            if not isinstance(c, GaussianRational):
                raise PreconditionViolated("exact2d mode needs exact coefficients")
            ent.append(c)
    m11, m12, m22, c11, c12, c22 = ent
    if m22:
        raise PreconditionViolated(
            "component 1 has a w_2^2 term; the slope equation is cubic and "
            "is not handled exactly"
        )
    s0, s1, s2 = c11, c12 - m11, c22 - m12
    zero = GaussianRational(0)
    roots = []
    if s2:
        disc = s1 * s1 - 4 * s0 * s2
        r = gaussian_sqrt(disc)
        if r is None:
            raise PreconditionViolated(
                "slope discriminant has no exact square root in Q(i)"
            )
        roots.append((-s1 + r) / (2 * s2))
        if r:
            roots.append((-s1 - r) / (2 * s2))
    elif s1:
        roots.append(-s0 / s1)
    elif not s0:
        raise PreconditionViolated(
            "slope equation vanishes identically: every direction is fixed"
        )
    roots.sort(key=lambda t: (t.to_complex().real, t.to_complex().imag))
    dirs = []
    for t in roots:
        lam = m11 + m12 * t
        dirs.append(
            CharDirection(
                v=(_ONE, t), lam=lam, degenerate=not lam, mode="exact2d",
            )
        )
    # [0 : 1] is always fixed once component 1 has no w_2^2 term
    lam01 = c22
    dirs.append(
        CharDirection(
            v=(zero, _ONE), lam=lam01, degenerate=not lam01, mode="exact2d",
        )
    )
    return dirs


def _numeric_directions(Q, stats=None):
    """Newton multistart over every affine chart v_c = 1.

    Deterministic start grid, analytic Jacobian, projective dedup, results
    sorted by a canonical key.  Non-converged starts are dropped and
    counted; per-solution residuals are re-checked at sup-norm-1 scale.
    """
    n = Q.n
    if n > 6:
        raise PreconditionViolated("numeric direction search is limited to n <= 6")
    import numpy as np

    mats = [
        np.array(
            [[_to_complex(Q.matrices[j][h][k]) for k in range(n)] for h in range(n)],
            dtype=complex,
        )
        for j in range(n)
    ]
    palette = (1.0 + 0.0j, -1.0 + 0.0j, 0.7 + 0.3j, 0.0 + 0.0j)
    counters = {"starts": 0, "converged": 0, "dropped": 0, "duplicates": 0}
    found = []  # (rep tuple, lam_rep, residual)

    def sysval(v, lam):
        return np.array([v @ mats[j] @ v - lam * v[j] for j in range(n)])

    for c in range(n):
        free = [i for i in range(n) if i != c]
        for combo in itertools.product(palette, repeat=len(free)):
            counters["starts"] += 1
            v = np.zeros(n, dtype=complex)
            v[c] = 1.0
            for idx, val in zip(free, combo):
                v[idx] = val
            lam = v @ mats[c] @ v
            ok = False
            for _ in range(NEWTON_MAX_ITER):
                r = sysval(v, lam)
                if np.max(np.abs(r)) < 1e-13:
                    ok = True
                    break
                J = np.zeros((n, n), dtype=complex)
                for j in range(n):
                    Av = mats[j] @ v
                    for idx, k in enumerate(free):
                        J[j, idx] = 2.0 * Av[k] - (lam if j == k else 0.0)
                    J[j, n - 1] = -v[j]
                try:
                    step = np.linalg.solve(J, -r)
                except np.linalg.LinAlgError:
                    break
                for idx, k in enumerate(free):
                    v[k] += step[idx]
                lam += step[n - 1]
                if np.max(np.abs(v)) > 1e8:
                    break
            if not ok:
                counters["dropped"] += 1
                continue
            counters["converged"] += 1
            rep, i0 = _rep(tuple(v))
            lam_rep = complex(lam) / complex(v[i0])
            resid = max(
                abs(
                    sum(mats[j][h][k] * rep[h] * rep[k] for h in range(n) for k in range(n))
                    - lam_rep * rep[j]
                )
                for j in range(n)
            )
            if resid > NEWTON_RESIDUAL_TOL:
                counters["dropped"] += 1
                continue
            if any(
                projective_distance(rep, prev[0]) < PROJECTIVE_DEDUP_TOL
                for prev in found
            ):
                counters["duplicates"] += 1
                continue
            found.append((rep, lam_rep, resid))

    found.sort(
        key=lambda item: tuple(
            (round(x.real, 9), round(x.imag, 9)) for x in item[0]
        )
    )
    counters["unique"] = len(found)
    if stats is not None:
        stats.update(counters)
    return [
        CharDirection(
            v=rep, lam=lam_rep, degenerate=abs(lam_rep) <= DEGENERATE_EPS,
            mode="numeric", residual=float(resid),
        )
        for rep, lam_rep, resid in found
    ]


def characteristic_directions(Q, mode="auto", structure=None, stats=None):
    """Fixed directions of the n-tuple quadratic form Q: Q(v) = lam v.

    mode "structured" builds the closed-form direction of a fully lifted
    unipotent germ (needs structure); "exact2d" solves the planar slope
    quadratic in Q(i); "numeric" runs a deterministic Newton multistart
    (n <= 6).  "auto" tries them in that order, falling through on
    preconditions.  stats, if given, is filled with numeric-search
    counters.
    """
    if mode == "structured":
        return _structured_directions(Q, structure)
    if mode == "exact2d":
        return _exact2d_directions(Q)
    if mode == "numeric":
        return _numeric_directions(Q, stats)
    if mode != "auto":
        raise PreconditionViolated("unknown mode %r" % (mode,))
    failures = []
    if structure is not None:
        try:
            return _structured_directions(Q, structure)
        except (PreconditionViolated, UnsupportedSpectrum, NoAllowableDirection) as e:
            failures.append("structured: %s" % e)
    if Q.n == 2:
        try:
            return _exact2d_directions(Q)
        except PreconditionViolated as e:
            failures.append("exact2d: %s" % e)
    try:
        return _numeric_directions(Q, stats)
    except PreconditionViolated as e:
        failures.append("numeric: %s" % e)
    raise PreconditionViolated("; ".join(failures))


def allowable_filter(dirs, structure):
    """Keep the directions transverse to the singular divisor.

    A direction survives iff its first mu_1 coordinates are all nonzero
    (exactly for exact representatives, above ALLOWABLE_EPS after sup-norm
    normalization otherwise).  Returned directions carry allowable=True.
    """
    mu1 = structure.mu[0]
    kept = []
    for d in dirs:
        if len(d.v) != structure.n:
            raise PreconditionViolated("direction/structure dimension mismatch")
        if d.is_exact():
            ok = all(bool(d.v[h]) for h in range(mu1))
        else:
            vals = [abs(_to_complex(x)) for x in d.v]
            m = max(vals)
            ok = m > 0 and all(vals[h] / m > ALLOWABLE_EPS for h in range(mu1))
        if ok:
            kept.append(replace(d, allowable=True))
    return kept


# -- attraction matrix at a fixed direction ------------------------------

@dataclass(frozen=True)
class HakimData:
    """Attraction data at a nondegenerate fixed direction.

    matrix is half the deviation of the projectivized tangent map from the
    identity, written in the affine chart of coordinate `chart` (1-based);
    its spectrum governs attraction rates transverse to the direction and
    does not depend on the chart or on the representative's scale.
    """

    matrix: tuple
    spectrum: tuple
    chart: int
    lam: object


def _hakim_exact(Q, v, i0):
    n = Q.n
    piv = v[i0]
    w = [x / piv for x in v]
    lamp = Q.value(i0 + 1, w)
    for j in range(1, n + 1):
        if Q.value(j, w) != lamp * w[j - 1]:
            raise PreconditionViolated(
                "v is not a fixed direction of this quadratic part (component %d)" % j
            )
    if not lamp:
        raise DegenerateDirection("multiplier vanishes at this direction")
    idxs = [t for t in range(n) if t != i0]
    Apiv = mat_vec(Q.matrices[i0], w)
    rows = []
    two = GaussianRational(2)
    for j in idxs:
        Aj = mat_vec(Q.matrices[j], w)
        row = []
        for k in idxs:
            d = (two / lamp) * (Aj[k] - w[j] * Apiv[k])
            if j == k:
                d = d - _ONE
            row.append(d / two)
        rows.append(tuple(row))
    return tuple(rows), lamp


def _hakim_numeric(Q, v, i0):
    n = Q.n
    mats = [
        [[_to_complex(Q.matrices[j][h][k]) for k in range(n)] for h in range(n)]
        for j in range(n)
    ]
    piv = _to_complex(v[i0])
    w = [_to_complex(x) / piv for x in v]

    def qval(j):
        return sum(
            mats[j][h][k] * w[h] * w[k] for h in range(n) for k in range(n)
        )

    lamp = qval(i0)
    for j in range(n):
        if abs(qval(j) - lamp * w[j]) > 1e-8 * (1.0 + abs(lamp)):
            raise PreconditionViolated(
                "v is not a fixed direction of this quadratic part "
                "(component %d residual too large)" % (j + 1)
            )
    if abs(lamp) <= 1e-10:
        raise DegenerateDirection("multiplier numerically zero at this direction")
    idxs = [t for t in range(n) if t != i0]
    Apiv = [sum(mats[i0][r][k] * w[k] for k in range(n)) for r in range(n)]
    rows = []
    for j in idxs:
        Aj = [sum(mats[j][r][k] * w[k] for k in range(n)) for r in range(n)]
        row = []
        for k in idxs:
            d = (2.0 / lamp) * (Aj[k] - w[j] * Apiv[k])
            if j == k:
                d -= 1.0
            row.append(d / 2.0)
        rows.append(tuple(row))
    return tuple(rows), lamp


def hakim_matrix(Q, v, chart=None):
    """Attraction matrix at the fixed direction v, plus its spectrum.

    The direction is normalized in the affine chart of its largest-modulus
    coordinate (or the 1-based `chart` if given); the matrix is half the
    deviation of the projectivized tangent map from the identity there.
    Exact input produces an exact matrix; eigenvalues of blocks larger
    than 1x1 are computed in floating point.
    """
    n = Q.n
    if len(v) != n:
        raise PreconditionViolated("direction has wrong length")
    if chart is not None:
        if not 1 <= chart <= n:
            raise PreconditionViolated("chart index out of range")
        i0 = chart - 1
        if not v[i0]:
            raise PreconditionViolated("chosen chart coordinate of v vanishes")
    else:
        i0 = _argmax_abs(v)
    exact = all(isinstance(x, GaussianRational) for x in v) and all(
        isinstance(Q.matrices[j][h][k], GaussianRational)
        for j in range(n)
        for h in range(n)
        for k in range(n)
    )
    if exact:
        mat, lamp = _hakim_exact(Q, v, i0)
    else:
        mat, lamp = _hakim_numeric(Q, v, i0)
    m = len(mat)
    if m == 0:
        spectrum = ()
    elif m == 1:
        spectrum = (mat[0][0],)
    else:
        import numpy as np

        arr = np.array(
            [[_to_complex(x) for x in row] for row in mat], dtype=complex
        )
        vals = sorted(np.linalg.eigvals(arr), key=lambda z: (z.real, z.imag))
        spectrum = tuple(complex(z) for z in vals)
    return HakimData(matrix=mat, spectrum=spectrum, chart=i0 + 1, lam=lamp)


# -- closed-form orbit asymptotics ---------------------------------------

@dataclass(frozen=True)
class AsymptoticRow:
    """Predicted decay of one coordinate along the parabolic-curve orbits:
    z_j ~ constant / k^exponent, or only o(1/k^exponent) when the theory
    gives no constant (upper_bound_only)."""

    j: int
    exponent: int
    constant: object
    upper_bound_only: bool = False


def expected_asymptotics(F):
    """The closed-form orbit decay table of a generic unipotent germ.

    Block 1 coordinates decay like 1/k^{mu_1+j-1} with explicit constants
    built from the leading coefficient; same-size-minus-one trailing
    blocks get constants from their own leading coefficients; smaller
    trailing blocks only get an upper bound.
    """
    S = F.structure
    if any(x != _ONE for x in S.lam):
        raise UnsupportedSpectrum(
            "closed-form asymptotics require every block eigenvalue equal to 1"
        )
    if S.has_equal_top_blocks():
        raise NonGeneric(
            "tied leading blocks: the single-curve asymptotics do not apply"
        )
    a = F.leading_quadratic_coefficient()
    if not a:
        raise NonGeneric("leading quadratic coefficient vanishes")
    mu1 = S.mu[0]
    binom = math.comb(2 * mu1 - 2, mu1 - 1)
    rows = []
    for j in range(1, mu1 + 1):
        sign = -1 if (mu1 + j - 1) % 2 else 1
        numer = sign * (2 * mu1 - 1) * binom * math.factorial(mu1 + j - 2)
        rows.append(
            AsymptoticRow(
                j=j, exponent=mu1 + j - 1,
                constant=GaussianRational(numer) / a,
            )
        )
    for l in range(2, S.rho + 1):
        mul = S.mu[l - 1]
        nul = S.nu[l - 1]
        if mul < mu1 - 1:
            for h in range(1, mul + 1):
                rows.append(
                    AsymptoticRow(
                        j=nul + h, exponent=mu1 + h, constant=None,
                        upper_bound_only=True,
                    )
                )
        else:  # mul == mu1 - 1
            al = F.a(nul + mul, 1, 1)
            for h in range(1, mul + 1):
                sign = -1 if (mu1 + h) % 2 else 1
                numer = sign * (2 * mu1 - 1) * (mul + h) * binom
                numer *= math.factorial(mu1 + h - 2)
                rows.append(
                    AsymptoticRow(
                        j=nul + h, exponent=mu1 + h,
                        constant=GaussianRational(numer) * al / a,
                    )
                )
    return tuple(rows)


# -- orbit iteration ------------------------------------------------------

@dataclass(frozen=True)
class OrbitTrace:
    """A finite orbit z^0, ..., z^N stored at fixed binary precision.

    zero_flags marks points with some exactly-zero coordinate (those
    points cannot be pulled back through every chart).  A diverged orbit
    is truncated at the last finite in-radius point, with the offending
    step recorded.
    """

    points: tuple
    precision_bits: int
    source: object = None
    zero_flags: tuple = ()
    diverged: bool = False
    diverged_at: object = None

    def __len__(self):
        return len(self.points)

    @property
    def n(self):
        return len(self.points[0])


def _as_polymap(F):
    m = getattr(F, "map", None)
    if m is not None and hasattr(m, "components"):
        return m
    if hasattr(F, "components"):
        return F
    raise PreconditionViolated("expected a polynomial germ or an input germ")


def _to_mpc(x, prec):
    if isinstance(x, GaussianRational):
        return x.to_mpc(prec)
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


def orbit_iterate(F, z0, steps, precision_bits=128, radius=DEFAULT_RADIUS):
    """Iterate the polynomial germ F from z0 for `steps` steps.

    Arithmetic runs at precision_bits of mpmath precision.  If the orbit
    leaves the sup-norm ball of the given radius (or stops being finite)
    the trace is truncated there and flagged; no exception is raised.
    """
    g = _as_polymap(F)
    n = g.n
    if len(z0) != n:
        raise PreconditionViolated("start point has wrong dimension")
    if steps < 1:
        raise PreconditionViolated("need at least one step")
    with mpmath.workprec(precision_bits):
        terms = []
        for comp in g.components:
            tl = []
            for e, c in sorted(comp.coeffs.items()):
                mono = tuple((i, p) for i, p in enumerate(e) if p)
                tl.append((mono, _to_mpc(c, precision_bits)))
            terms.append(tl)
        z = [_to_mpc(x, precision_bits) for x in z0]
        pts = [tuple(z)]
        flags = [any(not x for x in z)]
        diverged = False
        diverged_at = None
        for step in range(1, steps + 1):
            new = []
            for tl in terms:
                tot = mpmath.mpc(0)
                for mono, c in tl:
                    val = c
                    for i, p in mono:
                        val *= z[i] ** p
                    tot += val
                new.append(tot)
            bad = any(not mpmath.isfinite(x) for x in new)
            if bad or max(abs(x) for x in new) > radius:
                diverged = True
                diverged_at = step
                break
            z = new
            pts.append(tuple(z))
            flags.append(any(not x for x in z))
    return OrbitTrace(
        points=tuple(pts), precision_bits=precision_bits, source=F,
        zero_flags=tuple(flags), diverged=diverged, diverged_at=diverged_at,
    )


def profile_point(F, k, precision_bits=128):
    """Evaluate the predicted leading-order decay profile at time k.

    Components whose constant is known only as an upper bound are seeded
    at zero.  Returns a tuple of mpc values at the requested precision.
    """
    rows = expected_asymptotics(F)
    if k < 1:
        raise PreconditionViolated("profile time must be positive")
    with mpmath.workprec(precision_bits):
        z = []
        for row in rows:
            if row.constant is None:
                z.append(mpmath.mpc(0))
            else:
                c = _to_mpc(row.constant, precision_bits)
                z.append(c / mpmath.mpf(k) ** row.exponent)
        return tuple(z)


def _jordan_backsolve(S, lam, y):
    """Solve (Jordan linear part) x = y by per-block back substitution."""
    x = [None] * S.n
    for l in range(1, S.rho + 1):
        idx = S.block_range(l)
        lv = lam[l - 1]
        acc = mpmath.mpc(0)
        for j in reversed(idx):
            acc = (y[j - 1] - acc) / lv
            x[j - 1] = acc
    return x


def _solve_preimage(S, lam, higher, w, max_iter=80):
    """One inverse step: solve F(z) = w for z near w.

    Fixed-point form z <- J^{-1} (w - H(z)) with H the degree >= 2 part;
    contracts whenever w is small enough that ||J^{-1}|| Lip(H) < 1.
    """
    z = list(w)
    tol = mpmath.mpf(2) ** (8 - mpmath.mp.prec)
    floor = mpmath.mpf(2) ** -120
    for _ in range(max_iter):
        y = []
        for j in range(S.n):
            h = mpmath.mpc(0)
            for mono, c in higher[j]:
                val = c
                for i, p in mono:
                    val *= z[i] ** p
                h += val
            y.append(w[j] - h)
        x = _jordan_backsolve(S, lam, y)
        delta = max(abs(a - b) for a, b in zip(x, z))
        z = x
        scale = max(max(abs(a) for a in z), floor)
        if delta <= tol * scale:
            return z
    raise NonConvergent("inverse step fixed-point iteration stalled")


def standard_orbit_seed(F, k0=50, settle=20000, precision_bits=128,
                        radius=DEFAULT_RADIUS):
    """Starting point of a standard orbit at time k0, refined onto the
    invariant curve by contracting inverse iteration.

    The leading-order profile alone is off the curve by a relative
    O(1/k0), and the transverse modes grow polynomially under the forward
    map, so a profile seed drifts off and eventually escapes.  Running the
    germ backwards contracts exactly those modes: starting from the
    profile far out at K = k0 + settle and taking `settle` preimage steps
    lands on a genuine orbit point at time k0 whose distance to the curve
    is smaller by roughly (k0/K)^p.  Forward iteration from the returned
    point then tracks the predicted decay over a span that grows with
    `settle`, without ever computing a curve parametrization.
    """
    S = getattr(F, "structure", None)
    if S is None:
        raise PreconditionViolated(
            "need an input germ with a declared linear structure")
    if settle < 1:
        raise PreconditionViolated("settle must be positive")
    g = _as_polymap(F)
    work = precision_bits + 32
    with mpmath.workprec(work):
        higher = []
        for comp in g.components:
            tl = []
            for e, c in sorted(comp.coeffs.items()):
                if sum(e) >= 2:
                    mono = tuple((i, p) for i, p in enumerate(e) if p)
                    tl.append((mono, _to_mpc(c, work)))
            higher.append(tl)
        lam = [_to_mpc(lv, work) for lv in S.lam]
        z = list(profile_point(F, k0 + settle, precision_bits=work))
        for _ in range(settle):
            z = _solve_preimage(S, lam, higher, z)
            if max(abs(x) for x in z) > radius:
                raise NonConvergent(
                    "backward refinement left the orbit radius; "
                    "reduce settle or start further out")
    with mpmath.workprec(precision_bits):
        return tuple(mpmath.mpc(x.real, x.imag) for x in z)


# -- power-law fitting ----------------------------------------------------

@dataclass(frozen=True)
class AsymptoticFit:
    """Fitted decay of one coordinate over a declared tail window:
    z_j ~ constant / k^exponent.  exponent_fitted is the raw least-squares
    slope; exponent is snapped to the nearest integer when within
    EXPONENT_SNAP of it.  power_law records whether the decay matched an
    integer power law: the exponent snapped AND the relative spread of
    k^exponent z_j over the window stayed below POWERLAW_RESIDUAL_TOL
    (slow corrections such as log factors leave the raw slope strictly
    between integers, so they fail the first condition)."""

    j: int
    exponent: float
    exponent_fitted: float
    constant: complex
    residual: float
    power_law: bool
    window: int


def asymptotic_fit(trace, j, window=200, k0=0):
    """Fit |z_j^k| ~ |c| k^{-m} on the last `window` points of the trace.

    The iteration index of trace.points[i] is k0 + i; pass the k0 used to
    seed the orbit so the fitted constants refer to the true index.
    """
    if trace.diverged:
        raise NonConvergent(
            "orbit diverged; no asymptotic fit", step=trace.diverged_at
        )
    pts = trace.points
    m = len(pts)
    if not 1 <= j <= trace.n:
        raise PreconditionViolated("coordinate index out of range")
    start = m - window
    if start < (1 if k0 == 0 else 0):
        raise InsufficientData(
            "trace has %d points; cannot form a %d-point window" % (m, window)
        )
    ks, vals = [], []
    for i in range(start, m):
        x = pts[i][j - 1]
        ax = float(abs(x))
        if ax > 0.0:
            ks.append(float(k0 + i))
            vals.append((ax, complex(x)))
    if len(ks) < 20:
        raise InsufficientData("fewer than 20 usable points in the window")
    half = len(vals) // 2
    first = sum(v[0] for v in vals[:half]) / half
    second = sum(v[0] for v in vals[half:]) / (len(vals) - half)
    if not second < first:
        raise NonConvergent("window norms are not decreasing")
    xs = [math.log(k) for k in ks]
    ys = [math.log(v[0]) for v in vals]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    var = sum((x - xbar) ** 2 for x in xs)
    cov = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = cov / var
    fitted = -slope
    snapped_ok = abs(fitted - round(fitted)) < EXPONENT_SNAP
    snapped = float(round(fitted)) if snapped_ok else fitted
    scaled = [v[1] * (k ** snapped) for k, v in zip(ks, vals)]
    const = complex(
        statistics.median(c.real for c in scaled),
        statistics.median(c.imag for c in scaled),
    )
    denom = max(abs(const), max(abs(c) for c in scaled), 1e-300)
    residual = max(abs(c - const) for c in scaled) / denom
    return AsymptoticFit(
        j=j, exponent=snapped, exponent_fitted=fitted, constant=const,
        residual=residual,
        power_law=snapped_ok and residual <= POWERLAW_RESIDUAL_TOL,
        window=window,
    )


# -- regularity through the tower ----------------------------------------

@dataclass(frozen=True)
class StageVerdict:
    stage: int
    verdict: str          # first-kind | second-kind | not-regular | inconclusive
    limit: object = None  # direction rep (second kind) or limit point (first kind)
    note: str = ""


@dataclass(frozen=True)
class RegularityReport:
    """Stage-by-stage behaviour of an orbit pulled back through the tower.

    Verdicts run r = 0..n.  Stage 0 records whether the direction of the
    base orbit converges; stage r whether the stage-r chart copy tends to
    the chart center with converging direction (second kind) or to a
    point off the center (first kind).  classification is one of standard,
    regular-nonstandard, irregular, inconclusive.
    """

    structure: object
    verdicts: tuple
    classification: str
    standard: object = None
    matched_direction: object = None
    match_distance: object = None
    notes: tuple = ()

    def verdict(self, r):
        return self.verdicts[r].verdict


def _windows(seq, width, maxwin=6):
    """The trailing full windows of seq, oldest first, at most maxwin."""
    total = len(seq) // width
    use = min(total, maxwin)
    if use < 2:
        return []
    out = []
    for t in range(use, 0, -1):
        hi = len(seq) - (t - 1) * width
        out.append(seq[hi - width:hi])
    return out


def _mean_vec(vecs):
    n = len(vecs[0])
    return tuple(sum(v[i] for v in vecs) / len(vecs) for i in range(n))


def _direction_cauchy(points, tol=None, width=None):
    """Test projective convergence of a sequence of nonzero vectors.

    Each point is replaced by its canonical representative, window means
    are formed, and the distance between the last two means is compared
    against the tolerance (DIRECTION_TOL unless overridden).  Window means
    alone would average away a direction that keeps oscillating, so the
    spread of the last window around its mean must also stay below
    DIRECTION_SCATTER_TOL.  Returns (converged, last mean rep, distances).
    """
    tol = DIRECTION_TOL if tol is None else tol
    width = REG_WINDOW if width is None else width
    reps = []
    for w in points:
        vals = [_to_complex(x) for x in w]
        if max(abs(x) for x in vals) == 0.0:
            continue
        rep, _ = _rep(vals)
        reps.append(rep)
    wins = _windows(reps, width)
    if not wins:
        return None, None, ()
    means = [_mean_vec(w) for w in wins]
    dists = tuple(
        projective_distance(means[t], means[t + 1]) for t in range(len(means) - 1)
    )
    scatter = max(projective_distance(r, means[-1]) for r in wins[-1])
    rep, _ = _rep(means[-1])
    converged = dists[-1] < tol and scatter < DIRECTION_SCATTER_TOL
    return converged, rep, dists


def _log_slope(ks, vals):
    pts = [(math.log(k), math.log(v)) for k, v in zip(ks, vals) if v > 0.0]
    if len(pts) < 10:
        return None
    xbar = sum(p[0] for p in pts) / len(pts)
    ybar = sum(p[1] for p in pts) / len(pts)
    var = sum((p[0] - xbar) ** 2 for p in pts)
    if var == 0.0:
        return None
    return sum((p[0] - xbar) * (p[1] - ybar) for p in pts) / var


def _extrapolated_direction(ks, ws):
    """Direction limit of a vanishing sequence, refined by fitting each
    affine coordinate as A + B/k and keeping the intercepts."""
    tail = min(len(ws), 1000)
    ks = ks[-tail:]
    ws = [[_to_complex(x) for x in w] for w in ws[-tail:]]
    meanrep = _mean_vec([_rep(w)[0] for w in ws[-REG_WINDOW:]])
    i0 = _argmax_abs(meanrep)
    xs, us = [], []
    for k, w in zip(ks, ws):
        if w[i0] == 0:
            continue
        xs.append(1.0 / k)
        us.append([x / w[i0] for x in w])
    if len(xs) < 10:
        return meanrep
    s0 = float(len(xs))
    s1 = sum(xs)
    s2 = sum(x * x for x in xs)
    det = s0 * s2 - s1 * s1
    if det == 0.0:
        return meanrep
    out = []
    for jj in range(len(meanrep)):
        t0 = sum(u[jj] for u in us)
        t1 = sum(u[jj] * x for u, x in zip(us, xs))
        out.append((s2 * t0 - s1 * t1) / det)
    out[i0] = 1.0 + 0.0j
    return tuple(out)


def _reference_directions(trace, S):
    src = trace.source
    if src is None or getattr(src, "structure", None) is None:
        return None, "no source germ attached to the trace"
    if src.structure != S:
        return None, "trace source has a different block structure"
    try:
        Q = lifted_quadratic_part(lift(src, S.ell, 2))
        dirs = characteristic_directions(Q, mode="auto", structure=S)
        dirs = allowable_filter(dirs, S)
    except BlowdynError as e:
        return None, "reference directions unavailable: %s" % e
    if not dirs:
        return None, "no allowable reference direction exists"
    return dirs, None


def regularity_classify(trace, structure, k0=0, directions=None,
                        tau=None, window=None):
    """Classify an orbit through the regularity hierarchy of the tower.

    Only single-block structures are handled (the tower then has stages
    1..n and the hierarchy tests one chart per stage).  Points are pulled
    back with pi_inverse stage by stage; at each stage the chart copy must
    either approach a point away from the chart center (first kind, which
    then persists) or approach the center with converging direction
    (second kind, which sends the test to the next stage).  An orbit
    second-kind through stage n is standard when its stage-n direction
    matches an allowable fixed direction of the lifted quadratic part
    within STANDARD_MATCH_TOL; reference directions are taken from the
    germ attached to the trace unless supplied explicitly.  tau and window
    override DIRECTION_TOL and REG_WINDOW for the windowed verdicts.
    """
    S = structure
    tol = DIRECTION_TOL if tau is None else tau
    width = REG_WINDOW if window is None else window
    if width < 5:
        raise PreconditionViolated("window width must be at least 5")
    if S.rho != 1:
        raise PreconditionViolated(
            "regularity classification is implemented for single-block structures"
        )
    n = S.n
    if trace.n != n:
        raise PreconditionViolated("trace dimension does not match the structure")
    pts = trace.points
    if len(pts) < 3 * width:
        raise InsufficientData(
            "need at least %d points for windowed verdicts" % (3 * width)
        )
    notes = []
    if trace.diverged:
        notes.append("trace truncated by divergence at step %s" % trace.diverged_at)
    base = []
    for i, z in enumerate(pts):
        k = k0 + i
        if k < 1:
            continue
        if all(not x for x in z):
            continue
        base.append((k, z))
    verdicts = []

    def fill_rest(from_stage, verdict, note):
        for r in range(from_stage, n + 1):
            verdicts.append(StageVerdict(r, verdict, None, note))

    conv, rep0, _ = _direction_cauchy([z for _, z in base], tol, width)
    if conv is None:
        fill_rest(0, "inconclusive", "not enough nonzero points for windows")
        return RegularityReport(S, tuple(verdicts), "inconclusive", None,
                                notes=tuple(notes))
    if not conv:
        verdicts.append(StageVerdict(0, "not-regular", None,
                                     "direction of the base orbit does not settle"))
        fill_rest(1, "not-regular", "fails already at stage 0")
        return RegularityReport(S, tuple(verdicts), "irregular", False,
                                notes=tuple(notes))
    verdicts.append(StageVerdict(0, "second-kind", rep0,
                                 "direction of the base orbit converges"))

    frozen_at = None
    last_lifted = None
    for r in range(1, n + 1):
        if frozen_at is not None:
            verdicts.append(StageVerdict(r, "first-kind", None,
                                         "inherited from stage %d" % frozen_at))
            continue
        pf = projection_formulas(S, r)
        lifted = []
        skipped = 0
        for k, z in base:
            try:
                w = pi_inverse(S, r, z, formulas=pf)
            except ZeroCoordinate:
                skipped += 1
                continue
            lifted.append((k, w))
        if skipped:
            notes.append("stage %d: %d points on coordinate hyperplanes skipped"
                         % (r, skipped))
        if len(lifted) < 3 * width:
            verdicts.append(StageVerdict(r, "inconclusive", None,
                                         "too few liftable points"))
            fill_rest(r + 1, "inconclusive", "undecided at stage %d" % r)
            return RegularityReport(S, tuple(verdicts), "inconclusive", None,
                                    notes=tuple(notes))
        ks = [k for k, _ in lifted]
        norms = [max(float(abs(_to_complex(x))) for x in w) for _, w in lifted]
        tail = min(len(lifted), 6 * width)
        slope = _log_slope(ks[-tail:], norms[-tail:])
        if slope is None:
            verdicts.append(StageVerdict(r, "inconclusive", None,
                                         "degenerate norm data"))
            fill_rest(r + 1, "inconclusive", "undecided at stage %d" % r)
            return RegularityReport(S, tuple(verdicts), "inconclusive", None,
                                    notes=tuple(notes))
        if slope < -0.2:
            conv, rep, _ = _direction_cauchy([w for _, w in lifted], tol, width)
            if conv is None:
                verdicts.append(StageVerdict(r, "inconclusive", None,
                                             "not enough points for windows"))
                fill_rest(r + 1, "inconclusive", "undecided at stage %d" % r)
                return RegularityReport(S, tuple(verdicts), "inconclusive", None,
                                        notes=tuple(notes))
            if not conv:
                verdicts.append(StageVerdict(
                    r, "not-regular", None,
                    "chart copy vanishes but its direction does not settle"))
                fill_rest(r + 1, "not-regular", "fails at stage %d" % r)
                return RegularityReport(S, tuple(verdicts), "irregular", False,
                                        notes=tuple(notes))
            verdicts.append(StageVerdict(r, "second-kind", rep,
                                         "chart copy vanishes with settling direction"))
            last_lifted = lifted
            continue
        if slope > 0.2:
            verdicts.append(StageVerdict(
                r, "first-kind", None,
                "chart copy grows: the limit lies outside this chart"))
            frozen_at = r
            continue
        if abs(slope) <= 0.05:
            vecs = [[_to_complex(x) for x in w] for _, w in lifted]
            wins = _windows(vecs, width)
            if wins:
                means = [_mean_vec(w) for w in wins]
                scale = max(abs(x) for x in means[-1])
                gap = max(
                    abs(a - b) for a, b in zip(means[-1], means[-2])
                ) if len(means) >= 2 else None
                if scale > 1e-8 and gap is not None and gap / scale < tol:
                    verdicts.append(StageVerdict(
                        r, "first-kind", tuple(means[-1]),
                        "chart copy settles away from the chart center"))
                    frozen_at = r
                    continue
        verdicts.append(StageVerdict(r, "inconclusive", None,
                                     "norm trend is ambiguous (slope %.3f)" % slope))
        fill_rest(r + 1, "inconclusive", "undecided at stage %d" % r)
        return RegularityReport(S, tuple(verdicts), "inconclusive", None,
                                notes=tuple(notes))

    # every stage decided first or second kind: the orbit is regular
    if verdicts[n].verdict != "second-kind":
        notes.append("regular of first kind from stage %d on; no direction to "
                     "match against the fixed directions" % frozen_at)
        return RegularityReport(S, tuple(verdicts), "regular-nonstandard", False,
                                notes=tuple(notes))
    v_est = _extrapolated_direction([k for k, _ in last_lifted],
                                    [w for _, w in last_lifted])
    dirs = directions
    if dirs is None:
        dirs, why = _reference_directions(trace, S)
        if dirs is None:
            notes.append("standardness not evaluated: %s" % why)
            return RegularityReport(S, tuple(verdicts), "inconclusive", None,
                                    notes=tuple(notes))
    best = None
    best_d = None
    for d in dirs:
        dist = projective_distance(v_est, d.v)
        if best is None or dist < best:
            best, best_d = dist, d
    if best is not None and best < STANDARD_MATCH_TOL:
        return RegularityReport(S, tuple(verdicts), "standard", True,
                                matched_direction=best_d, match_distance=best,
                                notes=tuple(notes))
    return RegularityReport(S, tuple(verdicts), "regular-nonstandard", False,
                            matched_direction=best_d, match_distance=best,
                            notes=tuple(notes))


# -- Cesaro-type limit ----------------------------------------------------

@dataclass(frozen=True)
class CesaroEstimate:
    limit: complex      # empirical lim 1/(k w_k)
    c: complex          # empirical lim u_k / w_k
    agreement: float    # |limit + c| relative to |c|
    samples: int


def cesaro_limit(w, u, window=200, k0=0):
    """Estimate lim 1/(k w_k) for a sequence w_{k+1} = w_k (1 + u_k) + ...

    w[i] is the iterate at time k0 + i (default: w[0] is the start, time
    0).  The estimate is the tail median of 1/(k w_k); c is the tail
    median of u_k/w_k; when the recurrence really is of the stated shape
    the two satisfy limit = -c, and `agreement` measures how closely
    they do.
    """
    if len(w) != len(u):
        raise PreconditionViolated("sequences have different lengths")
    window = min(window, len(w) // 4)
    if window < 10:
        raise InsufficientData("sequences too short for a tail window")
    aw = [abs(_to_complex(x)) for x in w]
    if any(x == 0.0 for x in aw):
        raise PreconditionViolated("w must be nonzero along the sequence")
    first = sum(aw[:window]) / window
    last = sum(aw[-window:]) / window
    if not last < 0.5 * first:
        raise PreconditionViolated("|w_k| does not tend to zero")
    wc = [_to_complex(x) for x in w]
    uc = [_to_complex(x) for x in u]
    ts, cs = [], []
    for i in range(len(w) - window, len(w)):
        k = k0 + i
        if k < 1:
            continue
        ts.append(1.0 / (k * wc[i]))
        cs.append(uc[i] / wc[i])
    limit = complex(statistics.median(t.real for t in ts),
                    statistics.median(t.imag for t in ts))
    c = complex(statistics.median(x.real for x in cs),
                statistics.median(x.imag for x in cs))
    agreement = abs(limit + c) / max(abs(c), 1e-300)
    return CesaroEstimate(limit=limit, c=c, agreement=agreement, samples=len(ts))


# -- parabolic-curve classification --------------------------------------

@dataclass(frozen=True)
class ClassificationReport:
    """Outcome of the parabolic-curve analysis of a unipotent germ.

    kind is one of generic, planar-nongeneric, early-stage, unresolved.
    curves counts the parabolic curves the analysis certifies (None when
    unresolved); stage is the blow-up stage where the certifying direction
    lives.  directions holds the fixed directions involved, asymptotics
    the closed-form decay table (generic case), invariants the planar
    refined pair when applicable.
    """

    kind: str
    curves: object = None
    stage: object = None
    directions: tuple = ()
    asymptotics: tuple = ()
    invariants: object = None
    reason: str = ""
    notes: tuple = ()


def _unresolved(reason, invariants=None):
    return ClassificationReport(kind="unresolved", reason=reason,
                                invariants=invariants)


def parabolic_classification(F):
    """Decide what the blow-up analysis certifies about parabolic curves.

    Requires every block eigenvalue equal to 1.  Branches:
    - generic leading coefficient: one curve, explicit direction and decay;
    - planar nongeneric: the refined invariant pair decides one or two
      curves (or stays silent when both vanish);
    - single block with vanishing leading coefficient: when the previous
      stage's coefficient survives, the tower ends one stage early with a
      diagonalizable linear part and one curve;
    - everything else is reported unresolved, never guessed.
    """
    S = F.structure
    if any(x != _ONE for x in S.lam):
        raise UnsupportedSpectrum(
            "classification covers germs with every block eigenvalue equal to 1"
        )
    if S.has_equal_top_blocks():
        return _unresolved(
            "tied leading blocks: no allowable nondegenerate direction exists "
            "at the final stage"
        )
    a = F.leading_quadratic_coefficient()
    if a:
        L = lift(F, S.ell, 2)
        Q = lifted_quadratic_part(L)
        dirs = characteristic_directions(Q, mode="structured", structure=S)
        return ClassificationReport(
            kind="generic", curves=1, stage=S.ell,
            directions=tuple(dirs), asymptotics=expected_asymptotics(F),
            notes=("one parabolic curve tangent to the first axis",),
        )
    if S.n == 2:
        from .normalform import invariants_2d

        if F.map.cap < 3:
            raise PreconditionViolated(
                "planar nongeneric classification needs cubic terms (cap >= 3)"
            )
        inv = invariants_2d(F)
        eps, eta = inv.epsilon, inv.eta
        if not eps and not eta:
            return _unresolved(
                "both refined invariants vanish; the analysis does not decide "
                "this case", invariants=inv,
            )
        a111 = F.a(1, 1, 1)
        a212 = F.a(2, 1, 2)
        root = gaussian_sqrt(eta)
        notes = []
        if root is not None:
            branches = [root] if not root else [root, -root]
            half = GaussianRational(Fraction(1, 2))
        else:
            rc = cmath.sqrt(complex(eta.to_complex()))
            branches = [rc, -rc]
            a111 = a111.to_complex()
            a212 = a212.to_complex()
            eps = eps.to_complex()
            half = 0.5
            notes.append("square root of the second invariant is irrational; "
                         "directions reported in floating point")
        dirs = []
        for s in branches:
            t = (a212 - a111 + s) * half
            lam = (eps + s) * half
            if isinstance(lam, GaussianRational):
                deg = not lam
                one, att = _ONE, None
                if not deg:
                    att = (-2 * s) / (eps + s)
            else:
                deg = abs(lam) <= DEGENERATE_EPS
                one, att = 1.0 + 0.0j, None
                if not deg:
                    att = (-2.0 * s) / (eps + s)
            dirs.append(CharDirection(
                v=(one, t), lam=lam, degenerate=deg, mode="closed-form",
                allowable=True,
                hakim_spectrum=None if att is None else (att,),
            ))
        curves = sum(1 for d in dirs if not d.degenerate)
        return ClassificationReport(
            kind="planar-nongeneric", curves=curves, stage=1,
            directions=tuple(dirs), invariants=inv, notes=tuple(notes),
        )
    if S.rho == 1:
        b = F.a(S.mu[0] - 1, 1, 1)
        if b:
            stage = S.mu[0] - 1
            M, _ = lifted_linear_part(lift(F, stage, 2))
            if not is_diagonalizable(M):
                raise BlowdynError(
                    "stage %d linear part unexpectedly non-diagonalizable" % stage
                )
            return ClassificationReport(
                kind="early-stage", curves=1, stage=stage,
                notes=("the stage-%d lift already has diagonalizable linear "
                       "part; one parabolic curve arises there" % stage,),
            )
        return _unresolved(
            "leading quadratic coefficients at the last two stages both vanish"
        )
    return _unresolved(
        "leading quadratic coefficient vanishes (several blocks, untied tops)"
    )
