"""Quadratic normal forms at a fixed point with a single unipotent Jordan block.

For a germ F(z) = Jz + P2(z) + O3, where J is the n-dimensional Jordan block
with eigenvalue 1, there is a degree-2 polynomial change of coordinates chi
such that chi^{-1} o F o chi has every component's quadratic form diagonal,
with no square terms beyond index ceil(n/2), and the last component carrying
at most one square term.  Everything here is exact over the Gaussian
rationals.

The two building blocks operate on symmetric coefficient matrices:

* ``eliminate_offdiagonal`` kills all off-diagonal entries of one quadratic
  form, and the diagonal entries beyond ceil(n/2), by subtracting the image
  of a symmetric matrix B under the shift-correction operator
  ``L(B)_{hk} = B_{h-1,k-1} + B_{h,k-1} + B_{h-1,k}``.  The (1,1) entry can
  never be altered this way, and the surviving diagonal entries do not
  depend on which solution B is picked.
* ``reduce_diagonal_tail`` additionally kills the surviving diagonal of the
  *last* component using an upper-triangular Toeplitz change of variables,
  leaving at most the single earliest square term.
"""

from dataclasses import dataclass

from .errors import BlowdynError, GenericInput, NotJordan, PreconditionViolated
from .exactalg import mat_eq, qi, solve_linear
from .scalars import QI_ONE, QI_ZERO, RATIONAL
from .series import PolyMapGerm, TruncatedSeries, germ_inverse


def diagonal_cutoff(n):
    """Largest index that may carry a square term in the normal form."""
    return (n + 1) // 2


# ---------------------------------------------------------------------------
# symmetric coefficient matrices


def _symmetric(rows):
    a = tuple(tuple(qi(x) for x in row) for row in rows)
    n = len(a)
    for row in a:
        if len(row) != n:
            raise PreconditionViolated("quadratic form matrix must be square")
    for h in range(n):
        for k in range(h + 1, n):
            if a[h][k] != a[k][h]:
                raise PreconditionViolated(
                    "quadratic form matrix must be symmetric (entries %d,%d)"
                    % (h + 1, k + 1)
                )
    return a


def correction_image(b):
    """Apply the shift-correction operator L to a symmetric matrix."""
    b = _symmetric(b)
    n = len(b)

    def ent(i, j):
        return b[i][j] if i >= 0 and j >= 0 else QI_ZERO

    return tuple(
        tuple(
            ent(h - 1, k - 1) + ent(h, k - 1) + ent(h - 1, k) for k in range(n)
        )
        for h in range(n)
    )


def toeplitz_upper(alpha):
    """Upper-triangular Toeplitz matrix with first row alpha; it commutes
    with the Jordan block whenever alpha_0 != 0."""
    alpha = [qi(x) for x in alpha]
    n = len(alpha)
    return tuple(
        tuple(alpha[k - h] if k >= h else QI_ZERO for k in range(n))
        for h in range(n)
    )


def conjugate_form(a, t):
    """Coefficient matrix of z -> phi(Tz), i.e. T^t A T."""
    n = len(a)
    return tuple(
        tuple(
            sum(
                (t[i][h] * a[i][j] * t[j][k] for i in range(n) for j in range(n)),
                QI_ZERO,
            )
            for k in range(n)
        )
        for h in range(n)
    )


def form_series(b, cap, field=RATIONAL):
    """The quadratic form with symmetric matrix b as a truncated series."""
    n = len(b)
    s = TruncatedSeries.zero(n, cap, field)
    for h in range(n):
        for k in range(h, n):
            c = b[h][k] if h == k else b[h][k] + b[k][h]
            if c:
                e = [0] * n
                e[h] += 1
                e[k] += 1
                s = s + TruncatedSeries.monomial(e, n, cap, field, coeff=c)
    return s


def form_value(b, v):
    n = len(b)
    v = [qi(x) for x in v]
    return sum(
        (b[h][k] * v[h] * v[k] for h in range(n) for k in range(n)), QI_ZERO
    )


@dataclass(frozen=True)
class QuadraticTuple:
    """The n symmetric matrices of a germ's quadratic part, with optional
    third-order data along the first axis (the z_1^3 coefficients)."""

    matrices: tuple
    cubic_e1: tuple = None

    def __post_init__(self):
        mats = tuple(_symmetric(m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        n = self.n
        for m in mats:
            if len(m) != n:
                raise PreconditionViolated("inconsistent dimensions in quadratic data")
        if self.cubic_e1 is not None:
            cub = tuple(qi(x) for x in self.cubic_e1)
            if len(cub) != n:
                raise PreconditionViolated("cubic data must have one entry per component")
            object.__setattr__(self, "cubic_e1", cub)

    @property
    def n(self):
        return len(self.matrices)

    @classmethod
    def from_germ(cls, germ):
        germ = _as_germ(germ)
        n = germ.n
        mats = [
            [[germ.quadratic_coefficient(j, h, k) for k in range(1, n + 1)]
             for h in range(1, n + 1)]
            for j in range(1, n + 1)
        ]
        cubic = None
        if germ.cap >= 3:
            e1 = [3] + [0] * (n - 1)
            cubic = [germ.components[j].coefficient(e1) for j in range(n)]
        return cls(tuple(map(tuple, (map(tuple, m) for m in mats))), cubic)

    def matrix(self, j):
        return self.matrices[j - 1]

    def entry(self, j, h, k):
        return self.matrices[j - 1][h - 1][k - 1]

    def value(self, j, v):
        return form_value(self.matrices[j - 1], v)


# ---------------------------------------------------------------------------
# the two reduction steps


def eliminate_offdiagonal(phi):
    """Pick a symmetric B with phi - L(B) diagonal and free of square terms
    beyond index ceil(n/2).  Returns (B, reduced matrix).

    The (1,1) entry is preserved; the surviving diagonal entries up to the
    cutoff are the same for every valid choice of B, so setting the free
    unknowns to zero keeps the output deterministic without losing anything.
    """
    a = _symmetric(phi)
    n = len(a)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {p: c for c, p in enumerate(pairs)}

    def lrow(h, k):
        row = [QI_ZERO] * len(pairs)
        for (i, j) in ((h - 1, k - 1), (h, k - 1), (h - 1, k)):
            if i >= 0 and j >= 0:
                p = (i, j) if i <= j else (j, i)
                row[index[p]] = row[index[p]] + QI_ONE
        return row

    rows, rhs = [], []
    for h in range(n):
        for k in range(h + 1, n):
            rows.append(lrow(h, k))
            rhs.append(a[h][k])
    for h in range(diagonal_cutoff(n), n):
        rows.append(lrow(h, h))
        rhs.append(a[h][h])
    sol = solve_linear(rows, rhs)
    if sol is None:  # the system is always consistent; defensive only
        raise BlowdynError("off-diagonal elimination system is inconsistent")
    b = [[QI_ZERO] * n for _ in range(n)]
    for (i, j), c in zip(pairs, sol):
        b[i][j] = c
        b[j][i] = c
    b = tuple(tuple(row) for row in b)
    l = correction_image(b)
    red = tuple(
        tuple(a[h][k] - l[h][k] for k in range(n)) for h in range(n)
    )
    _check_trimmed_diagonal(red, keep_first=True)
    if red[0][0] != a[0][0]:
        raise BlowdynError("leading square coefficient was not preserved")
    return b, red


def _check_trimmed_diagonal(red, keep_first):
    n = len(red)
    cut = diagonal_cutoff(n)
    for h in range(n):
        for k in range(n):
            if h != k and red[h][k]:
                raise BlowdynError(
                    "off-diagonal entry (%d,%d) survived elimination" % (h + 1, k + 1)
                )
        if h >= cut and red[h][h]:
            raise BlowdynError(
                "square term beyond the cutoff survived at index %d" % (h + 1,)
            )


def reduce_diagonal_tail(phi):
    """Reduce a diagonal quadratic form to its earliest square term.

    Returns (alpha, B, reduced): with T the Toeplitz matrix of alpha, the
    matrix ``T^t . phi . T - L(B)`` equals reduced, which is
    alpha_0^2 * eps_{j0} at position (j0, j0) when the earliest nonzero
    diagonal index j0 is at most ceil(n/2), and zero otherwise.  alpha_0 is
    fixed to 1 and the odd-index alphas stay 0; each even-index alpha is
    determined by an exact secant solve, valid because the surviving square
    term at position j0+m depends affinely on alpha_{2m}.
    """
    a = _symmetric(phi)
    n = len(a)
    for h in range(n):
        for k in range(n):
            if h != k and a[h][k]:
                raise PreconditionViolated("diagonal quadratic form expected")
    eps = [a[j][j] for j in range(n)]
    alpha = [QI_ONE] + [QI_ZERO] * (n - 1)
    j0 = next((j for j, e in enumerate(eps) if e), None)
    zero = tuple(tuple(QI_ZERO for _ in range(n)) for _ in range(n))
    if j0 is None:
        return tuple(alpha), zero, zero
    cut = diagonal_cutoff(n)

    def retained(al, pos):
        t = toeplitz_upper(al)
        _, red = eliminate_offdiagonal(conjugate_form(a, t))
        return red[pos][pos]

    for pos in range(j0 + 1, cut):
        idx = 2 * (pos - j0)
        g0 = retained(alpha, pos)
        probe = list(alpha)
        probe[idx] = probe[idx] + QI_ONE
        slope = retained(probe, pos) - g0
        if slope:
            alpha[idx] = alpha[idx] - g0 / slope
        elif g0:
            raise BlowdynError(
                "surviving square term at index %d cannot be removed" % (pos + 1,)
            )
    t = toeplitz_upper(alpha)
    b, red = eliminate_offdiagonal(conjugate_form(a, t))
    expect_val = alpha[0] * alpha[0] * eps[j0] if j0 < cut else QI_ZERO
    for h in range(n):
        for k in range(n):
            want = expect_val if (h == k == j0 and j0 < cut) else QI_ZERO
            if red[h][k] != want:
                raise BlowdynError(
                    "diagonal tail reduction left an unexpected entry at (%d,%d)"
                    % (h + 1, k + 1)
                )
    return tuple(alpha), b, red


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class NormalFormResult:
    normalized: PolyMapGerm
    conjugator: PolyMapGerm  # degree-2 polynomial germ
    alpha: tuple
    epsilon: tuple  # epsilon[h-1][k-1] = coefficient of z_k^2 in component h
    j0: int  # 1-based index of the surviving square in the last component, or None

    @property
    def n(self):
        return self.normalized.n

    def epsilon_entry(self, h, k):
        return self.epsilon[h - 1][k - 1]


def _as_germ(f):
    if isinstance(f, PolyMapGerm):
        return f
    inner = getattr(f, "map", None)
    if isinstance(inner, PolyMapGerm):
        return inner
    raise PreconditionViolated("expected a polynomial germ or a wrapper exposing one")


def _require_unipotent_block(g):
    n = g.n
    lin = g.linear_matrix()
    for i in range(n):
        for j in range(n):
            want = QI_ONE if (i == j or j == i + 1) else QI_ZERO
            if lin[i][j] != want:
                raise NotJordan(
                    "linear part is not the unipotent Jordan block: entry (%d,%d)"
                    % (i + 1, j + 1)
                )


def _quad_matrix(g, j):
    n = g.n
    return tuple(
        tuple(g.quadratic_coefficient(j, h, k) for k in range(1, n + 1))
        for h in range(1, n + 1)
    )


def _jet_map(n, cap, field, linear_rows, quad_forms):
    """Polynomial germ with the given linear part plus one quadratic form per
    selected component (1-based keys)."""
    comps = []
    for i in range(n):
        s = TruncatedSeries.zero(n, cap, field)
        for j in range(n):
            if linear_rows[i][j]:
                s = s + TruncatedSeries.variable(j + 1, n, cap, field) * linear_rows[i][j]
        if i + 1 in quad_forms:
            s = s + form_series(quad_forms[i + 1], cap, field)
        comps.append(s)
    return PolyMapGerm(comps)


def _conjugate(g, chi, cap):
    return germ_inverse(chi, cap).compose(g.compose(chi))


def normal_form(F):
    """Conjugate a germ with unipotent Jordan linear part into quadratic
    normal form.  Exact; the conjugator is a degree-2 polynomial map whose
    linear part is upper Toeplitz."""
    g = _as_germ(F)
    n, cap, field = g.n, g.cap, g.field
    if field != RATIONAL:
        raise PreconditionViolated("normal form reduction requires exact input")
    if n < 2:
        raise PreconditionViolated("dimension must be at least 2")
    if cap < 2:
        raise PreconditionViolated("truncation cap must be at least 2")
    _require_unipotent_block(g)

    identity_rows = tuple(
        tuple(QI_ONE if i == j else QI_ZERO for j in range(n)) for i in range(n)
    )
    steps = []
    work = g

    # diagonalize the last component's quadratic form
    psi_a, red_a = eliminate_offdiagonal(_quad_matrix(g, n))
    chi_a = _jet_map(n, cap, field, identity_rows, {n: psi_a})
    work = _conjugate(work, chi_a, cap)
    steps.append(chi_a)
    if not mat_eq(_quad_matrix(work, n), red_a):
        raise BlowdynError("last component did not diagonalize as predicted")

    # Toeplitz reduction of that diagonal to a single square term
    alpha, psi_b, red_b = reduce_diagonal_tail(red_a)
    chi_b = _jet_map(n, cap, field, toeplitz_upper(alpha), {n: psi_b})
    work = _conjugate(work, chi_b, cap)
    steps.append(chi_b)
    inv_alpha0 = QI_ONE / alpha[0]
    target_last = tuple(tuple(inv_alpha0 * x for x in row) for row in red_b)
    if not mat_eq(_quad_matrix(work, n), target_last):
        raise BlowdynError("diagonal tail reduction did not land as predicted")
    _require_unipotent_block(work)

    # sweep the remaining components; cleaning component h pollutes only h-1
    for h in range(n - 1, 0, -1):
        psi_h, red_h = eliminate_offdiagonal(_quad_matrix(work, h))
        chi_h = _jet_map(n, cap, field, identity_rows, {h: psi_h})
        work = _conjugate(work, chi_h, cap)
        steps.append(chi_h)
        if not mat_eq(_quad_matrix(work, h), red_h):
            raise BlowdynError("component %d did not reduce as predicted" % h)
        if not mat_eq(_quad_matrix(work, n), target_last):
            raise BlowdynError("sweep disturbed the last component")

    chi = steps[0]
    for step in steps[1:]:
        chi = chi.compose(step)
    chi = chi.truncated(2).as_polynomial_cap(cap)

    epsilon = tuple(
        tuple(work.quadratic_coefficient(h, k, k) for k in range(1, n + 1))
        for h in range(1, n + 1)
    )
    cut = diagonal_cutoff(n)
    for h in range(1, n + 1):
        m = _quad_matrix(work, h)
        for i in range(n):
            for j in range(n):
                if i != j and m[i][j]:
                    raise BlowdynError(
                        "normal form shape violated in component %d at (%d,%d)"
                        % (h, i + 1, j + 1)
                    )
            if h < n and i >= cut and m[i][i]:
                raise BlowdynError(
                    "square term beyond the cutoff in component %d at index %d"
                    % (h, i + 1)
                )
    last = _quad_matrix(work, n)
    nonzero = [i for i in range(n) if last[i][i]]
    if len(nonzero) > 1:
        raise BlowdynError("last component carries more than one square term")
    j0 = nonzero[0] + 1 if nonzero else None
    if j0 is not None and j0 > cut:
        raise BlowdynError("surviving square term sits beyond the cutoff")
    return NormalFormResult(work, chi, alpha, epsilon, j0)


def epsilon_vector(nf):
    """The z_1^2 coefficients of all components of the normal form; this
    vector is determined by the original germ up to one overall factor."""
    return tuple(nf.epsilon[h][0] for h in range(nf.n))


def leading_epsilon_column(nf):
    """First index k whose square z_k^2 appears anywhere in the normal form,
    with the tail (components 2k-1..n) of that coefficient column.  Returns
    (None, ()) when the whole quadratic part vanishes."""
    n = nf.n
    for k in range(1, diagonal_cutoff(n) + 1):
        col = tuple(nf.epsilon[h][k - 1] for h in range(n))
        if any(col):
            return k, col[2 * k - 2:]
    return None, ()


# ---------------------------------------------------------------------------
# planar invariants


@dataclass(frozen=True)
class Invariants2D:
    epsilon: object
    eta: object
    xi: object  # None when epsilon vanishes


def invariants_2d(F):
    """The two planar coefficients (and their ratio) that survive every
    Jordan-preserving change of coordinates, for 2D germs whose last
    component has no z_1^2 term.

    epsilon scales linearly and eta quadratically under z -> alpha_0 z, so
    xi = eta/epsilon^2 is a genuine invariant when epsilon != 0.  The values
    are cross-checked against the same data read off the computed normal
    form; any disagreement raises.
    """
    g = _as_germ(F)
    if g.n != 2:
        raise PreconditionViolated("planar invariants require dimension 2")
    if g.cap < 3:
        raise PreconditionViolated("third-order data needed: cap must be >= 3")
    if g.field != RATIONAL:
        raise PreconditionViolated("planar invariants require exact input")
    _require_unipotent_block(g)
    if g.quadratic_coefficient(2, 1, 1):
        raise GenericInput(
            "second component has a z_1^2 term; these invariants only exist "
            "in the degenerate case"
        )
    a111 = g.quadratic_coefficient(1, 1, 1)
    a212 = g.quadratic_coefficient(2, 1, 2)
    a2111 = g.components[1].coefficient([3, 0])
    eps = a111 + a212
    eta = (a111 - a212) ** 2 + qi(2) * a2111
    xi = eta / (eps * eps) if eps else None

    nf = normal_form(g)
    alpha0 = nf.alpha[0]
    e11 = nf.epsilon_entry(1, 1)
    if nf.epsilon_entry(2, 1) != QI_ZERO:
        raise BlowdynError("normal form unexpectedly produced a leading square "
                           "term in the second component")
    if e11 != alpha0 * eps:
        raise BlowdynError("normal-form route disagrees on the linear invariant")
    eta2 = nf.normalized.components[1].coefficient([3, 0])
    if eta2 != alpha0 * alpha0 * (a2111 - qi(2) * a111 * a212):
        raise BlowdynError("normal-form route disagrees on the third-order term")
    if eps:
        if QI_ONE + qi(2) * eta2 / (e11 * e11) != xi:
            raise BlowdynError("the two evaluations of the quadratic invariant differ")
    return Invariants2D(eps, eta, xi)
