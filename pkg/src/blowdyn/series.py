"""Exact truncated multivariate power series and polynomial map germs.

A TruncatedSeries is a finite multi-index -> coefficient map together with a
total-degree cap D; every arithmetic operation is exact modulo degree > D.
The cap travels with the value: combining series with different caps (or
different variable counts, or different coefficient fields) raises instead
of silently truncating.

Coefficients live either in the exact Gaussian-rational field (default) or
in an mpmath complex field of fixed binary precision; see scalars.py.
"""

from .errors import DivisionObstruction, PreconditionViolated
from .scalars import RATIONAL

__all__ = [
    "TruncatedSeries",
    "PolyMapGerm",
    "series_add",
    "series_multiply",
    "series_compose",
    "series_reciprocal",
    "monomial_divide",
    "monomial_multiply",
    "series_evaluate",
    "germ_inverse",
]


class TruncatedSeries:
    __slots__ = ("nvars", "cap", "field", "coeffs")

    def __init__(self, nvars, cap, field=RATIONAL, coeffs=None, _canonical=False):
        self.nvars = int(nvars)
        self.cap = int(cap)
        self.field = field
        if self.cap < 0:
            raise PreconditionViolated("negative degree cap")
        if coeffs is None:
            self.coeffs = {}
        elif _canonical:
            self.coeffs = coeffs
        else:
            clean = {}
            for e, c in coeffs.items():
                e = tuple(int(x) for x in e)
                if len(e) != self.nvars or any(x < 0 for x in e):
                    raise PreconditionViolated("bad multi-index %r" % (e,))
                if sum(e) > self.cap:
                    raise PreconditionViolated(
                        "multi-index %r above cap %d" % (e, self.cap)
                    )
                c = field.coerce(c)
                if not field.is_zero(c):
                    clean[e] = c
            self.coeffs = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars, cap, field=RATIONAL):
        return cls(nvars, cap, field, {}, _canonical=True)

    @classmethod
    def constant(cls, value, nvars, cap, field=RATIONAL):
        c = field.coerce(value)
        if field.is_zero(c):
            return cls.zero(nvars, cap, field)
        return cls(nvars, cap, field, {(0,) * nvars: c}, _canonical=True)

    @classmethod
    def variable(cls, i, nvars, cap, field=RATIONAL):
        """The coordinate w_i (1-based)."""
        if not 1 <= i <= nvars:
            raise PreconditionViolated("variable index out of range")
        if cap < 1:
            raise PreconditionViolated("cap too small to hold a variable")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(nvars, cap, field, {tuple(e): field.one()}, _canonical=True)

    @classmethod
    def monomial(cls, exps, nvars, cap, field=RATIONAL, coeff=1):
        e = tuple(int(x) for x in exps)
        c = field.coerce(coeff)
        if field.is_zero(c):
            return cls.zero(nvars, cap, field)
        return cls(nvars, cap, field, {e: c})

    # -- inspection -----------------------------------------------------

    def coefficient(self, exps):
        return self.coeffs.get(tuple(exps), self.field.zero())

    def constant_term(self):
        return self.coeffs.get((0,) * self.nvars, self.field.zero())

    def low_degree(self):
        """Smallest total degree with a nonzero term; None for the zero series."""
        if not self.coeffs:
            return None
        return min(sum(e) for e in self.coeffs)

    def homogeneous_part(self, d):
        part = {e: c for e, c in self.coeffs.items() if sum(e) == d}
        return TruncatedSeries(self.nvars, self.cap, self.field, part, _canonical=True)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.nvars != other.nvars or self.field != other.field:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("TruncatedSeries is not hashable")

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            bits = []
            for e in sorted(self.coeffs, key=lambda t: (sum(t), t)):
                mono = "*".join(
                    "w%d^%d" % (i + 1, p) if p > 1 else "w%d" % (i + 1)
                    for i, p in enumerate(e)
                    if p
                )
                ctext = str(self.coeffs[e])
                bits.append("(%s)%s" % (ctext, "*" + mono if mono else ""))
            body = " + ".join(bits)
        return "<series cap=%d %s>" % (self.cap, body)

    # -- arithmetic (operator sugar delegates to module functions) -------

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, series_scale(other, -1))

    def __neg__(self):
        return series_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_multiply(self, other)
        return series_scale(self, other)

    def __rmul__(self, other):
        return series_scale(self, other)

    def __pow__(self, p):
        return series_power(self, p)

    def truncated(self, cap):
        """Copy at a lower (or equal) cap."""
        if cap > self.cap:
            raise PreconditionViolated(
                "cannot raise cap %d -> %d without polynomial semantics"
                % (self.cap, cap)
            )
        kept = {e: c for e, c in self.coeffs.items() if sum(e) <= cap}
        return TruncatedSeries(self.nvars, cap, self.field, kept, _canonical=True)

    def as_polynomial_cap(self, cap):
        """Reinterpret at any cap, treating the stored terms as the complete
        expansion (exact polynomial).  Only sound when the value really is a
        polynomial with no dropped terms — lifting uses this for input maps."""
        kept = {e: c for e, c in self.coeffs.items() if sum(e) <= cap}
        return TruncatedSeries(self.nvars, cap, self.field, kept, _canonical=True)


def _check_pair(a, b):
    if a.nvars != b.nvars:
        raise PreconditionViolated("variable count mismatch")
    if a.cap != b.cap:
        raise PreconditionViolated("cap mismatch: %d vs %d" % (a.cap, b.cap))
    if a.field != b.field:
        raise PreconditionViolated("coefficient field mismatch")


def series_add(a, b):
    _check_pair(a, b)
    out = dict(a.coeffs)
    for e, c in b.coeffs.items():
        prev = out.get(e)
        s = c if prev is None else prev + c
        if a.field.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return TruncatedSeries(a.nvars, a.cap, a.field, out, _canonical=True)


def series_scale(a, scalar):
    c = a.field.coerce(scalar)
    if a.field.is_zero(c):
        return TruncatedSeries.zero(a.nvars, a.cap, a.field)
    out = {e: c * v for e, v in a.coeffs.items()}
    out = {e: v for e, v in out.items() if not a.field.is_zero(v)}
    return TruncatedSeries(a.nvars, a.cap, a.field, out, _canonical=True)


def series_multiply(a, b):
    _check_pair(a, b)
    cap = a.cap
    if len(b.coeffs) > len(a.coeffs):
        a, b = b, a  # iterate over the bigger one in the outer loop
    bydeg = {}
    for e, c in b.coeffs.items():
        bydeg.setdefault(sum(e), []).append((e, c))
    out = {}
    for ea, ca in a.coeffs.items():
        da = sum(ea)
        room = cap - da
        if room < 0:
            continue
        for db, terms in bydeg.items():
            if db > room:
                continue
            for eb, cb in terms:
                key = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                prev = out.get(key)
                out[key] = prod if prev is None else prev + prod
    out = {e: c for e, c in out.items() if not a.field.is_zero(c)}
    return TruncatedSeries(a.nvars, cap, a.field, out, _canonical=True)


def series_power(a, p):
    p = int(p)
    if p < 0:
        raise PreconditionViolated("negative powers need series_reciprocal")
    result = TruncatedSeries.constant(1, a.nvars, a.cap, a.field)
    base = a
    while p:
        if p & 1:
            result = series_multiply(result, base)
        p >>= 1
        if p:
            base = series_multiply(base, base)
    return result


def series_compose(outer, inner, _power_cache=None):
    """outer(inner_1, ..., inner_m), truncated at the shared cap.

    Every inner series must have zero constant term, so truncation order is
    preserved.  Terms of `outer` above the cap cannot contribute and are
    ignored, which also lets polynomial outers stored at higher caps be
    substituted directly.
    """
    if len(inner) != outer.nvars:
        raise PreconditionViolated(
            "outer has %d variables but %d inner series given"
            % (outer.nvars, len(inner))
        )
    if not inner:
        raise PreconditionViolated("need at least one inner series")
    tmpl = inner[0]
    for s in inner:
        if s.nvars != tmpl.nvars or s.cap != tmpl.cap or s.field != tmpl.field:
            raise PreconditionViolated("inner series disagree on nvars/cap/field")
        if not s.field.is_zero(s.constant_term()):
            raise PreconditionViolated("inner series must vanish at the origin")
    cap = tmpl.cap
    field = tmpl.field
    cache = {} if _power_cache is None else _power_cache

    def inner_power(i, p):
        key = (i, p)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if p == 1:
            val = inner[i]
        else:
            val = series_power(inner[i], p)
        cache[key] = val
        return val

    total = TruncatedSeries.zero(tmpl.nvars, cap, field)
    for e, c in outer.coeffs.items():
        if sum(e) > cap:
            continue
        term = None
        for i, p in enumerate(e):
            if not p:
                continue
            f = inner_power(i, p)
            term = f if term is None else series_multiply(term, f)
        if term is None:
            term = TruncatedSeries.constant(1, tmpl.nvars, cap, field)
        total = series_add(total, series_scale(term, c))
    return total


def series_reciprocal(u):
    c0 = u.constant_term()
    if u.field.is_zero(c0):
        raise PreconditionViolated("reciprocal of a non-unit (zero constant term)")
    one = TruncatedSeries.constant(1, u.nvars, u.cap, u.field)
    inv_c0 = u.field.one() / c0
    # u = c0 (1 - t) with t of positive order; 1/u = (1/c0) sum t^m
    t = series_add(one, series_scale(u, -inv_c0))
    acc = one
    p = one
    for _ in range(u.cap):
        p = series_multiply(p, t)
        if p.is_zero():
            break
        acc = series_add(acc, p)
    return series_scale(acc, inv_c0)


def monomial_divide(s, m):
    """Divide by the monomial w^m; the result's cap drops by |m|."""
    m = tuple(int(x) for x in m)
    if len(m) != s.nvars or any(x < 0 for x in m):
        raise PreconditionViolated("bad divisor multi-index %r" % (m,))
    deg = sum(m)
    if deg > s.cap:
        raise PreconditionViolated("divisor degree exceeds cap")
    out = {}
    for e, c in s.coeffs.items():
        q = tuple(x - y for x, y in zip(e, m))
        if any(x < 0 for x in q):
            raise DivisionObstruction(
                "term w^%r is not divisible by w^%r" % (e, m)
            )
        out[q] = c
    return TruncatedSeries(s.nvars, s.cap - deg, s.field, out, _canonical=True)


def monomial_multiply(s, m, coeff=1):
    """Multiply by coeff * w^m; exact, so the cap grows by |m|."""
    m = tuple(int(x) for x in m)
    deg = sum(m)
    c = s.field.coerce(coeff)
    out = {}
    for e, v in s.coeffs.items():
        val = c * v
        if not s.field.is_zero(val):
            out[tuple(x + y for x, y in zip(e, m))] = val
    return TruncatedSeries(s.nvars, s.cap + deg, s.field, out, _canonical=True)


def series_evaluate(s, point, conv=None):
    """Evaluate at a point given as a sequence of coefficients-compatible
    values; conv converts stored coefficients first (e.g. to mpc)."""
    if len(point) != s.nvars:
        raise PreconditionViolated("point dimension mismatch")
    total = None
    for e, c in s.coeffs.items():
        val = conv(c) if conv is not None else c
        for x, p in zip(point, e):
            if p:
                val = val * x ** p
        total = val if total is None else total + val
    if total is None:
        z = s.field.zero()
        return conv(z) if conv is not None else z
    return total


class PolyMapGerm:
    """A germ fixing the origin: n series components in n variables."""

    __slots__ = ("n", "components")

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise PreconditionViolated("empty germ")
        tmpl = components[0]
        for s in components:
            if not isinstance(s, TruncatedSeries):
                raise PreconditionViolated("germ components must be series")
            if s.nvars != tmpl.nvars or s.cap != tmpl.cap or s.field != tmpl.field:
                raise PreconditionViolated("germ components disagree on nvars/cap/field")
            if not s.field.is_zero(s.constant_term()):
                raise PreconditionViolated("germ must fix the origin")
        if len(components) != tmpl.nvars:
            raise PreconditionViolated(
                "self-map needs as many components as variables"
            )
        self.n = len(components)
        self.components = components

    @property
    def cap(self):
        return self.components[0].cap

    @property
    def field(self):
        return self.components[0].field

    def linear_matrix(self):
        n = self.n
        out = []
        for s in self.components:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(s.coefficient(e))
            out.append(row)
        return out

    def quadratic_coefficient(self, j, h, k):
        """Symmetrized quadratic coefficient a^j_{hk} (1-based); the z_h z_k
        monomial coefficient equals 2 a^j_{hk} for h != k."""
        e = [0] * self.n
        e[h - 1] += 1
        e[k - 1] += 1
        c = self.components[j - 1].coefficient(e)
        if h != k:
            c = c / 2
        return c

    def compose(self, other):
        """self after other (self ∘ other)."""
        cache = {}
        comps = [
            series_compose(s, list(other.components), _power_cache=cache)
            for s in self.components
        ]
        return PolyMapGerm(comps)

    def evaluate(self, point, conv=None):
        return [series_evaluate(s, point, conv) for s in self.components]

    def truncated(self, cap):
        return PolyMapGerm([s.truncated(cap) for s in self.components])

    def as_polynomial_cap(self, cap):
        return PolyMapGerm([s.as_polynomial_cap(cap) for s in self.components])

    def __eq__(self, other):
        if not isinstance(other, PolyMapGerm):
            return NotImplemented
        return self.components == other.components

    def __repr__(self):
        return "PolyMapGerm(%s)" % ", ".join(repr(s) for s in self.components)


def identity_germ(n, cap, field=RATIONAL):
    return PolyMapGerm(
        [TruncatedSeries.variable(i + 1, n, cap, field) for i in range(n)]
    )


def germ_inverse(chi, cap=None):
    """Compositional inverse of a germ with invertible linear part, to the
    requested cap (default: chi's cap).  Degree-by-degree correction."""
    from .exactalg import invert_matrix

    if cap is None:
        cap = chi.cap
    n = chi.n
    field = chi.field
    if field != RATIONAL:
        raise PreconditionViolated("germ inversion implemented for the exact field")
    L = chi.linear_matrix()
    Linv = invert_matrix(L)
    # start from the inverse linear part
    comps = []
    for i in range(n):
        coeffs = {}
        for j in range(n):
            if Linv[i][j]:
                e = [0] * n
                e[j] = 1
                coeffs[tuple(e)] = Linv[i][j]
        comps.append(TruncatedSeries(n, cap, field, coeffs, _canonical=True))
    g = PolyMapGerm(comps)
    ident = identity_germ(n, cap, field)
    chi_cap = chi.as_polynomial_cap(cap)
    for _ in range(2, cap + 1):
        resid = [
            a - b for a, b in zip(chi_cap.compose(g).components, ident.components)
        ]
        if all(r.is_zero() for r in resid):
            break
        corr = []
        for i in range(n):
            acc = TruncatedSeries.zero(n, cap, field)
            for j in range(n):
                if Linv[i][j]:
                    acc = series_add(acc, series_scale(resid[j], Linv[i][j]))
            corr.append(acc)
        g = PolyMapGerm([a - b for a, b in zip(g.components, corr)])
    return g
