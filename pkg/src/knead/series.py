"""Truncated formal power series with exact rational coefficients.

Coefficients are kept as Python ints whenever possible and as
:class:`fractions.Fraction` otherwise, so integer series (every kneading
determinant and zeta function lives in Z[[z]]) never pay for rational
arithmetic.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import (DegreeTooSmall, NonUnitConstantTerm, UnstableRoot,
                     WrongConstantTerm)


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x
    return _norm(Fraction(x))


def _divn(x, m):
    if isinstance(x, int) and x % m == 0:
        return x // m
    return _norm(Fraction(x) / m)


def _div(x, u):
    if u == 1:
        return x
    if u == -1:
        return -x
    return _norm(Fraction(x) / u)


class TruncatedSeries:
    """c_0 + c_1 z + ... + c_N z^N, known exactly up to the degree N."""

    __slots__ = ("_c",)

    def __init__(self, coeffs, degree=None):
        c = [_norm(x) for x in coeffs]
        if degree is None:
            degree = len(c) - 1
        if degree < 0:
            raise ValueError("truncation degree must be >= 0")
        if len(c) > degree + 1:
            c = c[:degree + 1]
        else:
            c.extend([0] * (degree + 1 - len(c)))
        self._c = tuple(c)

    @classmethod
    def _raw(cls, c):
        s = cls.__new__(cls)
        s._c = tuple(c)
        return s

    @classmethod
    def zero(cls, degree):
        return cls._raw([0] * (degree + 1))

    @classmethod
    def one(cls, degree):
        return cls.constant(1, degree)

    @classmethod
    def constant(cls, value, degree):
        return cls([value], degree)

    @classmethod
    def geometric(cls, ratio, degree):
        """Expansion of 1/(1 - ratio*z)."""
        ratio = _norm(ratio)
        return cls._raw([_norm(ratio ** k) for k in range(degree + 1)])

    @property
    def degree(self):
        return len(self._c) - 1

    @property
    def coeffs(self):
        return self._c

    def fractions(self):
        return [Fraction(x) for x in self._c]

    def __getitem__(self, n):
        return self._c[n]

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __repr__(self):
        terms = []
        for k, a in enumerate(self._c):
            if a:
                terms.append(f"{a}" if k == 0 else f"({a})*z^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries({body} + O(z^{self.degree + 1}))"

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def is_polynomial_of_degree(self):
        """Index of the last nonzero coefficient (-1 for the zero series)."""
        for k in range(len(self._c) - 1, -1, -1):
            if self._c[k]:
                return k
        return -1

    def truncate(self, degree):
        if degree > self.degree:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries._raw(self._c[:degree + 1])

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.degree)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.degree, other.degree)
        return TruncatedSeries._raw(
            [self._c[k] + other._c[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-a for a in self._c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            k = _norm(other)
            return TruncatedSeries._raw([_norm(a * k) for a in self._c])
        n = min(self.degree, other.degree)
        a, b = self._c, other._c
        out = [0] * (n + 1)
        bnz = [(j, bj) for j, bj in enumerate(b[:n + 1]) if bj]
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            lim = n - i
            for j, bj in bnz:
                if j > lim:
                    break
                out[i + j] += ai * bj
        return TruncatedSeries._raw([_norm(x) for x in out])

    __rmul__ = __mul__

    def zshift(self, k=1):
        """Multiply by z^k (the truncation degree is kept)."""
        return TruncatedSeries._raw(([0] * k + list(self._c))[:len(self._c)])

    def inverse(self):
        u0 = self._c[0]
        if u0 == 0:
            raise NonUnitConstantTerm("constant term is zero; no inverse in the ring")
        n = self.degree
        u = self._c
        c = [0] * (n + 1)
        c[0] = _div(1, u0)
        unz = [(k, uk) for k, uk in enumerate(u) if uk and k > 0]
        for m in range(1, n + 1):
            acc = 0
            for k, uk in unz:
                if k > m:
                    break
                acc += uk * c[m - k]
            c[m] = _div(-acc, u0)
        return TruncatedSeries._raw(c)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return self * _div(1, _norm(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries.one(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self):
        """Formal derivative; the result has degree N - 1."""
        if self.degree == 0:
            return TruncatedSeries.zero(0)
        return TruncatedSeries._raw(
            [k * self._c[k] for k in range(1, len(self._c))])

    def exp(self):
        if self._c[0] != 0:
            raise WrongConstantTerm("exp needs a series with constant term 0")
        n = self.degree
        a = self._c
        b = [0] * (n + 1)
        b[0] = 1
        ka = [(k, k * a[k]) for k in range(1, n + 1) if a[k]]
        for m in range(1, n + 1):
            acc = 0
            for k, kak in ka:
                if k > m:
                    break
                acc += kak * b[m - k]
            b[m] = _divn(acc, m)
        return TruncatedSeries._raw([_norm(x) for x in b])

    def log(self):
        if self._c[0] != 1:
            raise WrongConstantTerm("log needs a series with constant term 1")
        n = self.degree
        u = self._c
        a = [0] * (n + 1)
        # m a_m = m u_m - sum_{k=1}^{m-1} k a_k u_{m-k}
        for m in range(1, n + 1):
            acc = m * u[m]
            for k in range(1, m):
                if a[k] and u[m - k]:
                    acc -= k * a[k] * u[m - k]
            a[m] = _divn(acc, m)
        return TruncatedSeries._raw([_norm(x) for x in a])

    def log_derivative_traces(self):
        """t_1..t_N with -z u'(z)/u(z) = sum_{n>=1} t_n z^n (u_0 = 1)."""
        if self._c[0] != 1:
            raise WrongConstantTerm("trace extraction needs constant term 1")
        # -z u'/u = -z d/dz log u, so t_n = -n * (log u)_n
        lg = self.log()
        return [_norm(-n * lg[n]) for n in range(1, self.degree + 1)]

    @classmethod
    def from_traces(cls, traces, degree):
        """exp(-sum_{n>=1} t_n z^n / n): the determinant whose traces are t_n."""
        c = [0] * (degree + 1)
        for n in range(1, degree + 1):
            t = traces[n - 1]
            c[n] = _divn(-t, n)
        return cls._raw(c).exp()

    @classmethod
    def from_counts(cls, counts, degree):
        """exp(sum_{n>=1} a_n z^n / n) for a sequence a_1..a_degree."""
        return cls.from_traces([-x for x in counts[:degree]], degree)

    def first_mismatch(self, other, degree=None):
        """Smallest n with differing coefficients (up to ``degree``), else None."""
        n = min(self.degree, other.degree)
        if degree is not None:
            n = min(n, degree)
        for k in range(n + 1):
            if self._c[k] != other._c[k]:
                return k
        return None

    def __call__(self, z):
        acc = 0
        for a in reversed(self._c):
            acc = acc * z + float(a)
        return acc

    def to_strings(self):
        return [str(Fraction(a)) for a in self._c]


class SeriesMatrix:
    """Square matrix of truncated series sharing one truncation degree."""

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        p = len(rows)
        if any(len(r) != p for r in rows):
            raise ValueError("series matrix must be square")
        degs = {e.degree for r in rows for e in r}
        if len(degs) > 1:
            raise ValueError(f"mixed truncation degrees {sorted(degs)}")
        self.rows = rows
        self.size = p
        self.degree = degs.pop() if degs else None

    @classmethod
    def constant(cls, matrix, degree):
        return cls([[TruncatedSeries.constant(x, degree) for x in row]
                    for row in matrix])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def coefficient_matrix(self, n):
        return [[e[n] for e in row] for row in self.rows]

    def coefficient_set(self):
        return {a for row in self.rows for e in row for a in e}

    def to_strings(self):
        return [[e.to_strings() for e in row] for row in self.rows]


def det_id_minus_zM(M, degree=None):
    """det(Id - z M(z)) truncated at the matrix's degree.

    The constant term of Id - z M(z) is the identity, so elimination without
    pivoting only ever divides by series with constant term 1 and stays in
    Z[[z]] for integer input.
    """
    if isinstance(M, SeriesMatrix):
        p, rows, deg = M.size, M.rows, M.degree
    else:
        rows = [list(r) for r in M]
        p = len(rows)
        deg = rows[0][0].degree if p else degree
    if degree is not None:
        deg = degree
    if p == 0:
        return TruncatedSeries.one(deg if deg is not None else 0)
    a = []
    for i in range(p):
        row = []
        for j in range(p):
            e = rows[i][j].truncate(deg) if rows[i][j].degree > deg else rows[i][j]
            e = -e.zshift(1)
            if i == j:
                e = e + 1
            row.append(e)
        a.append(row)
    det = TruncatedSeries.one(deg)
    for k in range(p):
        piv = a[k][k]
        det = det * piv
        if k == p - 1:
            break
        inv = piv.inverse()
        for i in range(k + 1, p):
            if not any(a[i][k]):
                continue
            factor = a[i][k] * inv
            rk = a[k]
            ri = a[i]
            for j in range(k + 1, p):
                if any(rk[j]):
                    ri[j] = ri[j] - factor * rk[j]
    return det


@dataclass(frozen=True)
class RadiusEstimate:
    """Radius of convergence estimate; ``at_least_one`` means no growth seen."""
    value: float
    at_least_one: bool
    uncertainty: float
    window: tuple

    def as_dict(self):
        return {
            "radius": ">= 1" if self.at_least_one else self.value,
            "uncertainty": self.uncertainty,
            "window": list(self.window),
        }


def _growth_fit(points):
    n = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if len(n) < 2:
        return None
    slope, _ = np.polyfit(n, y, 1)
    return float(slope)


def _log_abs(x):
    x = Fraction(x)
    # log of huge integers without float overflow
    return (math.log(abs(x.numerator)) - math.log(x.denominator))


def radius_estimate(s, unit_threshold=0.05, min_degree=16):
    """Estimate 1/limsup |c_n|^(1/n) from a least-squares fit of log|c_n|.

    The fit runs over the nonzero coefficients in the top half of the
    truncation window.  Growth rates below ``unit_threshold`` are reported as
    radius ">= 1": at desk-scale truncation they cannot be told apart from
    polynomially bounded coefficients.
    """
    N = s.degree
    if N < min_degree:
        raise DegreeTooSmall(f"need degree >= {min_degree}, got {N}")
    lo = N // 2
    pts = [(n, _log_abs(s[n])) for n in range(lo, N + 1) if s[n]]
    window = (lo, N)
    if len(pts) < 4:
        return RadiusEstimate(math.inf, True, 0.0, window)
    slope = _growth_fit(pts)
    half = len(pts) // 2
    s1 = _growth_fit(pts[:half])
    s2 = _growth_fit(pts[half:])
    if slope is None or slope < unit_threshold:
        return RadiusEstimate(math.inf, True, 0.0, window)
    rho = math.exp(-slope)
    spread = 0.0
    if s1 is not None and s2 is not None:
        spread = abs(math.exp(-s1) - math.exp(-s2))
    return RadiusEstimate(rho, False, spread, window)


def _poly_roots(coeffs):
    c = [float(Fraction(x)) for x in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    if len(c) <= 1:
        return np.array([], dtype=complex), c
    roots = np.roots(c[::-1])
    return roots, c


def _polish(root, c, steps=8):
    p = np.polynomial.Polynomial(c)
    dp = p.deriv()
    z = complex(root)
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        step = p(z) / d
        z -= step
        if abs(step) < 1e-17:
            break
    return z


def _smallest_inside(coeffs, r_max):
    roots, c = _poly_roots(coeffs)
    inside = [r for r in roots if abs(r) < r_max]
    if not inside:
        return None
    r = min(inside, key=abs)
    r = _polish(r, c)
    return r if abs(r) < r_max else None


@dataclass(frozen=True)
class RootResult:
    root: complex
    modulus: float
    half_modulus: float
    residual: float

    def as_dict(self):
        if self.root is None:
            return {"root": "none"}
        return {"root": [self.root.real, self.root.imag],
                "modulus": self.modulus,
                "half_truncation_modulus": self.half_modulus,
                "residual": self.residual}


NO_ROOT = RootResult(None, math.inf, math.inf, 0.0)


def smallest_root_in_disk(s, r_max=1.0, tolerance=1e-6):
    """Smallest-modulus root of the truncation polynomial inside |z| < r_max.

    Returns ``NO_ROOT`` when there is none.  The root is recomputed from the
    truncation at degree N/2; a modulus change beyond ``tolerance`` raises
    :class:`UnstableRoot`.
    """
    if s[0] == 0:
        raise WrongConstantTerm("z = 0 is a root; constant term must be nonzero")
    N = s.degree
    full = _smallest_inside(s.coeffs, r_max)
    half = _smallest_inside(s.coeffs[:N // 2 + 1], r_max) if N >= 2 else full
    if full is None and half is None:
        return NO_ROOT
    m_full = abs(full) if full is not None else math.inf
    m_half = abs(half) if half is not None else math.inf
    if full is None or half is None or abs(m_full - m_half) > tolerance:
        raise UnstableRoot(m_full, m_half)
    _, c = _poly_roots(s.coeffs)
    residual = abs(np.polynomial.Polynomial(c)(full))
    return RootResult(complex(full), m_full, m_half, float(residual))
