"""Piecewise-affine monotone maps on a finite union of rational intervals."""
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
import numbers
from typing import NamedTuple

from gmpy2 import mpq

from .errors import (BoundaryNotCritical, ImageEscapesOmega, InputError,
                     LapBudgetExceeded, NonMonotoneBranch, NotCritical,
                     OverlappingIntervals, PointOutsideOmega)

DEFAULT_LAP_BUDGET = 2_000_000
DEFAULT_HORIZON = 256

LEFT, NONE, RIGHT = -1, 0, 1


def rational(x):
    """Exact rational from an int, Fraction or a string such as "3/2"."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {x!r}") from None
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a string")
    raise TypeError(f"cannot read {x!r} as a rational")


def side_symbol(side):
    return {LEFT: "-", RIGHT: "+", NONE: ""}[side]


@dataclass(frozen=True)
class Omega:
    intervals: tuple

    def __post_init__(self):
        ivs = tuple((rational(a), rational(b)) for a, b in self.intervals)
        if not ivs:
            raise InputError("Omega needs at least one interval")
        flat = [x for iv in ivs for x in iv]
        for u, v in zip(flat, flat[1:]):
            if not u < v:
                raise OverlappingIntervals(
                    f"intervals must satisfy a_1 < b_1 < a_2 < ...; got {u} >= {v}")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "_flat", tuple(flat))

    @property
    def m(self):
        return len(self.intervals)

    @property
    def boundary(self):
        return self._flat

    def component_of(self, x):
        """Index i with x in [a_i, b_i], or None."""
        k = bisect_right(self._flat, x) - 1
        if k < 0:
            return None
        if k % 2 == 0:
            return k // 2
        # x lies at b_i exactly or in a gap
        return k // 2 if x == self._flat[k] else None

    def __contains__(self, x):
        return self.component_of(x) is not None

    def is_left_end(self, x):
        return any(x == a for a, _ in self.intervals)

    def is_right_end(self, x):
        return any(x == b for _, b in self.intervals)

    def check_side(self, x, side):
        i = self.component_of(x)
        if i is None:
            raise PointOutsideOmega(f"{x} is not in Omega")
        a, b = self.intervals[i]
        if side == LEFT and x == a:
            raise InputError(f"side - is illegal at the left end {x}")
        if side == RIGHT and x == b:
            raise InputError(f"side + is illegal at the right end {x}")

    def length(self):
        return sum(b - a for a, b in self.intervals)


@dataclass(frozen=True)
class SidedPoint:
    point: Fraction
    side: int = NONE

    def __str__(self):
        return f"{self.point}{side_symbol(self.side)}"


class FormalVector:
    """Finite rational combination of points of Omega (an element of S_0)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for x, c in items:
            if c:
                acc[x] = acc.get(x, 0) + c
        self._terms = {x: c for x, c in acc.items() if c}

    @classmethod
    def point(cls, x, coeff=1):
        return cls([(rational(x), coeff)])

    @classmethod
    def zero(cls):
        return cls()

    def items(self):
        return sorted(self._terms.items())

    def support(self):
        return sorted(self._terms)

    def coeff(self, x):
        return self._terms.get(x, 0)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __add__(self, other):
        acc = dict(self._terms)
        for x, c in other._terms.items():
            acc[x] = acc.get(x, 0) + c
        return FormalVector(acc)

    def __neg__(self):
        return FormalVector({x: -c for x, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return FormalVector({x: k * c for x, c in self._terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if isinstance(other, FormalVector):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        if not self._terms:
            return "FormalVector(0)"
        body = " + ".join(f"{c}*[{x}]" for x, c in self.items())
        return f"FormalVector({body})"

    def single(self):
        """(point, coeff) for a one-term vector, None for zero."""
        if not self._terms:
            return None
        if len(self._terms) != 1:
            raise ValueError("not a single-point vector")
        return next(iter(self._terms.items()))


@dataclass(frozen=True)
class Branch:
    """x -> slope*x + intercept on the open interval ]left, right[."""
    left: Fraction
    right: Fraction
    slope: Fraction
    intercept: Fraction

    @property
    def sign(self):
        return 1 if self.slope > 0 else -1

    def __call__(self, x):
        return self.slope * x + self.intercept

    def image(self):
        u, v = self(self.left), self(self.right)
        return (u, v) if u < v else (v, u)


class Lap(NamedTuple):
    """Maximal interval of monotonicity [left, right] of the n-th iterate.

    Coordinates are exact rationals held as ``gmpy2.mpq`` (lap enumeration
    is the hot loop); they compare and hash equal to ``Fraction``.
    """
    left: mpq
    right: mpq
    sign: int
    level: int
    slope: mpq
    intercept: mpq

    def __call__(self, x):
        return self.slope * x + self.intercept

    def value_right(self):
        """F^n(d-)."""
        return self.slope * self.right + self.intercept

    def value_left(self):
        """F^n(c+)."""
        return self.slope * self.left + self.intercept

    def image(self):
        u, v = self.value_left(), self.value_right()
        return (u, v) if u < v else (v, u)

    def variation(self):
        return abs(self.value_right() - self.value_left())

    def has_negative_fixed_point(self):
        """A decreasing lap holds a fixed point iff its graph crosses the diagonal inside."""
        return (self.sign < 0 and self.left < self.value_left()
                and self.value_right() < self.right)

    def on_diagonal(self):
        return self.slope == 1 and self.intercept == 0

    def fixed_point(self):
        """The interior fixed point of this lap, or None (slope 1 handled by the caller)."""
        if self.slope == 1:
            return None
        x = self.intercept / (1 - self.slope)
        return x if self.left < x < self.right else None


class PMMap:
    """Piecewise-affine monotone map F: Omega minus C_F -> Omega.

    Construction validates every invariant; instances are immutable.
    """

    def __init__(self, domain, critical, branches):
        if not isinstance(domain, Omega):
            domain = Omega(tuple(domain))
        crit = sorted({rational(c) for c in critical})
        for c in crit:
            if c not in domain:
                raise PointOutsideOmega(f"critical point {c} is not in Omega")
        missing = [x for x in domain.boundary if x not in set(crit)]
        if missing:
            raise BoundaryNotCritical(
                f"boundary points {[str(x) for x in missing]} are not critical")
        segments = []
        for c, d in zip(crit, crit[1:]):
            i = domain.component_of(c)
            if i is not None and domain.component_of(d) == i:
                segments.append((c, d))
        branches = list(branches)
        if len(branches) != len(segments):
            raise InputError(
                f"{len(segments)} branches required (one per lap of C_F), "
                f"got {len(branches)}")
        built = []
        for (c, d), br in zip(segments, branches):
            if isinstance(br, Branch):
                if (br.left, br.right) != (c, d):
                    raise InputError(
                        f"branch on ]{br.left},{br.right}[ does not match "
                        f"critical interval ]{c},{d}[")
                s, t = br.slope, br.intercept
            else:
                s, t = (rational(v) for v in br)
            if s == 0:
                raise NonMonotoneBranch(f"slope 0 on ]{c},{d}[")
            b = Branch(c, d, s, t)
            lo, hi = b.image()
            i = domain.component_of(lo)
            if i is None or domain.component_of(hi) != i:
                raise ImageEscapesOmega(
                    f"image [{lo},{hi}] of ]{c},{d}[ is not inside one "
                    "interval of Omega")
            built.append(b)
        self.domain = domain
        self.critical = tuple(crit)
        self.branches = tuple(built)
        self._crit_set = frozenset(crit)
        # branch index for the gap starting at each critical point
        self._after = {}
        self._before = {}
        for b in built:
            self._after[b.left] = b
            self._before[b.right] = b

    def __repr__(self):
        return (f"PMMap(Omega={[(str(a), str(b)) for a, b in self.domain.intervals]}, "
                f"C_F={[str(c) for c in self.critical]})")

    def __eq__(self, other):
        return (isinstance(other, PMMap) and self.domain == other.domain
                and self.critical == other.critical
                and self.branches == other.branches)

    def __hash__(self):
        return hash((self.domain, self.critical, self.branches))

    @property
    def signs(self):
        return tuple(b.sign for b in self.branches)

    def is_critical(self, x):
        return x in self._crit_set

    def branch_at(self, x):
        """Branch whose open interval contains the non-critical point x."""
        k = bisect_right(self.critical, x) - 1
        if k < 0 or k + 1 >= len(self.critical):
            raise PointOutsideOmega(f"{x} is not in Omega")
        b = self._after.get(self.critical[k])
        if b is None or not (b.left < x < b.right):
            if x in self._crit_set:
                raise ValueError(f"{x} is a critical point")
            raise PointOutsideOmega(f"{x} is not in Omega")
        return b

    def branch_on_side(self, x, side):
        """Branch adjacent to x on the given side; None at the ends of Omega."""
        if x in self._crit_set:
            return (self._after if side == RIGHT else self._before).get(x)
        return self.branch_at(x)

    def __call__(self, x):
        return self.branch_at(x)(x)

    def sign(self, x):
        """epsilon_F(x); zero on C_F."""
        if x in self._crit_set:
            return 0
        return self.branch_at(x).sign

    def limit(self, x, side):
        """F(x-) or F(x+) as a rational, None at the convention cases."""
        b = self.branch_on_side(x, side)
        return None if b is None else b(x)

    def side_sign(self, x, side):
        b = self.branch_on_side(x, side)
        return 0 if b is None else b.sign

    def one_sided_value(self, c, side):
        """v_c^- = F(c-) or v_c^+ = F(c+) as a formal vector."""
        c = rational(c)
        if c not in self._crit_set:
            raise NotCritical(f"{c} is not in C_F")
        v = self.limit(c, side)
        return FormalVector.zero() if v is None else FormalVector.point(v)

    def signed_action(self, x):
        """epsilon F_#0 on a single point: (image, weight) or None."""
        if x in self._crit_set:
            return None
        b = self.branch_at(x)
        return b(x), b.sign

    def action(self, x):
        """F_#0 on a single point."""
        if x in self._crit_set:
            return None
        return self.branch_at(x)(x), 1

    def laps(self, n=1, budget=DEFAULT_LAP_BUDGET):
        return laps(self, n, budget)

    def iterate(self, n, budget=DEFAULT_LAP_BUDGET):
        """F^n as a PMMap (critical set C_{F^n}, one branch per lap)."""
        if n == 1:
            return self
        ls = laps(self, n, budget)
        crit = set(self.domain.boundary)
        for lap in ls:
            crit.add(lap.left)
            crit.add(lap.right)
        return PMMap(self.domain, crit,
                     [Branch(l.left, l.right, l.slope, l.intercept) for l in ls])


def validate(intervals, critical, branches):
    """Build a PMMap from raw data: intervals, critical points, (slope, intercept) rules."""
    return PMMap(Omega(tuple(intervals)), critical, branches)


class _LapTable:
    """Critical points and branch coefficients of F converted to mpq."""

    def __init__(self, F):
        self.crit = [mpq(c) for c in F.critical]
        self.after = [None] * len(self.crit)
        for k, c in enumerate(F.critical):
            b = F._after.get(c)
            if b is not None:
                self.after[k] = (mpq(b.slope), mpq(b.intercept))


def _refine(T, lap, out, _new=tuple.__new__):
    """Append the laps of F^(n+1) inside the lap of F^n, in increasing order."""
    left, right, _, level, s, t = lap
    level += 1
    inc = s > 0
    lo, hi = s * left + t, s * right + t
    if not inc:
        lo, hi = hi, lo
    crit, after = T.crit, T.after
    k = bisect_right(crit, lo) - 1
    inv = 1 / s
    xa = left if inc else right
    pieces = []
    while True:
        b = after[k]
        if b is None:
            raise ImageEscapesOmega(f"lap image [{lo},{hi}] meets a gap")
        f = crit[k + 1]
        last = f >= hi
        xb = (right if inc else left) if last else (f - t) * inv
        slope = b[0] * s
        piece = (xa, xb) if inc else (xb, xa)
        pieces.append(_new(Lap, (*piece, 1 if slope > 0 else -1, level, slope,
                                 b[0] * t + b[1])))
        if last:
            break
        xa = xb
        k += 1
    if not inc:
        pieces.reverse()
    out.extend(pieces)


def lap_levels(F, n_max, budget=DEFAULT_LAP_BUDGET):
    """Yield the ordered laps of F, F^2, ..., F^n_max."""
    T = _LapTable(F)
    current = [Lap(mpq(b.left), mpq(b.right), b.sign, 1, mpq(b.slope),
                   mpq(b.intercept)) for b in F.branches]
    if len(current) > budget:
        raise LapBudgetExceeded(1, len(current), budget)
    yield current
    for level in range(2, n_max + 1):
        nxt = []
        for lap in current:
            _refine(T, lap, nxt)
            if len(nxt) > budget:
                raise LapBudgetExceeded(level, len(nxt), budget)
        current = nxt
        yield current


def laps(F, n, budget=DEFAULT_LAP_BUDGET):
    if n < 1:
        raise ValueError("n must be >= 1")
    for level in lap_levels(F, n, budget):
        pass
    return level


def lap_count(F, n, budget=DEFAULT_LAP_BUDGET):
    return len(laps(F, n, budget))


def variation(F, n, budget=DEFAULT_LAP_BUDGET):
    """Var(F^n): total image length over the laps of F^n."""
    return sum((lap.variation() for lap in laps(F, n, budget)), Fraction(0))


def signed_orbit(F, start, horizon=DEFAULT_HORIZON, signed=True):
    """Orbit of a point under epsilon F_#0 (or F_#0 when ``signed`` is False).

    Returns the nonzero terms (x_k, w_k), k = 0, 1, ..., where w_k is the
    starting coefficient times the product of epsilon_F(x_j) for j < k.  The
    orbit stops after the first term lying in C_F: F_#0 annihilates it.
    """
    if isinstance(start, FormalVector):
        one = start.single()
        if one is None:
            return []
        x, w = one
    else:
        x, w = rational(start), 1
    out = [(x, w)]
    for _ in range(horizon):
        if F.is_critical(x):
            break
        b = F.branch_at(x)
        x = b(x)
        if signed:
            w = w * b.sign
        out.append((x, w))
    return out
