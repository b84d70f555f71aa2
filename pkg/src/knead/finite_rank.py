"""Pairs of endomorphisms whose extensions differ by a finite-rank map.

A pair is stored as its base action (a weighted point map, zero allowed) and
a finite list of rank-one corrections ``form (x) vector``.  Everything the
kneading construction needs (matrices M(z), determinants, traces) is
computed from orbits of the correction vectors under the base action.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math
import random

from .pm_domain import FormalVector, rational
from .series import SeriesMatrix, TruncatedSeries, det_id_minus_zM
from . import series as _series
from .errors import DegreeTooSmall, UnstableRoot


@dataclass(frozen=True)
class StepForm:
    """Finite step function sum(value * indicator(piece)).

    Each piece is (lo, hi, lo_closed, hi_closed, value).
    """
    pieces: tuple

    @classmethod
    def indicator(cls, lo, hi, value=1, lo_closed=True, hi_closed=True):
        return cls(((rational(lo), rational(hi), lo_closed, hi_closed, value),))

    @classmethod
    def point_mass(cls, x, value=1):
        x = rational(x)
        return cls(((x, x, True, True, value),))

    @classmethod
    def zero(cls):
        return cls(())

    def __call__(self, x):
        total = 0
        for lo, hi, lc, hc, val in self.pieces:
            if (lo < x or (lc and x == lo)) and (x < hi or (hc and x == hi)):
                total += val
        return total

    def __add__(self, other):
        return StepForm(self.pieces + other.pieces)

    def scaled(self, k):
        return StepForm(tuple((lo, hi, lc, hc, k * v)
                              for lo, hi, lc, hc, v in self.pieces))

    def breakpoints(self):
        return sorted({p for lo, hi, *_ in self.pieces for p in (lo, hi)})


@dataclass(frozen=True)
class CoordinateForm:
    """x -> x - offset(x); on S_1 this is the length form y - x."""
    offset: Fraction = Fraction(0)

    def __call__(self, x):
        return x - self.offset


def apply_form(form, vec):
    return sum((c * form(x) for x, c in vec.items()), 0)


@dataclass(frozen=True)
class RankOneTerm:
    form: object
    vector: FormalVector


@dataclass
class FiniteRankPair:
    """Base action for the first extension plus rank-one corrections.

    ``base(x)`` returns ``(image, weight)`` or ``None`` when x is killed.
    The second extension is ``base + sum(form (x) vector)``.
    """
    base: object
    corrections: list
    name: str = ""
    labels: list = field(default_factory=list)

    @property
    def rank(self):
        return len(self.corrections)

    def apply_base(self, vec):
        out = {}
        for x, c in vec.items():
            r = self.base(x)
            if r is None:
                continue
            y, w = r
            out[y] = out.get(y, 0) + c * w
        return FormalVector(out)

    def apply_extension(self, vec):
        """The perturbed extension base + sum(omega_i (x) v_i) on a vector."""
        out = self.apply_base(vec)
        for term in self.corrections:
            k = apply_form(term.form, vec)
            if k:
                out = out + term.vector.scale(k)
        return out

    def orbit(self, vec, degree):
        """base^n(vec) for n = 0..degree, stopping early at zero."""
        terms = []
        for _ in range(degree + 1):
            if vec.is_zero():
                break
            terms.append(vec)
            vec = self.apply_base(vec)
        return terms


def pair_matrix(P, degree):
    """k x k matrix with entries sum_n omega_i(base^n(v_j)) z^n."""
    k = P.rank
    cols = []
    for term in P.corrections:
        orbit = P.orbit(term.vector, degree)
        col = []
        for row in P.corrections:
            coeffs = [apply_form(row.form, vec) for vec in orbit]
            col.append(TruncatedSeries(coeffs, degree))
        cols.append(col)
    rows = [[cols[j][i] for j in range(k)] for i in range(k)]
    return SeriesMatrix(rows) if k else SeriesMatrix([])


def pair_determinant(P, degree):
    if P.rank == 0:
        return TruncatedSeries.one(degree)
    return det_id_minus_zM(pair_matrix(P, degree), degree)


def pair_traces(P, n_max, degree=None):
    """tr(phi_0^n, phi_1^n) for n = 1..n_max from -z D'(z)/D(z)."""
    if degree is None:
        degree = n_max
    if n_max > degree:
        raise DegreeTooSmall(f"traces up to {n_max} need degree >= {n_max}")
    return pair_determinant(P, degree).log_derivative_traces()[:n_max]


def _matmul(a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    inner = len(b)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(m):
                    if bk[j]:
                        oi[j] += aik * bk[j]
    return out


def dense_matrices(P, points):
    """Matrices of both extensions on the span of a finite point set.

    Raises ValueError if some orbit leaves the span.
    """
    idx = {x: i for i, x in enumerate(points)}
    s = len(points)
    base = [[0] * s for _ in range(s)]
    for j, x in enumerate(points):
        r = P.base(x)
        if r is None:
            continue
        y, w = r
        if y not in idx:
            raise ValueError(f"base maps {x} outside the point set")
        base[idx[y]][j] += w
    ext = [row[:] for row in base]
    for term in P.corrections:
        for y, c in term.vector.items():
            if y not in idx:
                raise ValueError(f"correction vector touches {y} outside the set")
            for j, x in enumerate(points):
                ext[idx[y]][j] += c * term.form(x)
    return base, ext


def dense_traces(P, points, n_max):
    """tr(ext^n - base^n) by explicit matrix powers (brute-force oracle)."""
    base, ext = dense_matrices(P, points)
    s = len(points)
    bp = [[int(i == j) for j in range(s)] for i in range(s)]
    ep = [row[:] for row in bp]
    out = []
    for _ in range(n_max):
        bp = _matmul(base, bp)
        ep = _matmul(ext, ep)
        out.append(sum(ep[i][i] - bp[i][i] for i in range(s)))
    return out


def _as_determinant(x, degree):
    if isinstance(x, TruncatedSeries):
        return x.truncate(degree)
    return pair_determinant(x, degree)


@dataclass
class MultiplicativityReport:
    ok: bool
    degree: int
    first_failure: int = None

    def as_dict(self):
        return {"ok": self.ok, "degree": self.degree,
                "first_failure": self.first_failure}


def check_multiplicativity(Pu, Pv, Pw, degree):
    """Is D_Pv = D_Pu * D_Pw coefficient-wise up to ``degree``?

    Each argument is a pair or an already computed determinant.
    """
    du = _as_determinant(Pu, degree)
    dv = _as_determinant(Pv, degree)
    dw = _as_determinant(Pw, degree)
    bad = dv.first_mismatch(du * dw)
    return MultiplicativityReport(bad is None, degree, bad)


def _growth_rate(values):
    """Least-squares slope of log|a_n| over the top half of the nonzero terms."""
    pts = [(n, _series._log_abs(a)) for n, a in enumerate(values) if a]
    if len(pts) < 4:
        return 0.0
    pts = pts[len(pts) // 2:]
    rate = _series._growth_fit(pts)
    return max(rate or 0.0, 0.0)


@dataclass
class RootBoundReport:
    identity_ok: bool
    first_failure: int
    growth: float
    predicted_modulus: float
    root_modulus: float
    bound_ok: bool
    forced: bool
    note: str = ""

    def as_dict(self):
        return {k: getattr(self, k) for k in (
            "identity_ok", "first_failure", "growth", "predicted_modulus",
            "root_modulus", "bound_ok", "forced", "note")}


def perturbed_root_bound(P, xi, v, degree, tolerance=1e-3, min_degree=8):
    """Check the rank-one perturbation identity and the root it forces.

    g(z) = 1 - sum_n xi(ext^n v) z^(n+1) must equal D_{P + xi (x) v} / D_P.
    When xi(ext^n v) grows exponentially with rate lambda > 1, D_P must
    vanish somewhere on |z| = 1/lambda, so its smallest root in the unit
    disk has modulus at most 1/lambda.
    """
    if degree < min_degree:
        raise DegreeTooSmall(f"need degree >= {min_degree}")
    values = []
    w = v
    for _ in range(degree):
        values.append(apply_form(xi, w))
        w = P.apply_extension(w)
    g = TruncatedSeries([1] + [-a for a in values], degree)
    perturbed = FiniteRankPair(P.base, list(P.corrections) + [RankOneTerm(xi, v)],
                               name=P.name + "+xi")
    d = pair_determinant(P, degree)
    dp = pair_determinant(perturbed, degree)
    bad = (g * d).first_mismatch(dp)
    rate = _growth_rate(values)
    lam = math.exp(rate)
    if lam <= 1 + tolerance:
        return RootBoundReport(bad is None, bad, lam, math.inf, math.inf,
                               True, False, "no root forced")
    predicted = 1 / lam
    try:
        root = _series.smallest_root_in_disk(d, 1.0, tolerance)
        modulus = root.modulus
    except UnstableRoot as exc:
        modulus = exc.modulus
    ok = modulus <= predicted + tolerance
    return RootBoundReport(bad is None, bad, lam, predicted, modulus, ok, True)


def random_pair(rng, n_points=None):
    """Random pair supported on a finite point set; returns (pair, points)."""
    if n_points is None:
        n_points = rng.randint(2, 6)
    pool = sorted({Fraction(rng.randint(0, 24), 24) for _ in range(3 * n_points)})
    points = pool[:n_points] if len(pool) >= n_points else pool
    weights = [1, -1, 2, Fraction(1, 2), -Fraction(1, 3)]
    table = {}
    for x in points:
        if rng.random() < 0.2:
            table[x] = None
        else:
            table[x] = (rng.choice(points), rng.choice(weights))

    def base(x, table=table):
        return table.get(x)

    corrections = []
    for _ in range(rng.randint(1, 3)):
        pieces = []
        for _ in range(rng.randint(1, 3)):
            lo, hi = sorted(rng.sample(range(0, 25), 2))
            pieces.append((Fraction(lo, 24), Fraction(hi, 24),
                           rng.random() < 0.5, rng.random() < 0.5,
                           rng.choice([1, -1, 2])))
        form = StepForm(tuple(pieces))
        vec = FormalVector([(rng.choice(points), rng.choice([1, -1, 3]))
                            for _ in range(rng.randint(1, 2))])
        corrections.append(RankOneTerm(form, vec))
    return FiniteRankPair(base, corrections, name="random"), points


@dataclass
class SelfTestResult:
    index: int
    traces_ok: bool
    duality_ok: bool
    first_failure: object = None


def selftest(count=50, seed=0, n_max=10, degree=32):
    """Randomized check of pair traces and det/trace duality against dense matrices."""
    rng = random.Random(seed)
    results = []
    for i in range(count):
        P, pts = random_pair(rng)
        dense = dense_traces(P, pts, max(n_max, degree))
        traces = pair_traces(P, n_max, degree)
        traces_ok = traces == dense[:n_max]
        det = pair_determinant(P, degree)
        from_dense = TruncatedSeries.from_traces(dense[:degree], degree)
        bad = det.first_mismatch(from_dense)
        failure = None
        if not traces_ok:
            failure = next(n + 1 for n, (a, b) in enumerate(zip(traces, dense))
                           if a != b)
        elif bad is not None:
            failure = bad
        results.append(SelfTestResult(i, traces_ok, bad is None, failure))
    return results
