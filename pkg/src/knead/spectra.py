"""Negative fixed points, zeta functions and entropy estimates for graph maps."""
from dataclasses import dataclass, field
from fractions import Fraction
import math

from .config import RunConfig
from .errors import IdentityViolated, InfiniteFixedSet, UnstableRoot
from .finite_rank import (FiniteRankPair, RankOneTerm, StepForm,
                          check_multiplicativity, pair_determinant)
from .graph import spectral_radius
from .kneading import kneading_matrices, kneading_pair
from .pm_domain import DEFAULT_LAP_BUDGET, FormalVector, lap_levels
from .series import (TruncatedSeries, _growth_fit, det_id_minus_zM,
                     smallest_root_in_disk)


def count_fix_neg_lift(F, n, budget=DEFAULT_LAP_BUDGET):
    """#Fix^-(F^n): decreasing laps of F^n whose graph crosses the diagonal."""
    for level in lap_levels(F, n, budget):
        pass
    return sum(lap.has_negative_fixed_point() for lap in level)


@dataclass
class LapStatistics:
    """Per-iterate data from one pass over the laps of F, ..., F^n_max."""
    n_max: int
    laps: list
    variation: list
    fix_neg: list
    fix: list            # None from the first iterate with a diagonal lap on
    infinite_at: int = None


def lap_statistics(F, n_max, budget=DEFAULT_LAP_BUDGET):
    laps, var, neg, fix = [], [], [], []
    infinite_at = None
    for n, level in enumerate(lap_levels(F, n_max, budget), start=1):
        laps.append(len(level))
        var.append(sum((lap.variation() for lap in level), Fraction(0)))
        neg.append(sum(lap.has_negative_fixed_point() for lap in level))
        if infinite_at is None and any(lap.on_diagonal() for lap in level):
            infinite_at = n
        if infinite_at is None:
            fix.append(sum(lap.fixed_point() is not None for lap in level))
        else:
            fix.append(None)
    return LapStatistics(n_max, laps, var, neg, fix, infinite_at)


@dataclass
class PeriodicCriticalPoints:
    """Points of periodic orbits of f through pi(C_F), with germ behaviour.

    ``kind`` per point: "swap" if f^period exchanges the two germs, "keep"
    if it preserves them, "fold" if not locally injective, "vertex" for
    vertices.
    """
    points: dict        # canonical point -> period
    kind: dict
    horizon: int

    def fix_count(self, n):
        return sum(1 for p in self.points.values() if n % p == 0)

    def neg_count(self, n):
        return sum(1 for y, p in self.points.items()
                   if n % p == 0 and self.kind[y] == "swap" and (n // p) % 2 == 1)

    def as_dict(self):
        return {str(y): {"period": p, "germs": self.kind[y]}
                for y, p in sorted(self.points.items())}


def _germ_kind(f, y, period):
    if f.graph.is_vertex_point(y):
        return "vertex"
    g1, g2 = f.graph.germs(y)
    h1, h2 = f.germ_map(y, period)
    if h1 == h2:
        return "fold"
    if (h1, h2) == (g2, g1):
        return "swap"
    return "keep"


def periodic_critical_points(f, horizon):
    """The set P restricted to periods <= horizon."""
    points = {}
    for q in f.critical_points:
        if q in points:
            continue
        orbit = f.orbit(q, horizon)
        period = next((k for k in range(1, horizon + 1) if orbit[k] == q), None)
        if period is None:
            continue
        for y in orbit[:period]:
            points[y] = period
    kind = {y: _germ_kind(f, y, p) for y, p in points.items()}
    return PeriodicCriticalPoints(points, kind, horizon)


@dataclass
class FixCounts:
    """Row n - 1 describes f^n; ``graph_neg = lift_neg + p_neg``."""
    n_max: int
    lift_neg: list
    p_neg: list
    p_fix: list
    graph_neg: list
    source: list

    def rows(self):
        return [{"n": n + 1, "fix_neg_lift": self.lift_neg[n],
                 "p_fix_neg": self.p_neg[n], "p_fix": self.p_fix[n],
                 "fix_neg_graph": self.graph_neg[n], "source": self.source[n]}
                for n in range(self.n_max)]


def glued_point_corrections(f, n_max):
    P = periodic_critical_points(f, n_max)
    return ([P.neg_count(n) for n in range(1, n_max + 1)],
            [P.fix_count(n) for n in range(1, n_max + 1)], P)


def fix_counts(f, n_max, budget=DEFAULT_LAP_BUDGET, stats=None, data=None,
               upto=None):
    """Fix^- counts.  Up to ``n_max`` from laps; beyond, up to ``upto``, from
    the trace difference of the kneading determinants."""
    upto = n_max if upto is None else upto
    if stats is None or stats.n_max < min(n_max, upto):
        stats = lap_statistics(f.F, min(n_max, upto), budget)
    lift = list(stats.fix_neg[:min(n_max, upto)])
    source = ["laps"] * len(lift)
    if upto > len(lift):
        if data is None or data.degree < upto:
            data = kneading_matrices(f.F, upto)
        tr_d, tr_l = data.traces(upto)
        for n in range(len(lift) + 1, upto + 1):
            diff = tr_d[n - 1] - tr_l[n - 1]
            if diff % 2 or diff < 0:
                raise IdentityViolated("trace difference is 2#Fix^-", n, diff, "even")
            lift.append(diff // 2)
            source.append("traces")
    p_neg, p_fix, _ = glued_point_corrections(f, upto)
    graph = [a + b for a, b in zip(lift, p_neg)]
    return FixCounts(upto, lift, p_neg, p_fix, graph, source)


def graph_negative_fixed_bruteforce(f, n, budget=DEFAULT_LAP_BUDGET):
    """#Fix^-(f^n) by direct enumeration: crossings inside laps of F^n plus
    every point of pi(C_{F^n}) that f^n fixes while swapping its germs."""
    for level in lap_levels(f.F, n, budget):
        pass
    count = sum(lap.has_negative_fixed_point() for lap in level)
    candidates = {f.graph.representative(x) for lap in level
                  for x in (lap.left, lap.right)}
    for y in candidates:
        if f.orbit(y, n)[-1] == y and f.is_negative_fixed(y, n):
            count += 1
    return count


def _matpow_traces(A, n_max):
    r = len(A)
    P = [[int(i == j) for j in range(r)] for i in range(r)]
    out = []
    for _ in range(n_max):
        P = [[sum(A[i][k] * P[k][j] for k in range(r)) for j in range(r)]
             for i in range(r)]
        out.append(sum(P[i][i] for i in range(r)))
    return out


def _det_id_minus_z(A, degree):
    return det_id_minus_zM(
        [[TruncatedSeries.constant(x, degree) for x in row] for row in A], degree)


@dataclass
class LefschetzZeta:
    numerator: TruncatedSeries     # det(Id - z f_*1)
    denominator: TruncatedSeries   # det(Id - z f_*0)
    series: TruncatedSeries
    from_traces: TruncatedSeries

    @property
    def consistent(self):
        return self.series == self.from_traces

    def closed_form(self):
        def poly(s):
            d = s.is_polynomial_of_degree()
            return [str(Fraction(c)) for c in s.coeffs[:d + 1]]
        return {"numerator": poly(self.numerator),
                "denominator": poly(self.denominator)}


def zeta_lefschetz(f, degree):
    A1 = f.h1_matrix()
    A0 = f.h0_matrix()
    num = _det_id_minus_z(A1, degree)
    den = _det_id_minus_z(A0, degree)
    series = num / den
    t0 = _matpow_traces(A0, degree)
    t1 = _matpow_traces(A1, degree) if A1 else [0] * degree
    expo = TruncatedSeries.from_counts([a - b for a, b in zip(t0, t1)], degree)
    return LefschetzZeta(num, den, series, expo)


def zeta_minus(f, degree, counts=None, **kw):
    if counts is None or counts.n_max < degree:
        counts = fix_counts(f, kw.get("n_max", min(degree, 12)),
                            kw.get("budget", DEFAULT_LAP_BUDGET),
                            upto=degree, data=kw.get("data"))
    return TruncatedSeries.from_counts([2 * c for c in counts.graph_neg], degree)


def zeta_mt(f, degree, counts=None, lefschetz=None, **kw):
    zm = zeta_minus(f, degree, counts, **kw)
    zl = lefschetz or zeta_lefschetz(f, degree)
    return zm / zl.series


@dataclass
class CorrectionFactor:
    a_coefficients: list     # n * a_n = 2#P∩Fix^-(f^n) - #P∩Fix(f^n)
    H: TruncatedSeries
    identity_first_failure: int
    bounded: bool

    @property
    def ok(self):
        return self.identity_first_failure is None and self.bounded


def correction_factor_H(f, degree, zmt=None, D=None, counts=None, **kw):
    """H = exp(a) with ζ^MT · D = H checked to ``degree``."""
    P = periodic_critical_points(f, degree)
    na = [2 * P.neg_count(n) - P.fix_count(n) for n in range(1, degree + 1)]
    H = TruncatedSeries.from_counts(na, degree)
    if zmt is None:
        zmt = zeta_mt(f, degree, counts, **kw)
    if D is None:
        D = kneading_matrices(f.F, degree).D
    bad = (zmt * D.truncate(degree)).first_mismatch(H)
    bound = len(P.points)
    return CorrectionFactor(na, H, bad, all(abs(x) <= bound for x in na))


def lefschetz_factorization_check(f, degree, L=None, lefschetz=None):
    """ζ^L = L(z) exp(sum #P∩Fix(f^n) z^n / n); returns first failing degree."""
    if L is None:
        L = kneading_matrices(f.F, degree).L
    zl = lefschetz or zeta_lefschetz(f, degree)
    P = periodic_critical_points(f, degree)
    corr = TruncatedSeries.from_counts(
        [P.fix_count(n) for n in range(1, degree + 1)], degree)
    return zl.series.first_mismatch(L.truncate(degree) * corr)


def factorization_pairs(f):
    """The pairs (alpha, F, beta) of the Lefschetz factorization.

    alpha = (0, f_*1) on the cycle space, F = (F_#0, F_#1), and
    beta = (beta_0, beta_1) on S_0(G) with G-points stored as canonical
    points of Omega.
    """
    A = f.h1_matrix()
    r = len(A)
    labels = [Fraction(k) for k in range(r)]
    alpha = FiniteRankPair(
        lambda x: None,
        [RankOneTerm(StepForm.point_mass(labels[k]),
                     FormalVector([(labels[j], A[j][k]) for j in range(r)]))
         for k in range(r)],
        name="alpha")
    crit = f.critical_points
    crit_set = set(crit)
    g = f.graph

    def beta0(y):
        if y in crit_set:
            return None
        return g.representative(f.F(y)), 1

    terms = [RankOneTerm(StepForm.point_mass(q), FormalVector.point(f.image(q)))
             for q in crit]
    for comp in range(g.n_components):
        r_k = next(q for q in crit if g.component_of_point(q) == comp)
        pieces = tuple((a, b, True, True, -1)
                       for (a, b), c in zip(g.edges, g.edge_component) if c == comp)
        terms.append(RankOneTerm(StepForm(pieces), FormalVector.point(f.image(r_k))))
    beta = FiniteRankPair(beta0, terms, name="beta")
    return alpha, kneading_pair(f.F, signed=False), beta


def multiplicativity_checks(f, degree):
    """Multiplicativity on (alpha, F, beta) and the beta-determinant identity."""
    alpha, mid, beta = factorization_pairs(f)
    rep = check_multiplicativity(alpha, mid, beta, degree)
    d_beta = pair_determinant(beta, degree)
    P = periodic_critical_points(f, degree)
    rhs = TruncatedSeries.from_counts(
        [-P.fix_count(n) for n in range(1, degree + 1)], degree)
    lhs = d_beta * _det_id_minus_z(f.h0_matrix(), degree)
    return rep, lhs.first_mismatch(rhs)


def artin_mazur_oracle(f, n_max, budget=DEFAULT_LAP_BUDGET):
    """#Fix(f^n) for n <= n_max; InfiniteFixedSet if some F^n has a diagonal lap."""
    P = periodic_critical_points(f, n_max)
    out = []
    for n, level in enumerate(lap_levels(f.F, n_max, budget), start=1):
        total = 0
        for lap in level:
            if lap.on_diagonal():
                raise InfiniteFixedSet(n, (lap.left, lap.right))
            total += lap.fixed_point() is not None
        out.append(total + P.fix_count(n))
    return out


def growth_rate(values, window=None, log_plus=True):
    """Least-squares slope of log values (log+ for counts) over the window."""
    n_all = len(values)
    lo, hi = window if window else (n_all // 2 + 1, n_all)
    pts = []
    for n in range(lo, hi + 1):
        v = values[n - 1]
        v = Fraction(v)
        if log_plus:
            pts.append((n, 0.0 if v <= 1 else _log(v)))
        elif v > 0:
            pts.append((n, _log(v)))
    slope = _growth_fit(pts) if len(pts) >= 2 else 0.0
    return max(slope or 0.0, 0.0), (lo, hi)


def _log(v):
    return math.log(v.numerator) - math.log(v.denominator)


@dataclass
class EntropyReport:
    h_kneading: float
    h_laps: float
    h_variation: float
    h_per_neg: float
    h_hom: float
    h_max: float
    kneading_root: dict
    kneading_stable: bool
    windows: dict
    tolerances: dict
    max_formula_ok: bool
    diagnostics: list = field(default_factory=list)

    @property
    def h_top(self):
        """Best single estimate: the kneading root, or laps when that is unstable."""
        return self.h_kneading if self.kneading_stable else self.h_laps

    def as_dict(self):
        return {
            "h_kneading": self.h_kneading,
            "h_laps": self.h_laps,
            "h_variation": self.h_variation,
            "h_per_neg": self.h_per_neg,
            "h_hom": self.h_hom,
            "h_max": self.h_max,
            "h_top": self.h_top,
            "kneading_root": self.kneading_root,
            "kneading_stable": self.kneading_stable,
            "windows": self.windows,
            "tolerances": self.tolerances,
            "max_formula_ok": self.max_formula_ok,
            "diagnostics": self.diagnostics,
        }


def entropy(f, config=RunConfig(), data=None, stats=None, counts=None):
    N, n_max = config.degree, config.n_max
    if data is None or data.degree < N:
        data = kneading_matrices(f.F, N)
    if stats is None:
        stats = lap_statistics(f.F, n_max, config.lap_budget)
    if counts is None or counts.n_max < N:
        counts = fix_counts(f, n_max, config.lap_budget, stats, data, upto=N)
    diag = []
    stable = True
    try:
        root = smallest_root_in_disk(data.D.truncate(N), 1.0, config.root_tolerance)
        root_info = root.as_dict()
        h_kn = 0.0 if root.root is None else -math.log(root.modulus)
        if root.root is None:
            diag.append("no root of D in the unit disk")
    except UnstableRoot as exc:
        stable = False
        h_kn = -math.log(exc.modulus) if math.isfinite(exc.modulus) else 0.0
        root_info = {"root": "unstable", "modulus": exc.modulus,
                     "half_truncation_modulus": exc.half_modulus}
        diag.append("kneading root unstable under truncation; h_laps preferred")
    h_laps, w_laps = growth_rate(stats.laps)
    h_var, _ = growth_rate(stats.variation)
    h_neg, w_neg = growth_rate(counts.graph_neg)
    h_hom = math.log(max(1.0, spectral_radius(f.h1_matrix()).value))
    h_max = max(h_neg, h_hom)
    h_top = h_kn if stable else h_laps
    # which tolerance applies depends on what produced the numbers compared
    tol_max = config.fit_tolerance if (h_neg > h_hom or not stable) else config.root_tolerance
    max_formula = abs(h_max - h_top) <= tol_max
    if not max_formula:
        diag.append(f"max(h_per_neg, h_hom) = {h_max:.6f} differs from "
                    f"h_top estimate {h_top:.6f}")
    if abs(h_laps - h_top) > config.fit_tolerance:
        diag.append(f"h_laps = {h_laps:.6f} disagrees with h_top estimate {h_top:.6f}")
    if h_neg > h_laps + config.fit_tolerance:
        diag.append("h_per_neg exceeds h_laps")
    if h_hom > h_laps + config.fit_tolerance:
        diag.append("h_hom exceeds h_laps")
    return EntropyReport(
        h_kn, h_laps, h_var, h_neg, h_hom, h_max, root_info, stable,
        {"laps": list(w_laps), "per_neg": list(w_neg), "degree": N},
        {"root": config.root_tolerance, "fit": config.fit_tolerance},
        max_formula, diag)
