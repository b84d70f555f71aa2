"""Kneading matrices and the determinants D(z), L(z) of a PM map."""
from dataclasses import dataclass, field

from .errors import IdentityViolated, PointOutsideOmega
from .finite_rank import FiniteRankPair, RankOneTerm, StepForm, pair_matrix
from .pm_domain import (DEFAULT_LAP_BUDGET, LEFT, RIGHT, FormalVector,
                        lap_levels, rational, side_symbol)
from .series import TruncatedSeries, det_id_minus_zM


def step_form(domain, c, side):
    """omega_c^-: 1 on [c, b_i];  omega_c^+: -1 on ]c, b_i]."""
    c = rational(c)
    i = domain.component_of(c)
    if i is None:
        raise PointOutsideOmega(f"{c} is not in Omega")
    b = domain.intervals[i][1]
    if side == LEFT:
        return StepForm.indicator(c, b, 1, lo_closed=True)
    if c == b:
        return StepForm.zero()
    return StepForm.indicator(c, b, -1, lo_closed=False)


def kneading_index(F):
    return [(c, s) for c in F.critical for s in (LEFT, RIGHT)]


def _vector(F, c, side, signed):
    v = F.limit(c, side)
    if v is None:
        return FormalVector.zero()
    w = F.side_sign(c, side) if signed else 1
    return FormalVector.point(v, w)


def kneading_pair(F, signed=True):
    """(eps F_#0, eps F_#1) when signed, else (F_#0, F_#1), as a finite-rank pair."""
    terms = [RankOneTerm(step_form(F.domain, c, s), _vector(F, c, s, signed))
             for c, s in kneading_index(F)]
    base = F.signed_action if signed else F.action
    return FiniteRankPair(base, terms, name="signed" if signed else "unsigned",
                          labels=kneading_index(F))


@dataclass
class KneadingData:
    index: list
    degree: int
    M: object
    N: object
    D: TruncatedSeries
    L: TruncatedSeries
    signed_pair: FiniteRankPair = field(repr=False)
    unsigned_pair: FiniteRankPair = field(repr=False)

    @property
    def size(self):
        return len(self.index)

    def labels(self):
        return [f"{c}{side_symbol(s)}" for c, s in self.index]

    def traces(self, n_max=None):
        """(signed traces, unsigned traces) from the log-derivatives of D and L."""
        n_max = self.degree if n_max is None else n_max
        return (self.D.log_derivative_traces()[:n_max],
                self.L.log_derivative_traces()[:n_max])


def kneading_matrices(F, degree):
    sp = kneading_pair(F, signed=True)
    up = kneading_pair(F, signed=False)
    M = pair_matrix(sp, degree)
    N = pair_matrix(up, degree)
    return KneadingData(kneading_index(F), degree, M, N,
                        det_id_minus_zM(M, degree), det_id_minus_zM(N, degree),
                        sp, up)


def sigma(F, lap):
    """sigma(I) = omega_c^+(F^n(c+)) + omega_d^-(F^n(d-)) for a lap [c, d].

    Cross-checked against the crossing characterization; a disagreement
    raises IdentityViolated.
    """
    c, d = lap.left, lap.right
    yc, yd = lap.value_left(), lap.value_right()
    value = step_form(F.domain, c, RIGHT)(yc) + step_form(F.domain, d, LEFT)(yd)
    if yc <= c and d <= yd:
        expected = 1
    elif c < yc and yd < d:
        expected = -1
    else:
        expected = 0
    if value != expected:
        raise IdentityViolated(f"sigma on [{c},{d}]", lap.level, value, expected)
    return value


@dataclass
class TraceRow:
    n: int
    sigma_sum: int
    signed_sigma_sum: int
    trace_L: int
    trace_D: int
    fix_neg: int

    @property
    def ok(self):
        return (self.sigma_sum == self.trace_L
                and self.signed_sigma_sum == self.trace_D
                and self.trace_D - self.trace_L == 2 * self.fix_neg)


def trace_identity_check(F, n_max, budget=DEFAULT_LAP_BUDGET, data=None,
                         raise_on_failure=True):
    """Per iterate: sum of sigma vs trace from L, signed sum vs trace from D,
    and their difference vs twice the number of negative fixed points."""
    if data is None or data.degree < n_max:
        data = kneading_matrices(F, n_max)
    tr_d, tr_l = data.traces(n_max)
    rows = []
    for n, level in enumerate(lap_levels(F, n_max, budget), start=1):
        s = es = fneg = 0
        for lap in level:
            v = sigma(F, lap)
            s += v
            es += lap.sign * v
            fneg += lap.has_negative_fixed_point()
        row = TraceRow(n, s, es, tr_l[n - 1], tr_d[n - 1], fneg)
        if raise_on_failure and not row.ok:
            raise IdentityViolated("trace identity", n,
                                   (row.sigma_sum, row.signed_sigma_sum,
                                    row.trace_D - row.trace_L),
                                   (row.trace_L, row.trace_D, 2 * row.fix_neg))
        rows.append(row)
    return rows


@dataclass
class SeriesIdentity:
    name: str
    degree: int
    first_failure: int = None

    @property
    def ok(self):
        return self.first_failure is None

    def as_dict(self):
        return {"name": self.name, "ok": self.ok, "degree": self.degree,
                "first_failure": self.first_failure}


def negative_lift_counts(F, n_max, budget=DEFAULT_LAP_BUDGET):
    """#Fix^-(F^n) for n = 1..n_max by counting diagonal crossings on laps."""
    return [sum(lap.has_negative_fixed_point() for lap in level)
            for level in lap_levels(F, n_max, budget)]


def check_kneading_zeta_identity(F, degree, counts=None, data=None,
                                 budget=DEFAULT_LAP_BUDGET,
                                 raise_on_failure=True):
    """exp(sum 2 #Fix^-(F^n) z^n / n) = L(z) / D(z) up to ``degree``."""
    if counts is None:
        counts = negative_lift_counts(F, degree, budget)
    if data is None or data.degree < degree:
        data = kneading_matrices(F, degree)
    lhs = TruncatedSeries.from_counts([2 * c for c in counts], degree)
    rhs = data.L.truncate(degree) / data.D.truncate(degree)
    bad = lhs.first_mismatch(rhs)
    if raise_on_failure and bad is not None:
        raise IdentityViolated("exp sum 2#Fix^-(F^n)/n z^n = L/D", bad,
                               lhs[bad], rhs[bad])
    return SeriesIdentity("kneading zeta identity", degree, bad)


def iterate_consistency(F, power=2, n_max=6, budget=DEFAULT_LAP_BUDGET):
    """Pair traces of F^power against every power-th trace of F's pairs.

    Returns the list of mismatching n (empty when consistent).
    """
    m = n_max // power
    G = F.iterate(power, budget)
    base = kneading_matrices(F, m * power)
    it = kneading_matrices(G, m)
    fd, fl = base.traces()
    gd, gl = it.traces()
    bad = []
    for k in range(1, m + 1):
        if gd[k - 1] != fd[power * k - 1] or gl[k - 1] != fl[power * k - 1]:
            bad.append(k)
    return bad


def coefficient_range_ok(data):
    allowed = {-1, 0, 1}
    return (data.M.coefficient_set() <= allowed
            and data.N.coefficient_set() <= allowed)
