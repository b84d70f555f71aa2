"""End-to-end verification of every identity on one graph map."""
from dataclasses import dataclass, field

from .config import RunConfig
from .errors import IdentityViolated, InputError, LapBudgetExceeded
from .finite_rank import CoordinateForm, perturbed_root_bound, selftest
from .graph import functoriality_check
from .kneading import (check_kneading_zeta_identity, coefficient_range_ok,
                       iterate_consistency, kneading_matrices,
                       trace_identity_check)
from .pm_domain import FormalVector, lap_levels
from .series import TruncatedSeries
from .spectra import (correction_factor_H, entropy, fix_counts,
                      graph_negative_fixed_bruteforce, lap_statistics,
                      lefschetz_factorization_check, multiplicativity_checks,
                      zeta_lefschetz, zeta_mt)

IDENTITY_LAP_BUDGET = 300_000


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        return {"name": self.name, "ok": self.ok, **self.detail}


@dataclass
class VerifyReport:
    name: str
    checks: list
    entropy: dict

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c.name for c in self.checks if not c.ok]

    def as_dict(self):
        return {"map": self.name, "ok": self.ok,
                "checks": [c.as_dict() for c in self.checks],
                "entropy": self.entropy}


def _lap_limited_counts(F, degree, budget):
    """#Fix^-(F^n) for n up to ``degree`` or until the lap budget runs out."""
    counts = []
    try:
        for level in lap_levels(F, degree, budget):
            counts.append(sum(lap.has_negative_fixed_point() for lap in level))
    except LapBudgetExceeded:
        pass
    return counts


def _guard(name, fn):
    try:
        return fn()
    except IdentityViolated as exc:
        return Check(name, False, {"degree": exc.degree, "lhs": str(exc.lhs),
                                   "rhs": str(exc.rhs)})


def verify_map(f, config=RunConfig(), name=""):
    F = f.F
    n_id, deg_id = config.identity_n, config.identity_degree
    data = kneading_matrices(F, max(config.degree, deg_id))
    checks = []

    def traces():
        rows = trace_identity_check(F, n_id, config.lap_budget, data,
                                    raise_on_failure=False)
        bad = [r.n for r in rows if not r.ok]
        return Check("trace identity", not bad, {"n_max": n_id, "failing_n": bad})
    checks.append(_guard("trace identity", traces))

    def duality():
        rows = trace_identity_check(F, n_id, config.lap_budget, data,
                                    raise_on_failure=False)
        d = TruncatedSeries.from_traces([r.signed_sigma_sum for r in rows], n_id)
        l = TruncatedSeries.from_traces([r.sigma_sum for r in rows], n_id)
        bad_d = d.first_mismatch(data.D.truncate(n_id))
        bad_l = l.first_mismatch(data.L.truncate(n_id))
        return Check("det/trace duality from lap sums", bad_d is None and bad_l is None,
                     {"degree": n_id, "first_failure_D": bad_d,
                      "first_failure_L": bad_l})
    checks.append(_guard("det/trace duality from lap sums", duality))

    lift_counts = _lap_limited_counts(F, deg_id, IDENTITY_LAP_BUDGET)
    kz_degree = len(lift_counts)

    def kneading_zeta():
        r = check_kneading_zeta_identity(F, kz_degree, lift_counts, data,
                                         raise_on_failure=False)
        return Check("kneading zeta identity", r.ok,
                     {"degree": kz_degree, "first_failure": r.first_failure})
    checks.append(_guard("kneading zeta identity", kneading_zeta))

    stats = lap_statistics(F, config.n_max, config.lap_budget)
    counts = fix_counts(f, config.n_max, config.lap_budget, stats, data,
                        upto=max(config.degree, deg_id))

    def decomposition():
        n = min(n_id, config.n_max)
        brute = [graph_negative_fixed_bruteforce(f, k, config.lap_budget)
                 for k in range(1, n + 1)]
        summed = [counts.lift_neg[k] + counts.p_neg[k] for k in range(n)]
        bad = [k + 1 for k in range(n)
               if not (summed[k] == counts.graph_neg[k] == brute[k])]
        return Check("count decomposition", not bad,
                     {"n_max": n, "failing_n": bad,
                      "fix_neg_graph": counts.graph_neg[:n]})
    checks.append(_guard("count decomposition", decomposition))

    zl = zeta_lefschetz(f, max(config.degree, deg_id))
    checks.append(Check("Lefschetz zeta closed form", zl.consistent,
                        {"degree": zl.series.degree, **zl.closed_form()}))
    bad = lefschetz_factorization_check(f, deg_id, data.L, zl)
    checks.append(Check("Lefschetz zeta factorization", bad is None,
                        {"degree": deg_id, "first_failure": bad}))

    zmt = zeta_mt(f, deg_id, counts, zl)
    H = correction_factor_H(f, deg_id, zmt, data.D, counts)
    checks.append(Check("zeta_MT * D = H", H.ok,
                        {"degree": deg_id, "first_failure": H.identity_first_failure,
                         "log_coefficients_bounded": H.bounded,
                         "count_sources": sorted(set(counts.source[:deg_id]))}))

    try:
        mult, beta_bad = multiplicativity_checks(f, deg_id)
        checks.append(Check("multiplicativity on (alpha, F, beta)", mult.ok,
                            mult.as_dict()))
        checks.append(Check("beta determinant identity", beta_bad is None,
                            {"degree": deg_id, "first_failure": beta_bad}))
    except InputError as exc:
        checks.append(Check("multiplicativity on (alpha, F, beta)", False,
                            {"error": str(exc)}))

    checks.append(Check("kneading coefficients in {-1,0,1}",
                        coefficient_range_ok(data)))
    checks.append(Check("constant terms equal 1",
                        data.D[0] == 1 and data.L[0] == 1))

    def functoriality():
        bad = functoriality_check(f, 4, config.lap_budget)
        return Check("functoriality of f_*1", not bad, {"failing_n": bad})
    checks.append(_guard("functoriality of f_*1", functoriality))

    bad = iterate_consistency(F, 2, 6, config.lap_budget)
    checks.append(Check("iterate consistency", not bad, {"failing_k": bad}))

    bounds = []
    for a, b in F.domain.intervals:
        v = FormalVector([(b, 1), (a, -1)])
        r = perturbed_root_bound(data.signed_pair, CoordinateForm(), v,
                                 deg_id, config.root_tolerance)
        bounds.append(r)
    checks.append(Check("perturbed root bound",
                        all(r.identity_ok and r.bound_ok for r in bounds),
                        {"components": [r.as_dict() for r in bounds]}))

    rep = entropy(f, config, data, stats, counts)
    checks.append(Check("entropy max formula", rep.max_formula_ok,
                        {"h_max": rep.h_max, "h_top": rep.h_top}))
    return VerifyReport(name, checks, rep.as_dict())


def verify_selftest(config=RunConfig()):
    results = selftest(50, config.seed, 10, 32)
    bad = [r.index for r in results if not (r.traces_ok and r.duality_ok)]
    return Check("appendix self-test", not bad,
                 {"pairs": len(results), "seed": config.seed, "failing": bad})
