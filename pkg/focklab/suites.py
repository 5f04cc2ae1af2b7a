"""
Verification suites.

``VerificationRunner`` turns a ``LabConfig`` into a ``SuiteReport`` for one
of the named suites. Every suite is a list of closed-form anchors
(``CheckRecord``) plus the empirical bound reports of ``inequality_lab``.
"""

import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from focklab.carleson import analyze_measure, lattice_measure, measure_zoo, shell_edges, vanishing_profile
from focklab.config import LabConfig
from focklab.entire import EntireFunction, derivative, random_polynomials, taylor_section
from focklab.inequality_lab import (
    check_duality, check_lemma1, check_lemma2, check_lemma4, check_lemma9,
    check_projection_bound, check_theorem3, check_theorem_a, default_x_grid,
    default_z_grid, has_smooth_power, theorem3_rule
)
from focklab.models import CarlesonReport, CheckRecord, SpaceParams, SuiteReport
from focklab.projection import (
    derivative_via_projection, project, project_polynomial, remainder_via_kernel
)
from focklab.quadrature import build_plane_rule, grid_convergence, norm_rule
from focklab.spaces import norm, pairing
from focklab.special import (
    basis, exp_remainder, kernel, kernel_closed_form, kernel_series,
    lemma_series, switch_threshold
)
from focklab.utils import LoggerMixin, UnknownSuiteError, log_execution_time

SUITES = ("kernel", "norms", "projection", "inequalities")
ALL_SUITES = "all"

KERNEL_TOLERANCE = 1e-12
SERIES_TOLERANCE = 1e-10
NORMALIZATION_TOLERANCE = 1e-9
CONVERGENCE_TOLERANCE = 1e-7
IDEMPOTENCE_TOLERANCE = 1e-7
WIDENING_LIMIT = 0.10
THEOREM_A_P_VALUES = (1.0, 2.0, 4.0)
THEOREM_A_M_VALUES = (1, 2, 3)
LATTICE_ORDERS = (0, 1, 2, 3)
STABILITY_LIMIT = 2.0
SUBSET = 20


def _relative(observed: complex, expected: complex) -> float:
    scale = abs(expected)
    return abs(observed - expected) / scale if scale else abs(observed)


def _exponential_integrand(p: float) -> Callable[[np.ndarray], np.ndarray]:
    # |e^{z/2}|^p is not a polynomial in z and conj(z); plane rules are not exact on it
    return lambda z: np.exp(p * z.real / 2.0)


class VerificationRunner(LoggerMixin):
    """Runs the named verification suites under one configuration."""

    def __init__(self, config: Optional[LabConfig] = None):
        """
        Initialize the runner.

        Args:
            config: Tolerances, resolutions and seeds; defaults when omitted
        """
        super().__init__()
        self.config = config or LabConfig()
        self._family: Optional[List[EntireFunction]] = None
        self._suites: Dict[str, Callable[[], SuiteReport]] = {
            "kernel": self.run_kernel,
            "norms": self.run_norms,
            "projection": self.run_projection,
            "inequalities": self.run_inequalities,
        }

    @property
    def resolution(self) -> Dict[str, int]:
        return {
            "radial_degree": self.config.radial_degree,
            "angular_count": self.config.angular_count,
            "panel_nodes": self.config.panel_nodes,
            "disk_node_budget": self.config.disk_node_budget,
        }

    @property
    def family(self) -> List[EntireFunction]:
        """Seeded random polynomial family shared by the empirical checks."""
        if self._family is None:
            self._family = random_polynomials(
                self.config.family_size,
                self.config.family_degree,
                self.config.seed,
                self.config.degree_cap,
            )
        return self._family

    def _report(self, suite: str, checks: Sequence[CheckRecord] = (), bounds=(), carleson=()) -> SuiteReport:
        return SuiteReport(
            suite=suite,
            seed=self.config.seed,
            resolution=self.resolution,
            checks=list(checks),
            bounds=list(bounds),
            carleson=list(carleson),
        )

    def _check(
        self,
        name: str,
        observed: float,
        tolerance: Optional[float],
        expected: Optional[float] = None,
        passed: Optional[bool] = None,
        detail: str = ""
    ) -> CheckRecord:
        """Record one assertion; by default observed must not exceed tolerance."""
        if passed is None:
            passed = math.isfinite(observed) and observed <= tolerance
        record = CheckRecord(
            name=name,
            observed=observed,
            expected=expected,
            tolerance=tolerance,
            passed=passed,
            detail=detail,
        )
        self.logger.log_check(name, passed, observed, tolerance=tolerance)
        return record

    def run(self, suite: str) -> SuiteReport:
        """
        Run one suite, or every suite for ``"all"``.

        Raises:
            UnknownSuiteError: If the suite name is not known
        """
        if suite == ALL_SUITES:
            report = self._report(ALL_SUITES)
            for name in SUITES:
                report = report.merge(self._suites[name]())
            return report
        if suite not in self._suites:
            raise UnknownSuiteError(suite, list(SUITES) + [ALL_SUITES])
        return self._suites[suite]()

    # Kernel suite

    @log_execution_time
    def run_kernel(self) -> SuiteReport:
        """Kernel identities, branch agreement and series anchors."""
        self.logger.info("Running kernel suite")
        z = default_z_grid((0.0, 0.5, 1.0, 2.0, 3.0, 4.0), 12)
        checks = []

        at_origin = max(float(np.max(np.abs(kernel(z, 0.0, m) - 1.0))) for m in range(6))
        checks.append(self._check("kernel_at_origin", at_origin, KERNEL_TOLERANCE, expected=0.0,
                                  detail="K_m(z, 0) = 1 for m <= 5, |z| <= 4"))

        zz, ww = np.meshgrid(z, z, indexing="ij")
        exact = np.exp(zz * np.conj(ww))
        m0 = float(np.max(np.abs(kernel(zz, ww, 0) - exact) / np.abs(exact)))
        checks.append(self._check("kernel_m0_exponential", m0, KERNEL_TOLERANCE, expected=0.0,
                                  detail="K_0(z, w) = e^{z conj(w)} for |z|, |w| <= 4"))

        branch = 0.0
        angles = np.exp(2j * np.pi * (np.arange(16) + 0.5) / 16)
        for m in range(1, 6):
            moduli = np.linspace(1.0, min(1.5 * switch_threshold(m), 30.0), 12)
            zeta = (moduli[:, None] * angles[None, :]).ravel()
            series = kernel_series(zeta, m)
            closed = kernel_closed_form(zeta, m)
            branch = max(branch, float(np.max(np.abs(series - closed) / np.abs(closed))))
        checks.append(self._check("kernel_series_closed_form", branch, SERIES_TOLERANCE, expected=0.0,
                                  detail="both kernel branches on 1 <= |z conj(w)| <= 1.5 * switch"))

        remainder = _relative(exp_remainder(1.0, 1), math.e - 1.0)
        checks.append(self._check("exp_remainder_anchor", remainder, KERNEL_TOLERANCE, expected=math.e - 1.0,
                                  detail="E_1(1) = e - 1"))

        basis_error = max(
            abs(basis(n, m).coefficient(n) - math.sqrt(math.factorial(m) / math.factorial(n + m)))
            for n in range(13) for m in range(5)
        )
        checks.append(self._check("basis_coefficients", basis_error, KERNEL_TOLERANCE, expected=0.0,
                                  detail="e_n = sqrt(m!/(n+m)!) z^n"))

        checks.extend(self._series_anchors())
        return self._report("kernel", checks)

    def _series_anchors(self) -> List[CheckRecord]:
        x_grid = default_x_grid(self.config.sigma, self.config.x_max, self.config.x_points)
        identity = max(abs(lemma_series(0.0, x) * math.exp(-x) - 1.0) for x in x_grid)
        closed = (math.e - 1.0) / math.e
        value = lemma_series(1.0, 1.0) * math.exp(-1.0)
        return [
            self._check("lemma_series_s0", identity, KERNEL_TOLERANCE, expected=0.0,
                        detail="S(0, x) e^{-x} = 1"),
            self._check("lemma_series_s1_x1", abs(value - closed), KERNEL_TOLERANCE, expected=closed,
                        detail="S(1, 1) e^{-1} = (e - 1)/e"),
        ]

    # Norms suite

    @log_execution_time
    def run_norms(self) -> SuiteReport:
        """Orthonormal basis, normalization, sup norms, norm-equivalence band and duality."""
        self.logger.info("Running norms suite")
        cfg = self.config
        checks = []

        gram = 0.0
        for m in range(5):
            rule = build_plane_rule(1.0, cfg.radial_degree, cfg.angular_count, alpha=float(m))
            elements = [basis(n, m, cfg.degree_cap) for n in range(13)]
            for i, e_i in enumerate(elements):
                for j, e_j in enumerate(elements):
                    gram = max(gram, abs(pairing(e_i, e_j, m, rule) - (1.0 if i == j else 0.0)))
        checks.append(self._check("basis_orthonormal", gram, SERIES_TOLERANCE, expected=0.0,
                                  detail="<e_i, e_j>_m = delta_ij for i, j <= 12, m <= 4"))

        one = EntireFunction.constant(1.0)
        normalization = 0.0
        convergence = 0.0
        for p in (0.5, 1.0, 2.0, 3.0, 4.0):
            for m in range(4):
                params = SpaceParams(p=p, m=m)
                rule = norm_rule(params, cfg.radial_degree, cfg.angular_count)
                normalization = max(normalization, abs(norm(one, params, rule) - 1.0))
                if not has_smooth_power(p):
                    convergence = max(convergence, grid_convergence(rule, _exponential_integrand(p)))
        checks.append(self._check("norm_of_one", normalization, NORMALIZATION_TOLERANCE, expected=1.0,
                                  detail="||1||_{p,m} = 1 for p in {0.5, 1, 2, 3, 4}, m <= 3"))
        checks.append(self._check("norm_grid_convergence", convergence, CONVERGENCE_TOLERANCE,
                                  detail="refinement change of the |e^{z/2}|^p integral for non-even p"))

        sup_error = 0.0
        for m in range(4):
            expected = m ** (m / 2.0) * math.exp(-m / 2.0)
            observed = norm(one, SpaceParams(p=math.inf, m=m), sup_rays=cfg.sup_rays,
                            sup_radial_points=cfg.sup_radial_points)
            sup_error = max(sup_error, abs(observed - expected))
        checks.append(self._check("sup_norm_of_one", sup_error, NORMALIZATION_TOLERANCE,
                                  detail="||1||_{inf,m} = m^{m/2} e^{-m/2}"))

        theorem_a = check_theorem_a(
            self.family, THEOREM_A_P_VALUES, THEOREM_A_M_VALUES, radial_degree=cfg.radial_degree,
            angular_count=cfg.angular_count, seed=cfg.seed, n_jobs=cfg.n_jobs
        )
        for p in THEOREM_A_P_VALUES:
            for m in THEOREM_A_M_VALUES:
                key = SpaceParams(p=p, m=m).label()
                widening = theorem_a.extras["widening"].get(key)
                checks.append(self._check(
                    f"theorem_a_widening[{key}]",
                    math.nan if widening is None else widening,
                    WIDENING_LIMIT,
                    detail="band growth from degree 15 sections to the full family"
                ))

        subset = self.family[:SUBSET]
        bounds = [theorem_a]
        for p in (2.0, 4.0):
            bounds.append(check_duality(
                subset, SpaceParams(p=p, m=1), cfg.tolerance, cfg.radial_degree,
                cfg.angular_count, seed=cfg.seed, n_jobs=cfg.n_jobs
            ))
        return self._report("norms", checks, bounds)

    # Projection suite

    @log_execution_time
    def run_projection(self) -> SuiteReport:
        """Reproducing property, integral representations and the projection bound."""
        self.logger.info("Running projection suite")
        cfg = self.config
        checks = []
        z_grid = default_z_grid((0.0, 0.5, 1.0, 1.5, 2.0), 8)

        reproduction = 0.0
        for m in range(4):
            rule = build_plane_rule(1.0, cfg.radial_degree, cfg.angular_count, alpha=float(m))
            for n in range(11):
                image = project_polynomial(EntireFunction.monomial(n), m, rule, cfg.projection_degree)
                values = image(z_grid)
                reproduction = max(reproduction, float(np.max(
                    np.abs(values - z_grid ** n) / (1.0 + np.abs(z_grid) ** n)
                )))
        checks.append(self._check("projection_reproduces_monomials", reproduction, cfg.tolerance,
                                  expected=0.0, detail="Q_m(z^n) = z^n for n <= 10, m <= 3, |z| <= 2"))

        antiholomorphic = abs(project(np.conj, 0, 0j, degree=cfg.projection_degree))
        checks.append(self._check("projection_of_conjugate", antiholomorphic, cfg.tolerance, expected=0.0,
                                  detail="Q_0(conj)(0) = 0"))

        checks.extend(self._representation_checks())

        idempotence = 0.0
        for m in range(4):
            rule = build_plane_rule(1.0, cfg.radial_degree, cfg.angular_count, alpha=float(m))
            for f in random_polynomials(3, 8, cfg.seed, cfg.degree_cap):
                once = project_polynomial(lambda w: np.conj(w) * f(w), m, rule, cfg.projection_degree)
                twice = project_polynomial(once, m, rule, cfg.projection_degree)
                scale = max(1.0, float(np.max(np.abs(once.coeffs)))) if not once.is_zero else 1.0
                idempotence = max(idempotence, float(np.max(np.abs((twice - once).coeffs), initial=0.0)) / scale)
        checks.append(self._check("projection_idempotent", idempotence, IDEMPOTENCE_TOLERANCE, expected=0.0,
                                  detail="Q_m Q_m g = Q_m g for g = conj(z) f, degree 8"))

        bound = check_projection_bound(
            SpaceParams(p=2.0, m=1), self.family[:SUBSET // 2],
            degree=cfg.projection_degree, radial_degree=cfg.radial_degree,
            angular_count=cfg.angular_count, seed=cfg.seed, n_jobs=cfg.n_jobs
        )
        return self._report("projection", checks, [bound])

    def _representation_checks(self) -> List[CheckRecord]:
        cfg = self.config
        z_grid = default_z_grid((0.0, 0.5, 1.0, 2.0), 8)
        rule = build_plane_rule(1.0, cfg.radial_degree, cfg.angular_count)
        derivative_error = 0.0
        remainder_error = 0.0
        for f in random_polynomials(4, 12, cfg.seed, cfg.degree_cap):
            for m in range(1, 4):
                truncation = f.degree + m + cfg.kernel_guard_terms
                fm = derivative(f, m)
                tail = f - taylor_section(f, m)
                for z in z_grid:
                    expected = fm(z)
                    observed = derivative_via_projection(f, m, z, rule, truncation)
                    derivative_error = max(derivative_error, abs(observed - expected) / (1.0 + abs(expected)))
                    expected = tail(z)
                    observed = remainder_via_kernel(fm, m, z, rule, fm.degree + cfg.kernel_guard_terms)
                    remainder_error = max(remainder_error, abs(observed - expected) / (1.0 + abs(expected)))
        return [
            self._check("derivative_representation", derivative_error, cfg.tolerance, expected=0.0,
                        detail="integral form of f^(m) on a 25-point grid, degree 12, m <= 3"),
            self._check("remainder_representation", remainder_error, cfg.tolerance, expected=0.0,
                        detail="integral form of f - f_m on a 25-point grid, degree 12, m <= 3"),
        ]

    # Inequalities suite

    @log_execution_time
    def run_inequalities(self) -> SuiteReport:
        """Series bounds, kernel moments, pointwise estimates and Carleson measures."""
        self.logger.info("Running inequalities suite")
        cfg = self.config
        checks: List[CheckRecord] = []
        bounds = []

        x_grid = default_x_grid(cfg.sigma, cfg.x_max, cfg.x_points)
        bounds.append(check_lemma1(cfg.s_values, x_grid, cfg.sigma, n_jobs=cfg.n_jobs))
        bounds.append(check_lemma2(cfg.s_values, x_grid, cfg.sigma, n_jobs=cfg.n_jobs))

        theorem3 = self._theorem3(checks)
        bounds.extend(theorem3)

        subset = [EntireFunction.constant(1.0), EntireFunction.monomial(1)] + self.family[:SUBSET]
        for p in (0.5, 1.0, 2.0):
            bounds.append(check_lemma4(
                subset, p, tolerance=cfg.tolerance, radial_degree=cfg.radial_degree,
                angular_count=cfg.angular_count, seed=cfg.seed, n_jobs=cfg.n_jobs
            ))
        for p, t in ((2.0, 1.0), (1.0, 0.5)):
            report = check_lemma9(
                self.family[:SUBSET], p, t, node_budget=cfg.disk_node_budget,
                seed=cfg.seed, n_jobs=cfg.n_jobs
            )
            bounds.append(report)
            stability = report.extras.get("family_stability")
            checks.append(self._check(
                f"lemma9_family_stability[p={p:g}, t={t:g}]",
                math.nan if stability is None else stability,
                STABILITY_LIMIT,
                detail="max over the family / max over its first half"
            ))

        carleson = self._carleson_zoo(checks)
        return self._report("inequalities", checks, bounds, carleson)

    def _theorem3(self, checks: List[CheckRecord]) -> list:
        cfg = self.config
        resolution = {
            "radial_degree": cfg.radial_degree,
            "angular_count": cfg.angular_count,
            "panel_nodes": cfg.panel_nodes,
        }
        anchor_grid = default_z_grid((0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0), 8)
        anchor = check_theorem3(2.0, 1.0, 0.0, 0, anchor_grid, cfg.sigma, n_jobs=cfg.n_jobs, **resolution)
        deviation = max(abs(anchor.ratio_min - math.pi), abs(anchor.ratio_max - math.pi)) / math.pi
        checks.append(self._check("theorem3_gaussian_anchor", deviation, NORMALIZATION_TOLERANCE,
                                  expected=math.pi, detail="I(z) e^{-|z|^2} = pi for m = 0, b = 0, p = 2"))

        reports = [anchor]
        sweeps = (
            (2.0, 1.0, 2.0, 1, default_z_grid((0.0, 0.5, 1.0, 2.0, 4.0, 6.0), 8)),
            (1.0, 1.0, -1.0, 2, default_z_grid(tuple(np.linspace(1.0, 12.0, 12)), 8)),
        )
        for p, a, b, m, grid in sweeps:
            report = check_theorem3(p, a, b, m, grid, cfg.sigma, n_jobs=cfg.n_jobs, **resolution)
            fine_rule = theorem3_rule(p, a, b, m, **resolution).refined()
            fine = check_theorem3(p, a, b, m, grid, cfg.sigma, rule=fine_rule, n_jobs=cfg.n_jobs)
            drift = abs(fine.ratio_max - report.ratio_max) / report.ratio_max
            checks.append(self._check(f"theorem3_resolution_drift[p={p:g}, m={m}, b={b:g}]",
                                      drift, cfg.tolerance, detail="ratio_max change under doubled resolution"))
            reports.append(report)
        return reports

    def _carleson_zoo(self, checks: List[CheckRecord]) -> List[CarlesonReport]:
        cfg = self.config
        reports: Dict[str, CarlesonReport] = {}
        for mu, params in measure_zoo():
            reports[mu.name] = analyze_measure(
                mu, params, cfg.carleson_radius, cfg.window, cfg.spacing, cfg.shell_count,
                cfg.growth_factor, cfg.vanishing_fraction, cfg.radial_degree, cfg.angular_count,
                cfg.n_jobs
            )

        disagreements = [name for name, report in reports.items() if not report.verdicts_agree]
        checks.append(self._check(
            "carleson_verdicts_agree", float(len(disagreements)), 0.0,
            detail=", ".join(disagreements) or "geometric and embedding verdicts agree on the zoo"
        ))

        base, scaled = reports["lattice"], reports["scaled"]
        scaling = max(
            _relative(scaled.sup_ratio, 2.0 * base.sup_ratio),
            _relative(scaled.embedding_estimate, 2.0 * base.embedding_estimate),
        )
        checks.append(self._check("carleson_mass_scaling", scaling, KERNEL_TOLERANCE, expected=0.0,
                                  detail="doubling every mass doubles both quantities"))

        expectations = {"lattice": True, "lattice-m0": False, "decaying": True, "exponential": False}
        for name, vanishing in expectations.items():
            profile = reports[name].vanishing
            checks.append(self._check(
                f"carleson_vanishing[{name}]",
                float(profile.is_vanishing),
                None,
                expected=float(vanishing),
                passed=profile.is_vanishing == vanishing,
                detail=f"vanishing profile verdict {profile.verdict.value}"
            ))

        lattice = lattice_measure()
        edges = shell_edges(lattice, cfg.carleson_radius, cfg.shell_count)
        for m in LATTICE_ORDERS:
            profile = vanishing_profile(
                lattice, SpaceParams(p=2.0, m=m), cfg.carleson_radius, edges, cfg.spacing,
                cfg.growth_factor, cfg.vanishing_fraction, cfg.n_jobs
            )
            checks.append(self._check(
                f"lattice_vanishing_profile[m={m}]",
                float(profile.is_vanishing),
                None,
                expected=float(m > 0),
                passed=profile.is_vanishing == (m > 0),
                detail="vanishing exactly when mp > 0"
            ))
        checks.append(self._check(
            "carleson_exponential_unbounded",
            float(reports["exponential"].verdict.is_bounded),
            None,
            expected=0.0,
            passed=not reports["exponential"].verdict.is_bounded,
            detail=f"verdict {reports['exponential'].verdict.value}"
        ))
        return list(reports.values())
