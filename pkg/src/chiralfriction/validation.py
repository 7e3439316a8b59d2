"""Oracle checks backing the ``validate`` command and the acceptance tests.

Every check returns a :class:`CheckResult`; tolerances and time budgets
live in :data:`TOLERANCES` and :data:`TIME_BUDGETS` so the printed table
and the tests read the same numbers.
"""
import math
import time
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import friction as fr
from . import material, polarization, quadrature, specfun
from .material import DrudeMetal
from .polarization import TransitionDipole

__all__ = [
    "TOLERANCES",
    "TIME_BUDGETS",
    "CheckResult",
    "CHECKS",
    "bessel_oracle",
    "random_dipole",
    "run_checks",
    "format_table",
]

REFERENCE = dict(omega0=0.1, d=0.1, v=0.05)

TOLERANCES = {
    "reflection_identity": 1e-12,
    "bessel_golden": 1e-10,
    "bessel_recurrence": 1e-12,
    "ky_reduction": 1e-3,
    "reduction_2d": 1e-3,
    "lossless_limit": 1e-2,
    "chirality_ratio": 10.0,
    "conjugation": 1e-12,
    "optimal_velocity": 0.15,
    "pe_infinity_half": 0.05,
    "trajectory_steady": 1e-3,
    "greens_symmetry": 1e-10,
}

# seconds
TIME_BUDGETS = {
    "reflection_identity": 1.0,
    "bessel": 1.0,
    "ky_reduction": 10.0,
    "reduction_2d": 120.0,
    "lossless_limit": 120.0,
    "signs": 60.0,
    "single_force": 0.010,
    "frequency_height_map": 30.0,
    "validate": 300.0,
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    metric: float
    tolerance: float
    runtime: float = 0.0
    details: list = field(default_factory=list)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name:<24s} metric={self.metric:<12.4g} "
            f"tol={self.tolerance:<10.3g} time={self.runtime:7.3f}s"
        )


def random_dipole(rng):
    """Normalized dipole with independent complex Gaussian components."""
    comps = rng.normal(size=3) + 1j * rng.normal(size=3)
    comps /= np.linalg.norm(comps)
    return TransitionDipole(*comps)


def _named_dipoles():
    return {
        "x": TransitionDipole.linear("x"),
        "y": TransitionDipole.linear("y"),
        "z": TransitionDipole.linear("z"),
        "chiral+": TransitionDipole.chiral(1),
        "chiral-": TransitionDipole.chiral(-1),
    }


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


# --------------------------------------------------------------------------
# Bessel oracle: arbitrary-precision ascending series / asymptotic series

def bessel_oracle(order, x, dps=60):
    """``K_order(x)`` from an mpmath power series (x <= 25) or the
    large-argument asymptotic series (x > 25), as a Python float."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        n = int(order)
        if x > 25:
            mu = 4 * n * n
            term = mpmath.mpf(1)
            total = mpmath.mpf(1)
            k = 1
            while True:
                nxt = term * (mu - (2 * k - 1) ** 2) / (k * 8 * x)
                if abs(nxt) >= abs(term) or abs(nxt) < mpmath.mpf(10) ** (-30):
                    break
                total += nxt
                term = nxt
                k += 1
            return float(mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.exp(-x) * total)
        half = x / 2
        t = half * half
        log_half = mpmath.log(half)
        # finite part
        finite = mpmath.mpf(0)
        for k in range(n):
            finite += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * (-t) ** k
        finite *= half ** (-n) / 2
        series = mpmath.mpf(0)
        k = 0
        while True:
            term = (mpmath.digamma(k + 1) + mpmath.digamma(n + k + 1)) * t**k / (
                mpmath.factorial(k) * mpmath.factorial(n + k)
            )
            series += term
            if k > 5 and abs(term) < abs(series) * mpmath.mpf(10) ** (-40):
                break
            k += 1
        i_n = _bessel_i_series(n, x)
        value = finite + (-1) ** (n + 1) * log_half * i_n + (-1) ** n * half**n / 2 * series
        return float(value)


def _bessel_i_series(n, x):
    t = (x / 2) ** 2
    total = mpmath.mpf(0)
    k = 0
    while True:
        term = t**k / (mpmath.factorial(k) * mpmath.factorial(n + k))
        total += term
        if k > 5 and term < total * mpmath.mpf(10) ** (-40):
            break
        k += 1
    return total * (x / 2) ** n


# --------------------------------------------------------------------------
# individual checks

def check_reflection_identity(n=10_000, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for gamma_c in (0.0, 0.02, 0.2, 1.0):
        metal = DrudeMetal(gamma_c)
        omega = rng.uniform(-3, 3, n // 4) + 1j * rng.uniform(-3, 3, n // 4)
        poles = material.reflection_poles(metal)
        keep = np.all([np.abs(omega - p) > 1e-2 for p in poles], axis=0)
        omega = omega[keep]
        a = material.reflection(metal, omega)
        b = material.reflection_pole_form(metal, omega)
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(a))))
    tol = TOLERANCES["reflection_identity"]
    return CheckResult("reflection_identity", worst <= tol, worst, tol)


def check_bessel():
    golden = max(
        _rel(specfun.bessel_k(order, 1.0), bessel_oracle(order, 1.0)) for order in (0, 1, 2)
    )
    xs = np.geomspace(1e-4, 100, 400)
    k0 = specfun.bessel_k(0, xs)
    k1 = specfun.bessel_k(1, xs)
    k2 = specfun.bessel_k(2, xs)
    recurrence = float(np.max(np.abs(k2 - k0 - 2 * k1 / xs) / k2))
    # spot values across the range against the oracle
    spots = np.geomspace(1e-4, 100, 25)
    spread = max(
        _rel(specfun.bessel_k(order, x), bessel_oracle(order, x)) for order in (0, 1) for x in spots
    )
    metric = max(golden, spread)
    passed = metric <= TOLERANCES["bessel_golden"] and recurrence <= TOLERANCES["bessel_recurrence"]
    return CheckResult(
        "bessel",
        passed,
        metric,
        TOLERANCES["bessel_golden"],
        details=[f"golden={golden:.3g}", f"spread={spread:.3g}", f"recurrence={recurrence:.3g}"],
    )


def numeric_ky_kernel(kx, dip, d, spec=None):
    """k_y integral of ``pol_factor * exp(-2|k|d)`` by adaptive quadrature."""
    spec = spec or quadrature.QuadratureSpec(rel_tol=1e-10, abs_tol=1e-300)

    def f(ky):
        return polarization.pol_factor(kx, ky, dip) * np.exp(-2 * d * np.hypot(kx, ky))

    scale = 1 / (2 * d)
    right = quadrature.integrate_semi_infinite(f, 0.0, 1, scale, spec)
    left = quadrature.integrate_semi_infinite(f, 0.0, -1, scale, spec)
    return right.value + left.value


def check_ky_reduction(n=50, seed=2):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        kx = rng.uniform(-40, 40)
        d = rng.uniform(0.03, 0.3)
        dip = random_dipole(rng)
        closed = polarization.ky_reduced_kernel(kx, dip, d)
        worst = max(worst, _rel(closed, numeric_ky_kernel(kx, dip, d)))
    tol = TOLERANCES["ky_reduction"]
    return CheckResult("ky_reduction", worst <= tol, worst, tol)


def random_lossy_config(rng):
    kin = fr.AtomKinematics(
        omega0=rng.uniform(0.02, 1.0), d=rng.uniform(0.05, 0.2), v=rng.uniform(0.02, 0.2)
    )
    metal = DrudeMetal(rng.uniform(0.05, 0.5))
    return kin, metal, random_dipole(rng), rng.uniform(0, 1)


def check_reduction_2d(n=20, seed=3):
    rng = np.random.default_rng(seed)
    worst = 0.0
    details = []
    for _ in range(n):
        kin, metal, dip, pe = random_lossy_config(rng)
        f1 = fr.friction_force_lossy(kin, metal, dip, pe)
        f2 = fr.friction_force_lossy_2d(kin, metal, dip, pe)
        r1 = fr.decay_rates_lossy(kin, metal, dip)
        r2 = fr.decay_rates_lossy_2d(kin, metal, dip)
        errs = [
            _rel(f1.excited_channel, f2.excited_channel),
            _rel(f1.ground_channel, f2.ground_channel),
            _rel(f1.total, f2.total),
            _rel(r1.gamma_plus, r2.gamma_plus),
            _rel(r1.gamma_minus, r2.gamma_minus),
        ]
        worst = max(worst, *errs)
    tol = TOLERANCES["reduction_2d"]
    return CheckResult("reduction_2d", worst <= tol, worst, tol, details=details)


def check_lossless_limit():
    metal = DrudeMetal(1e-4)
    worst = 0.0
    details = []
    for v in (0.02, 0.05, 0.1):
        kin = fr.AtomKinematics(REFERENCE["omega0"], REFERENCE["d"], v)
        for name, dip in _named_dipoles().items():
            exact_r = fr.decay_rates_lossless(kin, dip)
            exact_f = fr.friction_force_lossless(kin, dip, 0.0)
            lossy_r = fr.decay_rates_lossy(kin, metal, dip)
            lossy_f = fr.friction_force_lossy(kin, metal, dip, 0.0)
            errs = {
                "F_ground": _rel(lossy_f.ground_channel, exact_f.ground_channel),
                "F_excited": _rel(lossy_f.excited_channel, exact_f.excited_channel),
                "gamma_plus": _rel(lossy_r.gamma_plus, exact_r.gamma_plus),
                "gamma_minus": _rel(lossy_r.gamma_minus, exact_r.gamma_minus),
            }
            for key, err in errs.items():
                if err > TOLERANCES["lossless_limit"]:
                    details.append(f"v={v} dipole={name} {key}: rel. deviation {err:.3g}")
                worst = max(worst, err)
    tol = TOLERANCES["lossless_limit"]
    return CheckResult("lossless_limit", worst <= tol, worst, tol, details=details)


def check_signs(n=1000, seed=4):
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -math.inf
    for i in range(n):
        kin = fr.AtomKinematics(
            omega0=rng.uniform(0.0, 2.0), d=rng.uniform(0.02, 0.3), v=rng.uniform(0.01, 0.3)
        )
        dip = random_dipole(rng)
        metal = None if i % 2 == 0 else DrudeMetal(rng.uniform(1e-3, 1.0))
        rates = fr.decay_rates(kin, dip, metal)
        force = fr.friction_force(kin, dip, 0.0, metal)
        bad = rates.gamma_plus < 0 or rates.gamma_minus < 0 or force.total > 0
        if metal is None:
            steady = fr.steady_state_force_lossless(kin, dip)
            bad = bad or not steady.total < 0
            worst = max(worst, steady.total)
        worst = max(worst, force.total)
        violations += bad
    return CheckResult("signs", violations == 0, float(violations), 0.0,
                       details=[f"max force over samples {worst:.3g}"])


def check_chirality():
    kin = fr.AtomKinematics(**REFERENCE)
    minus = TransitionDipole.chiral(-1)
    plus = TransitionDipole.chiral(1)
    ratio = abs(fr.friction_force_lossless(kin, minus, 0.0).total) / abs(
        fr.friction_force_lossless(kin, plus, 0.0).total
    )
    swap = (
        abs(fr.friction_force_lossless(kin, minus, 0.0).total)
        > abs(fr.friction_force_lossless(kin, minus, 1.0).total)
        and abs(fr.friction_force_lossless(kin, plus, 1.0).total)
        > abs(fr.friction_force_lossless(kin, plus, 0.0).total)
    )
    # conjugation flips s_y only: W(kx; conj g) = W(-kx; g)
    rng = np.random.default_rng(5)
    conj_err = 0.0
    for _ in range(200):
        dip = random_dipole(rng)
        kx = rng.uniform(-50, 50)
        d = rng.uniform(0.02, 0.3)
        conj_err = max(
            conj_err,
            _rel(
                polarization.ky_reduced_kernel(kx, dip.conj(), d),
                polarization.ky_reduced_kernel(-kx, dip, d),
            ),
        )
        r1 = fr.decay_rates_lossless(kin, dip.conj())
        k_plus, k_minus = fr.plasmon_wavenumbers(kin)
        # closed form with s_y negated
        for k, val in ((k_plus, r1.gamma_plus), (k_minus, r1.gamma_minus)):
            xi = 2 * abs(k) * kin.d
            k0, k1, k2 = (specfun.bessel_k(n, xi) for n in (0, 1, 2))
            expect = k * k / kin.v * (
                (dip.px - dip.py) * k0 + 0.5 * (dip.py + dip.pz) * (k0 + k2) - np.sign(k) * dip.s_y * k1
            )
            conj_err = max(conj_err, _rel(val, expect))
    passed = ratio > TOLERANCES["chirality_ratio"] and swap and conj_err <= TOLERANCES["conjugation"]
    return CheckResult(
        "chirality",
        passed,
        ratio,
        TOLERANCES["chirality_ratio"],
        details=[f"channel swap={swap}", f"conjugation error={conj_err:.3g}"],
    )


def velocity_argmax(omega0, d, v_grid, dip=None):
    dip = dip or TransitionDipole.linear("z")
    forces = [abs(fr.friction_force_lossless(fr.AtomKinematics(omega0, d, v), dip, 0.0).total)
              for v in v_grid]
    return float(v_grid[int(np.argmax(forces))])


MAP_OMEGA0 = np.linspace(0.0, 1.0, 11)
MAP_D = np.linspace(0.07, 0.3, 8)


def frequency_height_grid(omega0=MAP_OMEGA0, d=MAP_D, v=0.05, gamma_c=0.2):
    """Ground-state force magnitudes on an (omega0, d) grid, shape (len(d), len(omega0))."""
    metal = DrudeMetal(gamma_c)
    dip = TransitionDipole.chiral(-1)
    out = np.empty((len(d), len(omega0)))
    for i, dd in enumerate(d):
        for j, w0 in enumerate(omega0):
            out[i, j] = fr.ground_state_force(fr.AtomKinematics(w0, dd, v), dip, metal)
    return out


def check_scaling():
    d = 0.02
    omega0 = REFERENCE["omega0"]
    grid = np.linspace(0.001, 0.05, 981)
    v_best = velocity_argmax(omega0, d, grid)
    v_est = fr.optimal_velocity(omega0, d)
    vel_err = abs(v_best - v_est) / v_best
    forces = np.abs(frequency_height_grid())
    lowest = bool(np.all(np.argmax(forces, axis=1) == 0))
    passed = vel_err <= TOLERANCES["optimal_velocity"] and lowest
    return CheckResult(
        "scaling_laws",
        passed,
        vel_err,
        TOLERANCES["optimal_velocity"],
        details=[f"grid argmax v={v_best:.5g}, estimate={v_est:.5g}", f"map argmax in lowest omega0 bin={lowest}"],
    )


def check_dissipation_crossover():
    dip = TransitionDipole.linear("z")
    metal = DrudeMetal(0.2)
    out = {}
    for v in (0.01, 0.1):
        kin = fr.AtomKinematics(REFERENCE["omega0"], REFERENCE["d"], v)
        lossy = abs(fr.friction_force_lossy(kin, metal, dip, 0.0).total)
        lossless = abs(fr.friction_force_lossless(kin, dip, 0.0).total)
        out[v] = lossy / lossless
    passed = out[0.01] > 1 and out[0.1] < 1
    return CheckResult(
        "dissipation_crossover",
        passed,
        out[0.01],
        1.0,
        details=[f"|F_lossy/F_lossless| at v=0.01: {out[0.01]:.4g}, at v=0.1: {out[0.1]:.4g}"],
    )


def check_dynamics():
    dip = TransitionDipole.linear("z")
    kin = fr.AtomKinematics(**REFERENCE)
    rates = fr.decay_rates_lossless(kin, dip)
    exact = fr.excited_probability(math.inf, 0.3, rates) == rates.gamma_minus / (
        rates.gamma_minus + rates.gamma_plus
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        fast = fr.AtomKinematics(REFERENCE["omega0"], REFERENCE["d"], 0.5)
    half = abs(fr.decay_rates_lossless(fast, dip).pe_infinity - 0.5)
    t_end = 20.0 / rates.total
    steady = fr.steady_state_force_lossless(kin, dip).total
    traj_err = 0.0
    for pe0 in (0.0, 1.0):
        last = fr.force_trajectory(kin, dip, pe0, [0.0, t_end])[-1]
        traj_err = max(traj_err, abs(last.force.total - steady) / abs(steady))
    passed = exact and half < TOLERANCES["pe_infinity_half"] and traj_err < TOLERANCES["trajectory_steady"]
    return CheckResult(
        "dynamics",
        passed,
        traj_err,
        TOLERANCES["trajectory_steady"],
        details=[f"exact pe_inf={exact}", f"|pe_inf(v=0.5) - 1/2|={half:.3g}"],
    )


def check_greens_symmetry(n=1000, seed=6):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        metal = DrudeMetal(rng.uniform(0, 1))
        kx = rng.uniform(-50, 50)
        xi = rng.uniform(1e-3, 10)
        d = rng.uniform(0.02, 0.3)
        g1 = polarization.greens_kx_qs(kx, 1j * xi, metal, d)
        g2 = polarization.greens_kx_qs(-kx, 1j * xi, metal, d)
        scale = np.max(np.abs(g1))
        worst = max(worst, float(np.max(np.abs(g1 - np.conj(g2))) / scale))
    tol = TOLERANCES["greens_symmetry"]
    return CheckResult("greens_symmetry", worst <= tol, worst, tol)


CHECKS = {
    "reflection_identity": check_reflection_identity,
    "bessel": check_bessel,
    "ky_reduction": check_ky_reduction,
    "reduction_2d": check_reduction_2d,
    "lossless_limit": check_lossless_limit,
    "signs": check_signs,
    "chirality": check_chirality,
    "scaling_laws": check_scaling,
    "dissipation_crossover": check_dissipation_crossover,
    "dynamics": check_dynamics,
    "greens_symmetry": check_greens_symmetry,
}


def run_checks(names=None):
    """Run the named checks (all by default) and time each one."""
    results = []
    for name in names or CHECKS:
        start = time.perf_counter()
        try:
            res = CHECKS[name]()
        except Exception as exc:  # a crash is a failed check, not an aborted suite
            res = CheckResult(name, False, math.nan, math.nan, details=[f"{type(exc).__name__}: {exc}"])
        res.runtime = time.perf_counter() - start
        budget = TIME_BUDGETS.get(name)
        if budget is not None and res.runtime > budget:
            res.passed = False
            res.details.append(f"runtime {res.runtime:.2f}s exceeds budget {budget}s")
        results.append(res)
    return results


def format_table(results):
    lines = []
    for res in results:
        lines.append(res.line())
        lines.extend(f"      {d}" for d in res.details)
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
