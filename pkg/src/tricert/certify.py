"""Proof drivers and certificate assembly.

The extremality proof for each problem (Dirichlet ground state, and the
edge-mean problem governing the interpolation constant) runs in three
steps over the normalized family T(theta):

1. Reduction (no computation): moving the apex vertically off the unit
   circle can only increase the first eigenvalue, so minimality over the
   normalized lens reduces to the arc theta in (0, pi/3].
2. Away from the corner: over I = (0, pi/3 - epsilon], certified point
   brackets at schedule breakpoints are extended across each subinterval
   by the eigenvalue perturbation factors; the minimum extended lower
   bound must exceed the certified upper bound at theta = pi/3.
3. Near the corner: over J = [pi/3 - epsilon, pi/3], the derivative of
   lambda_1 with respect to theta is enclosed per subinterval by the
   discrete derivative functional of a mapped reference eigenfunction
   plus the certified Err envelope; a strictly negative upper end proves
   lambda_1 keeps decreasing into the corner.  Validity requires
   lambda_1 to stay simple on J, which step 3 certifies first.

"Proven" therefore means: lambda_1(theta) > lambda_1(pi/3) on I, and
lambda_1 strictly decreasing on J, i.e. the equilateral triangle is the
strict minimizer (equivalently, the interpolation-constant maximizer).

Everything reported in a Certificate is backed by outward-rounded
arithmetic on certified enclosures; the per-interval ledger makes each
logical step auditable without rerunning the code.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy

from .bounds import (
    LEMMA_CONST,
    BracketError,
    DerivativePoint,
    EigBracket,
    F_interval,
    F_of,
    bracket,
    err_bound,
    eta_range,
)
from .eigsolve import EigensolveError, quad_form_interval, solve_lowest, verify_enclosure
from .fem import assemble, build_space
from .geometry import perturbation_factor_bounds, triangle_from_angle
from .mesh import uniform_subdivide
from .rounding import Interval, cos_interval, cot_interval, dn, sin_interval, up

PROBLEMS = ("dirichlet", "cr-constant")
_BC = {"dirichlet": "dirichlet", "cr-constant": "edge-mean"}

PAPER_EPSILON = {"dirichlet": math.pi / 1500, "cr-constant": math.pi / 3000}
PAPER_N2 = {"dirichlet": 200, "cr-constant": 100}
# corner-bracket meshes; see README for how these interact with the
# published bracket windows
EQ_MESH = {"dirichlet": (288, 128), "cr-constant": (192, 32)}

CERT_SCHEMA = "triangle-extremality-certificate/1"


class CertifyError(RuntimeError):
    """A proof step could not be completed; message carries the interval."""


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing breakpoints in (0, pi/3].

    Algorithm 1 reads them as right endpoints of the half-open cover
    (theta_{i-1}, theta_i] of (0, theta_N], with theta_0 = 0 implicit.
    """

    breakpoints: tuple[float, ...]
    provenance: str = "custom"

    def __post_init__(self):
        bp = self.breakpoints
        if not bp:
            raise ValueError("schedule needs at least one breakpoint")
        if any(not (0.0 < t <= math.pi / 3) for t in bp):
            raise ValueError("breakpoints must lie in (0, pi/3]")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")


def paper_schedule(problem: str) -> Schedule:
    """The published subdivision of I for each problem.

    Scaled fractions of pi/3: steps of 0.02 over the bulk, then
    geometrically finer panels approaching the corner, ending exactly at
    pi/3 - epsilon.
    """
    _check_problem(problem)
    if problem == "dirichlet":
        fracs = (
            [0.02 * i for i in range(1, 46)]
            + [0.9 + 0.01 * (i - 45) for i in range(46, 51)]
            + [0.95 + 0.001 * (i - 50) for i in range(51, 91)]
            + [0.99 + 0.0001 * (i - 90) for i in range(91, 171)]
        )
    else:
        fracs = (
            [0.02 * i for i in range(1, 41)]
            + [0.8 + 0.001 * (i - 40) for i in range(41, 231)]
            + [0.99 + 0.0001 * (i - 230) for i in range(231, 321)]
        )
    pts = [math.pi / 3 * f for f in fracs]
    pts[-1] = math.pi / 3 - PAPER_EPSILON[problem]  # exact float butt joint with J
    return Schedule(tuple(pts), provenance=f"paper-{problem}")


def quick_schedule(problem: str) -> Schedule:
    """Coarse desk-scale cover of I; completes in minutes, margins not guaranteed."""
    _check_problem(problem)
    fracs = [i / 20 for i in range(1, 20)] + [0.96, 0.97, 0.98, 0.99, 0.995]
    pts = [math.pi / 3 * f for f in fracs]
    pts.append(math.pi / 3 - PAPER_EPSILON[problem])
    return Schedule(tuple(pts), provenance=f"quick-{problem}")


def schedule_from_file(path: str) -> Schedule:
    """JSON file holding a list of breakpoints (radians)."""
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as exc:
        raise ValueError(f"cannot read schedule file {path}: {exc}") from exc
    if not isinstance(data, list):
        raise ValueError(f"schedule file {path} must hold a JSON list of angles")
    return Schedule(tuple(float(t) for t in data), provenance=f"file:{path}")


def _check_problem(problem: str) -> None:
    if problem not in PROBLEMS:
        raise ValueError(f"problem must be one of {PROBLEMS}, got {problem!r}")


# ---------------------------------------------------------------------------
# run configuration


@dataclass(frozen=True)
class RunConfig:
    """Everything a proof run depends on.

    quick=True overrides meshes and schedules with the desk-scale preset
    (cg_n = cr_n = 32, coarse cover of I, n2 = 10).
    """

    problem: str
    cg_n: int = 96
    cr_n: int = 64
    epsilon: float | None = None        # default: published value per problem
    n2: int | None = None               # default: published value per problem
    schedule: str = "paper"             # "paper" or a JSON file path
    eq_cg_n: int | None = None          # corner-bracket meshes (see EQ_MESH)
    eq_cr_n: int | None = None
    jobs: int = 1
    quick: bool = False

    def __post_init__(self):
        _check_problem(self.problem)
        for name in ("cg_n", "cr_n"):
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 1):
                raise ValueError(f"{name} must be a positive integer, got {v}")
        for name in ("eq_cg_n", "eq_cr_n"):
            v = getattr(self, name)
            if v is not None and not (isinstance(v, int) and v >= 1):
                raise ValueError(f"{name} must be a positive integer, got {v}")
        if self.epsilon is not None and not (0.0 < self.epsilon < math.pi / 3):
            raise ValueError(f"epsilon must lie in (0, pi/3), got {self.epsilon}")
        if self.n2 is not None and self.n2 < 1:
            raise ValueError(f"n2 must be >= 1, got {self.n2}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")

    # resolved (effective) values ------------------------------------------

    @property
    def eff_cg_n(self) -> int:
        return 32 if self.quick else self.cg_n

    @property
    def eff_cr_n(self) -> int:
        return 32 if self.quick else self.cr_n

    @property
    def eff_epsilon(self) -> float:
        return PAPER_EPSILON[self.problem] if self.epsilon is None else self.epsilon

    @property
    def eff_n2(self) -> int:
        if self.quick:
            return 10
        return PAPER_N2[self.problem] if self.n2 is None else self.n2

    @property
    def eff_eq_mesh(self) -> tuple[int, int]:
        if self.quick:
            return (2 * self.eff_cg_n, self.eff_cr_n)
        d_cg, d_cr = EQ_MESH[self.problem]
        return (
            d_cg if self.eq_cg_n is None else self.eq_cg_n,
            d_cr if self.eq_cr_n is None else self.eq_cr_n,
        )

    def schedule_obj(self) -> Schedule:
        if self.quick:
            return quick_schedule(self.problem)
        if self.schedule == "paper":
            return paper_schedule(self.problem)
        return schedule_from_file(self.schedule)


# ---------------------------------------------------------------------------
# certified point data


@dataclass(frozen=True)
class PointData:
    """Certified quantities at one angle (no vectors kept; pickle-friendly).

    Gram entries are raw quadratic forms of the unnormalized conforming
    ground vector; mass carries the normalization.
    """

    theta: float
    cg_n: int
    cr_n: int
    lam1: EigBracket
    lam2: EigBracket
    gram_xx: tuple[float, float]
    gram_xy: tuple[float, float]
    gram_yy: tuple[float, float]
    mass: tuple[float, float]


def compute_point(problem: str, theta: float, cg_n: int, cr_n: int) -> PointData:
    """Solve both discrete problems at one angle and certify the brackets."""
    _check_problem(problem)
    bc = _BC[problem]
    tri = triangle_from_angle(theta)

    mesh_cr = uniform_subdivide(tri, cr_n)
    ops_cr = assemble(build_space(mesh_cr, "cr", bc))
    enc_cr = solve_lowest(ops_cr, 2)
    enc_cr = [verify_enclosure(ops_cr, enc_cr[0], (enc_cr[1],)), enc_cr[1]]

    ops_cg = assemble(build_space(uniform_subdivide(tri, cg_n), "cg", bc))
    enc_cg = solve_lowest(ops_cg, 2)
    enc_cg = [verify_enclosure(ops_cg, enc_cg[0], (enc_cg[1],)), enc_cg[1]]

    lam1, lam2 = bracket(enc_cr, enc_cg, mesh_cr.h)

    u = enc_cg[0].vector
    xx = quad_form_interval(ops_cg.Kxx, u)
    xy = quad_form_interval(ops_cg.Kxy, u)
    yy = quad_form_interval(ops_cg.Kyy, u)
    mm = quad_form_interval(ops_cg.M, u)
    return PointData(
        theta, cg_n, cr_n, lam1, lam2,
        (xx.lo, xx.hi), (xy.lo, xy.hi), (yy.lo, yy.hi), (mm.lo, mm.hi),
    )


def _point_worker(task: tuple[int, str, float, int, int]):
    idx, problem, theta, cg_n, cr_n = task
    try:
        return idx, compute_point(problem, theta, cg_n, cr_n)
    except (EigensolveError, BracketError, ValueError) as exc:
        raise CertifyError(f"point solve failed at theta={theta!r}: {exc}") from exc


def compute_points(
    problem: str, thetas, cg_n: int, cr_n: int, jobs: int = 1
) -> dict[float, PointData]:
    """Certified point data for every angle, optionally in parallel.

    Results are merged by task index, so the mapping does not depend on
    completion order or on the worker count.
    """
    uniq = sorted(set(float(t) for t in thetas))
    tasks = [(i, problem, t, cg_n, cr_n) for i, t in enumerate(uniq)]
    out: dict[float, PointData] = {}
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for idx, pd in pool.map(_point_worker, tasks, chunksize=4):
                out[uniq[idx]] = pd
    else:
        for task in tasks:
            idx, pd = _point_worker(task)
            out[uniq[idx]] = pd
    return out


# ---------------------------------------------------------------------------
# ledger rows


@dataclass(frozen=True)
class LedgerRow:
    """One certified subinterval; F columns empty for step-2 rows."""

    i: int
    theta_lo: float
    theta_hi: float
    lambda1_lo: float
    lambda1_hi: float
    lambda2_lo: float
    f_lo: float | None = None
    f_hi: float | None = None
    err: float | None = None


CSV_COLUMNS = (
    "i", "theta_lo", "theta_hi",
    "lambda1_lo", "lambda1_hi", "lambda2_lo",
    "F_lo", "F_hi", "Err",
)


def _fmt(x: float | int | None) -> str:
    return "" if x is None else repr(x)


def write_ledger_csv(path, rows: list[LedgerRow]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(
                [
                    r.i, _fmt(r.theta_lo), _fmt(r.theta_hi),
                    _fmt(r.lambda1_lo), _fmt(r.lambda1_hi), _fmt(r.lambda2_lo),
                    _fmt(r.f_lo), _fmt(r.f_hi), _fmt(r.err),
                ]
            )


# ---------------------------------------------------------------------------
# algorithm 1: lower bound over I


@dataclass(frozen=True)
class Algorithm1Result:
    lower_min: float
    argmin_interval: int
    rows: list[LedgerRow]


def algorithm1(
    schedule: Schedule,
    problem: str,
    cg_n: int = 96,
    cr_n: int = 64,
    jobs: int = 1,
    points: dict[float, PointData] | None = None,
) -> Algorithm1Result:
    """Certified lower bound of lambda_1 over I = (0, last breakpoint].

    Each subinterval (theta_{i-1}, theta_i] gets the point bracket at its
    right endpoint, extended leftward by the infimum of the perturbation
    low factor over the subinterval (attained at an endpoint; the ratio
    monotonicity behind that is asserted per call, not assumed).
    """
    _check_problem(problem)
    if points is None:
        points = compute_points(problem, schedule.breakpoints, cg_n, cr_n, jobs)
    rows = []
    lower_min = math.inf
    argmin = -1
    prev = 0.0
    for i, th in enumerate(schedule.breakpoints, start=1):
        pd = points[th]
        try:
            flo, _ = perturbation_factor_bounds(th, prev, th)
            ext_lo = (Interval(pd.lam1.lower) * Interval(flo)).lo
            lam2_ext = (Interval(pd.lam2.lower) * Interval(flo)).lo
        except (ValueError, ZeroDivisionError) as exc:
            raise CertifyError(f"interval {i} (theta_hi={th!r}): {exc}") from exc
        if ext_lo > pd.lam1.lower:
            raise CertifyError(f"interval {i}: extension exceeded the point bracket")
        if ext_lo <= 0.0:
            raise CertifyError(f"interval {i}: extended lower bound not positive")
        rows.append(LedgerRow(i, prev, th, ext_lo, pd.lam1.upper, lam2_ext))
        if ext_lo < lower_min:
            lower_min, argmin = ext_lo, i
        prev = th
    return Algorithm1Result(lower_min, argmin, rows)


# ---------------------------------------------------------------------------
# step 3: simplicity and derivative range over J


@dataclass(frozen=True)
class SimplicityEvidence:
    lambda1_upper: float
    lambda2_lower: float

    @property
    def separated(self) -> bool:
        return self.lambda1_upper < self.lambda2_lower


@dataclass(frozen=True)
class DerivativeRange:
    f_lo: float
    f_hi: float
    rows: list[LedgerRow]
    corner: DerivativePoint
    eta_max: float
    err_max: float


def j_nodes(epsilon: float, n2: int) -> list[float]:
    """Equal subdivision of J = [pi/3 - epsilon, pi/3] into n2 parts."""
    if epsilon < 0.0 or epsilon >= math.pi / 3:
        raise ValueError(f"epsilon must lie in [0, pi/3), got {epsilon}")
    if epsilon == 0.0:
        return [math.pi / 3]
    if n2 < 1:
        raise ValueError(f"n2 must be >= 1, got {n2}")
    start = math.pi / 3 - epsilon
    h = epsilon / n2
    nodes = [start + i * h for i in range(n2)] + [math.pi / 3]
    if any(b <= a for a, b in zip(nodes, nodes[1:])):
        raise ValueError("J subdivision too fine for float resolution")
    return nodes


def _j_factors(t_lo: float, t_hi: float) -> tuple[float, float]:
    if t_lo == t_hi:
        return (1.0, 1.0)
    return perturbation_factor_bounds(t_lo, t_lo, t_hi)


def simplicity_check(
    epsilon: float,
    n2: int,
    problem: str,
    cg_n: int = 96,
    cr_n: int = 64,
    jobs: int = 1,
    points: dict[float, PointData] | None = None,
) -> SimplicityEvidence:
    """Certified lambda_1 upper vs lambda_2 lower over all of J.

    Per subinterval, the left-endpoint brackets are pushed across by the
    perturbation factors; the evidence compares the worst cases.  Run
    for both problems, including the one whose simplicity is classical.
    """
    _check_problem(problem)
    nodes = j_nodes(epsilon, n2)
    if points is None:
        points = compute_points(problem, nodes, cg_n, cr_n, jobs)
    lam1_up = -math.inf
    lam2_lo = math.inf
    for t_lo, t_hi in _j_pairs(nodes):
        pd = points[t_lo]
        flo, fhi = _j_factors(t_lo, t_hi)
        lam1_up = max(lam1_up, (Interval(pd.lam1.upper) * Interval(fhi)).hi)
        lam2_lo = min(lam2_lo, (Interval(pd.lam2.lower) * Interval(flo)).lo)
    return SimplicityEvidence(lam1_up, lam2_lo)


def _j_pairs(nodes: list[float]) -> list[tuple[float, float]]:
    if len(nodes) == 1:
        return [(nodes[0], nodes[0])]
    return list(zip(nodes, nodes[1:]))


def algorithm2(
    epsilon: float,
    n2: int,
    problem: str,
    cg_n: int = 96,
    cr_n: int = 64,
    jobs: int = 1,
    points: dict[float, PointData] | None = None,
    simplicity: SimplicityEvidence | None = None,
) -> DerivativeRange:
    """Certified range of dlambda_1/dtheta over J.

    Per subinterval [theta_i, theta_{i+1}] with the reference eigenpair
    solved at theta_i:

    * lambda_1, lambda_2 and the mapped-reference Rayleigh quotient are
      pushed across the subinterval by the perturbation factors;
    * the derivative functional of the mapped reference is enclosed
      through the exact gram transform with alpha, beta ranging over the
      subinterval;
    * the certified envelope err_bound (with the box-wide eta_range
      supremum) widens that enclosure to cover the true derivative.

    The result is the hull over subintervals.  The corner diagnostics
    (gram triple, F, Err at theta = pi/3) ride along.
    """
    _check_problem(problem)
    nodes = j_nodes(epsilon, n2)
    if points is None:
        points = compute_points(problem, nodes, cg_n, cr_n, jobs)
    if simplicity is None:
        simplicity = simplicity_check(epsilon, n2, problem, cg_n, cr_n, jobs, points)
    if not simplicity.separated:
        raise CertifyError(
            "simplicity precondition unmet on J: "
            f"lambda1 upper {simplicity.lambda1_upper} >= "
            f"lambda2 lower {simplicity.lambda2_lower}"
        )

    rows = []
    f_lo = math.inf
    f_hi = -math.inf
    eta_max = 0.0
    err_max = 0.0
    for i, (t_lo, t_hi) in enumerate(_j_pairs(nodes), start=1):
        pd = points[t_lo]
        try:
            row = _algorithm2_interval(i, t_lo, t_hi, pd)
        except (ValueError, ZeroDivisionError, BracketError) as exc:
            raise CertifyError(f"interval {i} (theta in [{t_lo!r}, {t_hi!r}]): {exc}") from exc
        rows.append(row)
        f_lo = min(f_lo, row.f_lo)
        f_hi = max(f_hi, row.f_hi)
        eta_max = max(eta_max, row._eta)
        err_max = max(err_max, row.err)

    corner = _corner_point(points[nodes[-1]])
    return DerivativeRange(f_lo, f_hi, rows, corner, eta_max, err_max)


@dataclass(frozen=True)
class _Row3(LedgerRow):
    _eta: float = 0.0


def _algorithm2_interval(i: int, t_lo: float, t_hi: float, pd: PointData) -> _Row3:
    flo, fhi = _j_factors(t_lo, t_hi)
    a_lo = (Interval(pd.lam1.lower) * Interval(flo)).lo
    a_hi = (Interval(pd.lam1.upper) * Interval(fhi)).hi
    rho_lo = (Interval(pd.lam2.lower) * Interval(flo)).lo

    X = Interval(*pd.gram_xx)
    C = Interval(*pd.gram_xy)
    Y = Interval(*pd.gram_yy)
    m = Interval(*pd.mass)
    R = (X + Y) / m
    b_hi = (R * Interval(fhi)).hi
    b_lo = (R * Interval(flo)).lo

    if not (b_hi < rho_lo):
        raise BracketError(
            f"reference Rayleigh upper {b_hi} not below separator {rho_lo}"
        )
    e = eta_range((a_lo, a_hi), (b_lo, b_hi), (rho_lo, rho_lo))
    err = err_bound(a_lo, b_hi, rho_lo, (t_lo, t_hi), eta_value=e)

    tt = Interval(t_lo, t_hi)
    ti = Interval(t_lo)
    st = sin_interval(ti)
    al = (cos_interval(tt) - cos_interval(ti)) / st
    be = sin_interval(tt) / st
    Yt = (al * al * X - 2.0 * al * C + Y) / be
    Ct = -al * X + C
    f_iv = F_interval(Ct, Yt, cot_interval(tt), be * m)

    return _Row3(
        i, t_lo, t_hi,
        lambda1_lo=a_lo, lambda1_hi=a_hi, lambda2_lo=rho_lo,
        f_lo=dn(f_iv.lo - err, 2), f_hi=up(f_iv.hi + err, 2),
        err=err, _eta=e,
    )


def _corner_point(pd: PointData) -> DerivativePoint:
    X = Interval(*pd.gram_xx)
    C = Interval(*pd.gram_xy)
    Y = Interval(*pd.gram_yy)
    m = Interval(*pd.mass)
    b_hi = ((X + Y) / m).hi
    err = err_bound(pd.lam1.lower, b_hi, pd.lam2.lower, pd.theta)
    gram = (X.mid / m.mid, C.mid / m.mid, Y.mid / m.mid)
    return DerivativePoint(
        pd.theta, gram[0], gram[1], gram[2], 1.0,
        F_of(gram, pd.theta), err,
    )


# ---------------------------------------------------------------------------
# full proof


@dataclass(frozen=True)
class Certificate:
    """Machine-readable record of one proof run."""

    problem: str
    verdict: str                 # "proven" | "failed"
    config: dict
    environment: dict
    step1: dict
    step2: dict
    step3: dict
    failure: dict | None
    rows_step2: list[LedgerRow] = field(repr=False)
    rows_step3: list[LedgerRow] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "schema": CERT_SCHEMA,
            "problem": self.problem,
            "verdict": self.verdict,
            "config": self.config,
            "environment": self.environment,
            "step1": self.step1,
            "step2": self.step2,
            "step3": self.step3,
            "failure": self.failure,
            "ledger": {
                "step2": [_row_dict(r) for r in self.rows_step2],
                "step3": [_row_dict(r) for r in self.rows_step3],
            },
        }

    def to_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=1)
            f.write("\n")

    def write_csv(self, path) -> None:
        write_ledger_csv(path, self.rows_step2 + self.rows_step3)


def _row_dict(r: LedgerRow) -> dict:
    return {
        "i": r.i,
        "theta_lo": r.theta_lo,
        "theta_hi": r.theta_hi,
        "lambda1_lo": r.lambda1_lo,
        "lambda1_hi": r.lambda1_hi,
        "lambda2_lo": r.lambda2_lo,
        "F_lo": r.f_lo,
        "F_hi": r.f_hi,
        "Err": r.err,
    }


_STEP1_NOTE = (
    "Search region reduced to the arc theta in (0, pi/3] of the normalized "
    "lens: moving the apex vertically toward the unit circle only lowers "
    "lambda_1 (domain monotonicity in the vertical coordinate), so the "
    "extremal shape lies on the arc. Recorded, not computed."
)


def run_proof(problem: str, config: RunConfig | None = None) -> Certificate:
    """Execute steps 1-3 and assemble the Certificate.

    Sub-step failures (solver non-convergence, inverted brackets,
    sign-indefinite envelope) yield verdict "failed" with the diagnosis
    in the certificate rather than an exception; only configuration
    errors raise.
    """
    if config is None:
        config = RunConfig(problem=problem)
    if config.problem != problem:
        raise ValueError(
            f"config.problem={config.problem!r} does not match problem={problem!r}"
        )

    sched = config.schedule_obj()
    eps = config.eff_epsilon
    n2 = config.eff_n2
    cg_n, cr_n = config.eff_cg_n, config.eff_cr_n
    eq_cg, eq_cr = config.eff_eq_mesh

    if sched.breakpoints[-1] < math.pi / 3 - eps:
        raise ValueError(
            f"schedule ends at {sched.breakpoints[-1]} but the corner interval "
            f"starts at {math.pi / 3 - eps}; the union would not cover (0, pi/3]"
        )

    cfg_record = {
        "problem": problem,
        "cg_n": cg_n,
        "cr_n": cr_n,
        "eq_cg_n": eq_cg,
        "eq_cr_n": eq_cr,
        "epsilon": eps,
        "n2": n2,
        "schedule_provenance": sched.provenance,
        "schedule_breakpoints": list(sched.breakpoints),
        "quick": config.quick,
        "lemma_constant": LEMMA_CONST,
        "enclosure_model": (
            "rayleigh +- certified residual (M-inverse norm via mass eigenvalue "
            "lower bound, running-error majorants, outward rounding)"
        ),
    }
    env_record = {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }

    step1 = {"note": _STEP1_NOTE, "computational": False}
    step2: dict = {}
    step3: dict = {}
    failure = None
    rows2: list[LedgerRow] = []
    rows3: list[LedgerRow] = []
    verdict = "failed"

    try:
        nodes = j_nodes(eps, n2)
        points = compute_points(
            problem, list(sched.breakpoints) + nodes, cg_n, cr_n, config.jobs
        )
        eq_pd = compute_point(problem, math.pi / 3, eq_cg, eq_cr)

        alg1 = algorithm1(sched, problem, cg_n, cr_n, config.jobs, points)
        rows2 = alg1.rows
        step2 = {
            "lower_min": alg1.lower_min,
            "argmin_interval": alg1.argmin_interval,
            "equilateral_lower": eq_pd.lam1.lower,
            "equilateral_upper": eq_pd.lam1.upper,
            "margin": alg1.lower_min - eq_pd.lam1.upper,
            "ok": alg1.lower_min > eq_pd.lam1.upper,
        }
        if not step2["ok"]:
            failure = {
                "stage": "step2",
                "detail": (
                    f"bracket too wide: interval {alg1.argmin_interval} lower bound "
                    f"{alg1.lower_min} does not exceed the corner upper bound "
                    f"{eq_pd.lam1.upper}"
                ),
            }

        simp = simplicity_check(eps, n2, problem, cg_n, cr_n, config.jobs, points)
        step3 = {
            "simplicity": {
                "lambda1_upper": simp.lambda1_upper,
                "lambda2_lower": simp.lambda2_lower,
                "separated": simp.separated,
            }
        }
        if simp.separated:
            rng = algorithm2(eps, n2, problem, cg_n, cr_n, config.jobs, points, simp)
            rows3 = [
                LedgerRow(r.i, r.theta_lo, r.theta_hi, r.lambda1_lo,
                          r.lambda1_hi, r.lambda2_lo, r.f_lo, r.f_hi, r.err)
                for r in rng.rows
            ]
            step3.update(
                {
                    "f_lo": rng.f_lo,
                    "f_hi": rng.f_hi,
                    "eta_max": rng.eta_max,
                    "err_max": rng.err_max,
                    "corner": {
                        "theta": rng.corner.theta,
                        "gram_xx": rng.corner.gram_xx,
                        "gram_xy": rng.corner.gram_xy,
                        "gram_yy": rng.corner.gram_yy,
                        "f_value": rng.corner.f_value,
                        "err": rng.corner.err,
                    },
                    "ok": rng.f_hi < 0.0,
                }
            )
            if not step3["ok"] and failure is None:
                offender = max(rng.rows, key=lambda r: r.f_hi)
                failure = {
                    "stage": "step3",
                    "detail": (
                        f"derivative envelope sign-indefinite: interval {offender.i} "
                        f"has F_hi = {offender.f_hi} >= 0"
                    ),
                }
        else:
            step3["ok"] = False
            if failure is None:
                failure = {
                    "stage": "step3",
                    "detail": "simplicity evidence failed: enclosures overlap on J",
                }

        if step2.get("ok") and step3.get("ok"):
            verdict = "proven"
    except (CertifyError, EigensolveError, BracketError) as exc:
        failure = {"stage": "abort", "detail": str(exc)}

    return Certificate(
        problem, verdict, cfg_record, env_record,
        step1, step2, step3, failure, rows2, rows3,
    )
