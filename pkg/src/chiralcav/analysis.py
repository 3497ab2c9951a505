"""Derived analyses: exchange asymmetry, symmetry classification, the
similarity map to a hermitian model, RWA breakdown, and the consolidated
invariant check behind ``chiralcav verify``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import dynamics as dyn
from . import propagator as prop
from .fock import FockBasis, FockState, build_basis, sector
from .operators import (
    DomainError,
    ModelParams,
    build_H,
    build_H0,
    build_HI,
    build_intercavity_ops,
    build_number_ops,
    commutator,
    hop_a_to_b,
    hop_b_to_a,
    identity,
    ladder_ops,
    pt_conjugate,
)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class AsymmetryReport:
    params: ModelParams
    from_state: FockState
    to_state: FockState
    amp_forward: complex
    amp_backward: complex
    amplitude_ratio: float
    sector_prob_forward: float
    sector_prob_backward: float
    db_asymmetry: float
    reference_time: float
    ratio_infinite: bool = False


def exchange_asymmetry(params: ModelParams, from_state, reference_time: float) -> AsymmetryReport:
    """Compare one-photon transfer A->B out of ``from_state`` with the reverse hop.

    The forward hop takes |n_A, n_B> to |n_A-1, n_B+1>; the backward hop
    returns from that state. First-order amplitudes are per unit time;
    the sector probabilities are exact |<f|exp(-iHt)|i>|^2 at
    ``reference_time`` with no renormalization.
    """
    src = FockState(*from_state)
    if not src.is_valid() or src.n_a < 1:
        raise ValueError(f"{src} has no photon in cavity A to transfer")
    if not reference_time > 0:
        raise ValueError(f"reference_time must be positive, got {reference_time}")
    dst = FockState(src.n_a - 1, src.n_b + 1)
    amp_f = dyn.small_time_amplitude(params, src, dst, 1.0)
    amp_b = dyn.small_time_amplitude(params, dst, src, 1.0)
    infinite = amp_b == 0
    ratio = math.inf if infinite else abs(amp_f) / abs(amp_b)

    U = prop.sector_propagator(params, src.total, reference_time)
    p_f = float(abs(U[dst.n_a, src.n_a]) ** 2)
    p_b = float(abs(U[src.n_a, dst.n_a]) ** 2)
    if p_b == 0:
        db = math.nan if p_f == 0 else math.inf
    else:
        db = 10 * math.log10(p_f / p_b) if p_f > 0 else -math.inf
    return AsymmetryReport(params, src, dst, amp_f, amp_b, ratio, p_f, p_b, db,
                           float(reference_time), infinite)


def coupling_ratio_for_db(db: float) -> float:
    """Coupling ratio omega_ab/omega_ba whose exact probability asymmetry is ``db`` decibels.

    The N=1 probability ratio is (omega_ab/omega_ba)^2, so the amplitude
    ratio is 10^(db/20). An interpretation aid only.
    """
    return 10 ** (db / 20)


class SymmetryClassification(NamedTuple):
    is_hermitian: bool
    is_pt_symmetric: bool
    regime: str
    hermiticity_residual: float
    pt_residual: float


def classify_symmetry(params: ModelParams, basis: FockBasis) -> SymmetryClassification:
    if basis.n_total_max < 2:
        raise ValueError("classification needs n_total_max >= 2")
    H = build_H(params, basis)
    herm = (H - H.dag()).max_abs()
    pt = (pt_conjugate(H, basis) - H).max_abs()
    is_h, is_pt = herm <= SYMMETRY_TOL, pt <= SYMMETRY_TOL
    if is_h:
        regime = "reciprocal-hermitian"
    elif is_pt:
        regime = "nonreciprocal-PT"
    else:
        regime = "neither"
    return SymmetryClassification(is_h, is_pt, regime, herm, pt)


class SimilarityMap(NamedTuple):
    g_eff: float
    theta: float


def similarity_map(params: ModelParams) -> SimilarityMap:
    """theta with exp(theta (N_A - N_B)) H exp(-theta (N_A - N_B)) hermitian.

    The image is the reciprocal model with coupling g_eff (or -g_eff when
    both couplings are negative).
    """
    params.require_closed_form()
    return SimilarityMap(params.g_eff, 0.25 * math.log(params.omega_ab / params.omega_ba))


def similarity_matrix(params: ModelParams, basis: FockBasis) -> np.ndarray:
    theta = similarity_map(params).theta
    return np.diag([math.exp(theta * (s.n_a - s.n_b)) for s in basis.states])


def hermitian_image(params: ModelParams, basis: FockBasis) -> np.ndarray:
    """D H D^-1 for the diagonal similarity map D."""
    D = similarity_matrix(params, basis)
    d = np.diag(D)
    return (d[:, None] * build_H(params, basis).data) / d[None, :]


def rwa_breakdown_check(params: ModelParams) -> str:
    """'breakdown' when g_eff > omega0 (some levels go negative), else 'ok'."""
    return "breakdown" if params.g_eff > params.omega0 else "ok"


def default_time_grid(params: ModelParams, samples: int = 33, periods: float = 1.0) -> np.ndarray:
    """``samples`` points from 0 across ``periods`` periods 2*pi/g_eff."""
    return np.linspace(0.0, periods * 2 * math.pi / params.g_eff, samples)


# --------------------------------------------------------------------------
# verification

ODE_MAX_STEP = 2.5 / 4000


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    comparison: str = "<="
    detail: str = ""
    group: str = ""


@dataclass
class VerificationReport:
    params: ModelParams
    n_total_max: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "n_total_max": self.n_total_max,
            "passed": self.passed,
            "failed": self.failed(),
            "checks": [asdict(c) for c in self.checks],
        }


class _Recorder:
    def __init__(self, report, group=""):
        self.report = report
        self.group = group

    def upper(self, name, residual, tol, detail=""):
        residual = float(residual)
        self.report.checks.append(
            CheckResult(name, residual, tol, bool(residual <= tol), "<=", detail, self.group))

    def lower(self, name, value, bound, detail=""):
        value = float(value)
        self.report.checks.append(
            CheckResult(name, value, bound, bool(value > bound), ">", detail, self.group))

    def info(self, name, value, detail=""):
        self.report.checks.append(CheckResult(name, float(value), math.nan, True, "info", detail, self.group))

    def skip(self, name, detail):
        self.report.checks.append(CheckResult(name, math.nan, math.nan, True, "skip", detail, self.group))

    def fail(self, name, detail):
        self.report.checks.append(CheckResult(name, math.nan, math.nan, False, "<=", detail, self.group))


def printed_alpha_plus_residual(params: ModelParams) -> float:
    """|1 - [alpha-, alpha+]| when alpha+ carries sqrt(omega_ba) on b+."""
    return abs(1 - (0.5 + 0.5 * math.sqrt(params.omega_ba / params.omega_ab)))


def _check_basis(rec, basis):
    bad = sum(basis.index(s) != i for i, s in enumerate(basis.states))
    covered = sorted(i for v in basis.sectors() for i in range(v.offset, v.offset + v.dim))
    bad += covered != list(range(basis.dim))
    bad += any(v.dim != v.N + 1 for v in basis.sectors())
    rec.upper("basis_bijection", bad, 0, f"dim={basis.dim}")


def _check_operator_algebra(rec, params, basis, printed_alpha_plus):
    a, a_dag, b, b_dag = ladder_ops(basis)
    I = identity(basis)
    inner = basis.interior_mask()
    ab_dag, a_dag_b = hop_a_to_b(basis), hop_b_to_a(basis)
    nops = build_number_ops(basis)

    res = max((commutator(a, a_dag) - I).max_abs(inner), (commutator(b, b_dag) - I).max_abs(inner),
              commutator(a, b_dag).max_abs(inner), commutator(a, b).max_abs(inner))
    rec.upper("canonical_commutator_ab", res, 1e-12)

    X = commutator(ab_dag, a_dag_b)
    res = max((X - (nops.N_B - nops.N_A)).max_abs(inner),
              (commutator(ab_dag, X) + 2 * ab_dag).max_abs(inner),
              (commutator(a_dag_b, X) - 2 * a_dag_b).max_abs(inner))
    rec.upper("exchange_commutator", res, 1e-12)

    H = build_H(params, basis)
    rec.upper("number_conservation", commutator(H, nops.N).max_abs(), 1e-12)
    rec.upper("free_interaction_commute",
              commutator(build_H0(params, basis), build_HI(params, basis)).max_abs(), 1e-12)

    max_hop = max(math.sqrt(s.n_a * (s.n_b + 1)) for s in basis.states)
    expected = abs(params.omega_ab - params.omega_ba) * max_hop
    measured = (H - H.dag()).max_abs()
    rec.upper("hermiticity", abs(measured - expected), 1e-12,
              f"||H - H^dag||_max={measured:.6g}, predicted {expected:.6g}")
    rec.upper("pt_symmetry", (pt_conjugate(H) - H).max_abs(), SYMMETRY_TOL)
    rec.upper("pt_ladder_sign", max((pt_conjugate(a) + a).max_abs(), (pt_conjugate(b) + b).max_abs()), 0.0)

    cls = classify_symmetry(params, basis)
    want = "reciprocal-hermitian" if params.is_reciprocal else "nonreciprocal-PT"
    rec.upper("classification", 0 if cls.regime == want else 1, 0,
              f"regime={cls.regime}, expected {want}")

    try:
        params.require_closed_form()
    except DomainError as exc:
        rec.fail("closed_form_domain", str(exc))
        return False

    nd = build_number_ops(basis, params)
    rec.upper("delocalized_hamiltonian",
              (H - (params.omega0 * (nd.N + I) - params.g_eff * nd.Delta)).max_abs(), 1e-12,
              "H = omega0 (N + 1) - g_eff Delta")

    names = ("intercavity_canonical_commutator", "intercavity_cross_commutator",
             "printed_alpha_plus_discrepancy", "intercavity_mode_hamiltonian")
    if params.omega_ab < 0:
        for name in names:
            rec.skip(name, "negative couplings: intercavity operators not defined")
        return True

    ic = build_intercavity_ops(params, basis, printed_alpha_plus=printed_alpha_plus)
    label = "printed" if printed_alpha_plus else "corrected"
    res = max((commutator(ic.alpha_minus, ic.alpha_plus) - I).max_abs(inner),
              (commutator(ic.beta_minus, ic.beta_plus) - I).max_abs(inner))
    rec.upper(names[0], res, 1e-12, f"alpha+ variant: {label}")
    res = max(commutator(ic.alpha_minus, ic.beta_plus).max_abs(inner),
              commutator(ic.beta_minus, ic.alpha_plus).max_abs(inner),
              commutator(ic.alpha_minus, ic.beta_minus).max_abs(inner),
              commutator(ic.alpha_plus, ic.beta_plus).max_abs(inner))
    rec.upper(names[1], res, 1e-12, f"alpha+ variant: {label}")

    corrected = build_intercavity_ops(params, basis)
    printed = build_intercavity_ops(params, basis, printed_alpha_plus=True)
    measured = (commutator(printed.alpha_minus, printed.alpha_plus) - I).max_abs(inner)
    good = (commutator(corrected.alpha_minus, corrected.alpha_plus) - I).max_abs(inner)
    predicted = printed_alpha_plus_residual(params)
    rec.upper(names[2], abs(measured - predicted), 1e-12,
              f"printed alpha+: |[alpha-,alpha+] - 1| = {measured:.12g} (predicted {predicted:.12g}); "
              f"corrected alpha+: {good:.3g}")

    w_a, w_b = dyn.eigenfrequencies(params)
    modes = (w_a * (ic.alpha_plus @ ic.alpha_minus) + w_b * (ic.beta_plus @ ic.beta_minus)
             + params.omega0 * I)
    rec.upper(names[3], (H - modes).max_abs(inner), 1e-12,
              f"H = omega_alpha N_alpha + omega_beta N_beta + omega0 (alpha+ variant: {label})")
    return True


def _check_closed_form(rec, params, basis, t_grid):
    worst = 0.0
    for t in t_grid:
        worst = max(worst, *map(abs, dyn.heisenberg_coeffs(params, t).commutation_residuals()))
    rec.upper("coefficient_commutation_preservation", worst, 1e-14)

    period = 2 * math.pi / params.g_eff
    worst = 0.0
    for t in t_grid:
        k0, k1 = dyn.heisenberg_coeffs(params, t), dyn.heisenberg_coeffs(params, t + period)
        down = np.exp(-1j * params.omega0 * period)
        worst = max(worst, np.abs(k1.lowering - down * k0.lowering).max(),
                    np.abs(k1.raising - np.conj(down) * k0.raising).max())
    rec.upper("coefficient_periodicity", worst, 1e-12)

    k = dyn.heisenberg_coeffs(params, math.pi / 4 / params.g_eff)
    gap = abs(k.d_ab - np.conj(k.c_ab))
    if params.is_reciprocal:
        rec.upper("non_conjugacy_witness", gap, 1e-14, "reciprocal: raising = adjoint of lowering")
    else:
        rec.lower("non_conjugacy_witness", gap, 0.0, "|d_ab - conj(c_ab)| at g_eff t = pi/4")

    worst = 0.0
    for t in t_grid:
        for s in basis.states:
            ma, mb = dyn.expected_photons(params, s.n_a, s.n_b, t)
            worst = max(worst, abs(ma + mb - s.total))
    rec.upper("mean_photon_conservation", worst, 1e-12)

    N = build_number_ops(basis).N
    worst = max((dyn.photon_number_operator_t(params, t, "A", basis)
                 + dyn.photon_number_operator_t(params, t, "B", basis) - N).max_abs()
                for t in t_grid)
    rec.upper("number_operator_conservation", worst, 1e-12)


def _check_oracles(rec, params, basis, t_grid):
    inner = basis.interior_mask()
    ops = ladder_ops(basis)
    nops = build_number_ops(basis)
    I = identity(basis)
    ode = prop.integrate_coefficient_ode_grid(params, t_grid, ODE_MAX_STEP)
    cn = co = no = nbr = comm = 0.0
    for t, k_ode in zip(t_grid, ode):
        k = dyn.heisenberg_coeffs(params, t)
        blocks = prop.sector_propagators(params, basis, t)
        co = max(co, k.max_abs_diff(k_ode))
        numeric = {}
        for which in ("a", "a_dag", "b", "b_dag"):
            numeric[which] = prop.heisenberg_conjugate(params, t, getattr(ops, which), blocks)
            cn = max(cn, (numeric[which] - k.operator(which, basis)).max_abs(inner))
            no = max(no, (numeric[which] - k_ode.operator(which, basis)).max_abs(inner))
        comm = max(comm, (commutator(numeric["a"], numeric["a_dag"]) - I).max_abs(inner),
                   (commutator(numeric["b"], numeric["b_dag"]) - I).max_abs(inner))
        for cavity, op in (("A", nops.N_A), ("B", nops.N_B)):
            nbr = max(nbr, (prop.heisenberg_conjugate(params, t, op, blocks)
                            - dyn.photon_number_operator_t(params, t, cavity, basis)).max_abs())
    rec.upper("oracle_closed_vs_numeric", cn, 1e-9)
    rec.upper("oracle_closed_vs_ode", co, 1e-9, f"RK4 max step {ODE_MAX_STEP:g}")
    rec.upper("oracle_numeric_vs_ode", no, 1e-9)
    rec.upper("number_operator_closed_vs_numeric", nbr, 1e-9)
    rec.upper("heisenberg_commutator_numeric", comm, 1e-12)


def _sector_eigenvalue_residuals(params, n_total_max):
    w_a, w_b = dyn.eigenfrequencies(params) if params.coupling_product > 0 else (None, None)
    match = imag = 0.0
    for N in range(n_total_max + 1):
        ev = np.linalg.eigvals(prop.sector_hamiltonian(params, N))
        imag = max(imag, float(np.abs(ev.imag).max()))
        if w_a is not None:
            want = np.sort([w_a * na + w_b * (N - na) + params.omega0 for na in range(N + 1)])
            match = max(match, float(np.abs(np.sort(ev.real) - want).max()))
    return match, imag


def _check_spectrum_and_propagator(rec, params, basis, t_grid):
    match, imag = _sector_eigenvalue_residuals(params, basis.n_total_max)
    rec.upper("spectrum_match", match, 1e-10)
    rec.upper("spectrum_reality", imag, 1e-10)

    inv = bch = 0.0
    for t in t_grid:
        P = prop.build_propagator(params, basis, t)
        inv = max(inv, (P.forward @ P.inverse - identity(basis)).max_abs())
        for N in range(basis.n_total_max + 1):
            bch = max(bch, float(np.abs(prop.sector_propagator(params, N, t)
                                        - prop.sector_propagator(params, N, t, factorized=True)).max()))
    rec.upper("propagator_inverse", inv, 1e-10)
    rec.upper("bch_factorization", bch, 1e-10)

    couplings = [abs(params.omega_ab), abs(params.omega_ba)]
    t_small = 1e-4 / max(couplings)
    worst = 0.0
    for N in range(1, basis.n_total_max + 1):
        U = np.exp(1j * params.omega0 * (N + 1) * t_small) * prop.sector_propagator(params, N, t_small)
        for n_a in range(N + 1):
            for m_a in (n_a - 1, n_a + 1):
                if 0 <= m_a <= N:
                    want = dyn.small_time_amplitude(params, (n_a, N - n_a), (m_a, N - m_a), t_small)
                    if want != 0:
                        worst = max(worst, abs(U[m_a, n_a] - want) / abs(want))
    rec.upper("first_order_consistency", worst, 1e-3, f"t = {t_small:.6g}")

    g = params.g_eff
    U = prop.sector_propagator(params, 1, math.pi / 2 / g)
    measured = float(np.abs(U.conj().T @ U - np.eye(2)).max())
    r = params.omega_ab / params.omega_ba
    predicted = max(abs(r - 1), abs(1 / r - 1))
    rec.upper("unitarity_dichotomy", abs(measured - predicted), 1e-10,
              f"||U^dag U - I|| = {measured:.6g} on N=1 at g_eff t = pi/2 (predicted {predicted:.6g})")

    worst = 0.0
    for s in basis.states:
        if s.total:
            ts = prop.evolve_observables(params, s, t_grid[1:] if t_grid[0] == 0 else t_grid, basis)
            worst = max(worst, float(np.abs(ts.columns["conservation_residual"]).max()))
    rec.upper("heisenberg_mean_conservation", worst, 1e-11)


def _check_analysis(rec, params, basis, t_grid):
    D = similarity_matrix(params, basis)
    target = np.copysign(params.g_eff, params.omega_ab)
    H_h = build_H(params, basis, variant="hermitian", g=target).data
    res = float(np.abs(hermitian_image(params, basis) - H_h).max())
    sm = similarity_map(params)
    rec.upper("similarity_conjugation", res, 1e-10, f"theta={sm.theta:.12g}, g_eff={sm.g_eff:.12g}")

    ratio = abs(params.omega_ab / params.omega_ba)
    worst = 0.0
    for s in basis.states:
        if s.n_a >= 1 and s.total <= basis.n_total_max:
            worst = max(worst, abs(exchange_asymmetry(params, s, 1.0).amplitude_ratio - ratio) / ratio)
    rec.upper("asymmetry_amplitude_ratio", worst, 1e-14)

    worst_prob = worst_swap = 0.0
    swapped = params.swapped()
    for t in t_grid:
        if t <= 0:
            continue
        rep = exchange_asymmetry(params, (1, 0), t)
        if min(rep.sector_prob_forward, rep.sector_prob_backward) < 1e-12:
            continue
        p_ratio = rep.sector_prob_forward / rep.sector_prob_backward
        worst_prob = max(worst_prob, abs(p_ratio - ratio**2) / ratio**2)
        worst_swap = max(worst_swap, abs(rep.db_asymmetry + exchange_asymmetry(swapped, (1, 0), t).db_asymmetry))
    rec.upper("asymmetry_probability_ratio", worst_prob, 1e-10)
    rec.upper("asymmetry_swap_antisymmetry", worst_swap, 1e-10)

    rec.upper("rwa_regime", 0, 0, rwa_breakdown_check(params))


def _check_reciprocal_limit(rec, params, basis, t_grid):
    """Dedicated reciprocal formulas against the general engine at omega_ab = omega_ba."""
    if params.is_reciprocal:
        p, note = params, "active: couplings equal"
    else:
        p, note = ModelParams.reciprocal(params.omega0, params.g_eff), "active on hermitian model with g = g_eff"
    g = p.omega_ab
    worst = 0.0
    for t in t_grid:
        worst = max(worst, dyn.heisenberg_coeffs(p, t).max_abs_diff(dyn.reciprocal_coeffs(p.omega0, g, t)))
        for cavity in "AB":
            worst = max(worst, (dyn.photon_number_operator_t(p, t, cavity, basis)
                                - dyn.reciprocal_number_operator(p.omega0, g, t, cavity, basis)).max_abs())
        for s in basis.states:
            for target in ((s.n_a - 1, s.n_b + 1), (s.n_a + 1, s.n_b - 1), tuple(s)):
                worst = max(worst, abs(dyn.small_time_amplitude(p, s, target, t)
                                       - dyn.reciprocal_first_order_amplitude(g, s, target, t)))
    rec.upper("reciprocal_regression", worst, 1e-14, note)


def run_verification(params: ModelParams, n_total_max: int = 6, t_grid=None,
                     printed_alpha_plus: bool = False) -> VerificationReport:
    """Run the full invariant catalogue and collect named residuals.

    Failures become report entries; nothing is raised for a failing check.
    ``printed_alpha_plus`` injects the inconsistent alpha+ coefficient so
    the canonical-commutator check can be seen to fail.
    """
    basis = build_basis(n_total_max)
    report = VerificationReport(params, n_total_max)
    rec = _Recorder(report, "fock")
    _check_basis(rec, basis)
    rec.group = "operators"
    if n_total_max < 2:
        rec.fail("basis_size", "verification needs n_total_max >= 2")
        return report
    closed_ok = _check_operator_algebra(rec, params, basis, printed_alpha_plus)
    if not closed_ok:
        rec.group = "spectrum"
        _, imag = _sector_eigenvalue_residuals(params, n_total_max)
        rec.info("sector_eigenvalue_max_imag", imag,
                 "outside the closed-form domain; complex pairs reported, not interpreted")
        return report
    if t_grid is None:
        t_grid = default_time_grid(params)
    t_grid = np.asarray(t_grid, dtype=float)
    rec.group = "closed-form"
    _check_closed_form(rec, params, basis, t_grid)
    rec.group = "oracles"
    _check_oracles(rec, params, basis, t_grid)
    rec.group = "propagator"
    _check_spectrum_and_propagator(rec, params, basis, t_grid)
    rec.group = "analysis"
    _check_analysis(rec, params, basis, t_grid)
    rec.group = "reciprocal"
    _check_reciprocal_limit(rec, params, basis, t_grid)
    return report
