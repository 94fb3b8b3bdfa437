"""Shared fixtures, parameter draws, and the acceptance summary hook.

The reference parameter set used throughout is the one whose coexistence
point sits at (1, 1, 1/6) with a first delay switch near s = 2.015.
Long simulations are session-scoped so the acceptance tests and the
invariant tests share them instead of re-integrating.
"""

import numpy as np
import pytest

from infodelay import (
    HistorySpec,
    ModelParams,
    Transversality,
    char_coeffs,
    coexistence,
    compute_normal_form,
    cycle_metrics,
    h1_holds,
    hopf_candidates,
    predicted_component_amplitudes,
    simulate,
    simulate_distributed,
)

REFERENCE = dict(r1=0.5, r2=0.5, a1=0.05, a2=1.045, b1=0.95, b2=0.27,
                 mu=2.0, r=4.0)
ESTAR = np.array([1.0, 1.0, 1.0 / 6.0])

# frozen first-crossing data for the reference set, computed once from the
# polished root of G and pinned here so drift in either direction is caught
OMEGA_STAR = 0.2004366713271642
S_STAR = 2.0152014868702635


def make_params(s, **overrides):
    kw = dict(REFERENCE)
    kw.update(overrides)
    return ModelParams(**kw, s=s)


def draw_params(rng):
    """One random parameter set from the ranges used by the flip tests."""
    a2 = rng.uniform(0.8, 1.5)
    return ModelParams(
        r1=rng.uniform(0.3, 0.8), r2=rng.uniform(0.3, 0.8),
        a1=rng.uniform(0.03, 0.2), a2=a2,
        b1=rng.uniform(0.3, 0.9 * a2), b2=rng.uniform(0.1, 0.5),
        mu=rng.uniform(0.5, 3.0), r=rng.uniform(1.0, 5.0), s=1.0)


def draw_with_candidates(rng):
    """Rejection-sample a parameter set whose G-cubic admits crossings."""
    while True:
        p = draw_params(rng)
        est = coexistence(p)
        if not est.exists:
            continue
        cc = char_coeffs(p, est)
        cands = hopf_candidates(cc)
        if cands:
            return p, est, cc, cands


def screen_for_flip(p):
    """Admission filter for the stability-flip simulations.

    Keeps draws whose first crossing is transversal with a usable
    frequency and delay, whose direction is classified cleanly, and
    (for subcritical cases) whose unstable-cycle radius just below the
    switch dominates the 1 percent kick so the kick stays in the basin.
    Returns (equilibrium, normal_form) or None.
    """
    est = coexistence(p)
    if not est.exists:
        return None
    cc = char_coeffs(p, est)
    if not h1_holds(cc):
        return None
    cands = hopf_candidates(cc)
    if not cands:
        return None
    best = min(cands, key=lambda c: c.delays[0])
    if best.transversality_sign is not Transversality.POSITIVE:
        return None
    if not (0.1 <= best.omega <= 2.0 and 0.5 <= best.delays[0] <= 15.0):
        return None
    try:
        nf = compute_normal_form(p)
    except (ValueError, ArithmeticError):
        return None
    if nf.direction.value == "Degenerate" or nf.chi1 < 0.15:
        return None
    delta = 0.05 * best.delays[0]
    if nf.direction.value == "Subcritical":
        amp_u = 2.0 * np.sqrt(delta * nf.chi1 / -nf.chi2) * abs(nf.c_vec[0])
        if not amp_u >= 4 * 0.01 * max(est.point.u, est.point.v):
            return None
    return est, nf


@pytest.fixture(scope="session")
def reference_params():
    return make_params(2.0)


@pytest.fixture(scope="session")
def reference_nf():
    return compute_normal_form(make_params(2.0))


@pytest.fixture(scope="session")
def settle_run():
    """Long run just below the switch: s = 2.00 < s* = 2.015."""
    traj = simulate(make_params(2.0), HistorySpec.constant(1.01, 0.99),
                    5000.0, 200)
    return traj, cycle_metrics(traj, ESTAR)


@pytest.fixture(scope="session")
def cycle_run():
    """Long run just above the switch: s = 2.02 > s* = 2.015."""
    traj = simulate(make_params(2.02), HistorySpec.constant(1.01, 0.99),
                    5000.0, 200)
    return traj, cycle_metrics(traj, ESTAR)


@pytest.fixture(scope="session")
def delta_amplitude_table(reference_nf):
    """Measured u-amplitudes at five distances past the switch.

    Keyed by delta = s - s*; values are (classification, amp_u,
    predicted_amp_u). Shared by the square-root-scaling tests.
    """
    hist = HistorySpec.constant(1.01, 0.99)
    table = {}
    for delta in (0.002, 0.0032, 0.005, 0.008, 0.01):
        traj = simulate(make_params(reference_nf.s_star + delta), hist,
                        5000.0, 200)
        m = cycle_metrics(traj, ESTAR)
        pred = predicted_component_amplitudes(reference_nf, delta)[0]
        table[delta] = (m.classification, float(m.amplitude[0]), float(pred))
    return table


@pytest.fixture(scope="session")
def reduction_pair():
    """Matched pointwise-delay and distributed runs at s = 2.0."""
    hist = HistorySpec.constant(1.01, 0.99)
    p = make_params(2.0)
    lumped = simulate(p, hist, 500.0, 400)
    distributed = simulate_distributed(p, hist, 500.0, 400)
    return lumped, distributed


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion at the end of the run

ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.append((name, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
