"""Characteristic coefficients, crossing candidates, transversality."""

import cmath
import math

import numpy as np
import pytest

from infodelay import (
    CharCoeffs,
    Transversality,
    char_coeffs,
    char_value,
    coexistence,
    g_cubic,
    h1_holds,
    hopf_candidates,
    s0,
    transversality_sign,
)
from conftest import OMEGA_STAR, S_STAR, draw_params, draw_with_candidates, make_params


def _pq(lam, cc):
    p = ((lam + cc.p2) * lam + cc.p1) * lam + cc.p0
    q = (cc.q2 * lam + cc.q1) * lam + cc.q0
    return p, q


@pytest.fixture(scope="module")
def reference_cc():
    p = make_params(2.0)
    return char_coeffs(p, coexistence(p))


def test_reference_coefficients(reference_cc):
    cc = reference_cc
    assert abs(cc.p0 - (-1.41075)) < 1e-12
    assert abs(cc.p1 - 0.18975) < 1e-12
    assert abs(cc.p2 - 6.095) < 1e-12
    assert abs(cc.q0 - 1.55325) < 1e-12
    assert abs(cc.q1 - 3.108875) < 1e-12
    assert abs(cc.q2 - 0.475) < 1e-12


def test_reference_g_cubic(reference_cc):
    g = g_cubic(reference_cc)
    assert abs(g.m - 36.5439) < 1e-9
    assert abs(g.n - 9.043531296875) < 1e-9
    assert abs(g.h - (-0.42237)) < 1e-9


def test_reference_h1(reference_cc):
    assert h1_holds(reference_cc)


def test_char_coeffs_requires_coexistence():
    p = make_params(1.0, b1=1.2)  # b1 > a2: no interior equilibrium
    with pytest.raises(ValueError):
        char_coeffs(p, coexistence(p))
    with pytest.raises(ValueError):
        s0(p)


def test_reference_candidate(reference_cc):
    cands = hopf_candidates(reference_cc)
    assert len(cands) == 1
    cand = cands[0]
    assert cand.transversality_sign is Transversality.POSITIVE
    assert abs(cand.omega - OMEGA_STAR) < 1e-12
    assert abs(cand.delays[0] - S_STAR) < 1e-12
    assert cand.z == cand.omega ** 2
    assert len(cand.delays) == 4
    step = 2.0 * math.pi / cand.omega
    for j in range(1, 4):
        assert abs(cand.delays[j] - cand.delays[0] - j * step) < 1e-12 * (1 + cand.delays[j])


def test_reference_ladder_residuals(reference_cc):
    (cand,) = hopf_candidates(reference_cc)
    for s in cand.delays:
        assert abs(char_value(1j * cand.omega, s, reference_cc)) < 1e-10


def test_s0_returns_smallest_ladder_delay():
    p = make_params(2.0)
    got = s0(p)
    assert got is not None
    s_base, cand = got
    assert s_base == cand.delays[0]
    assert abs(s_base - S_STAR) < 1e-12


def test_no_candidates_without_delayed_coupling():
    # b1 = 0 removes the delayed part entirely; the zero-delay cubic is
    # Hurwitz so no amount of delay can destabilise
    p = make_params(1.0, b1=0.0, b2=0.0)
    assert s0(p) is None


def test_j_max_controls_ladder_length(reference_cc):
    (cand,) = hopf_candidates(reference_cc, j_max=0)
    assert len(cand.delays) == 1
    with pytest.raises(ValueError):
        hopf_candidates(reference_cc, j_max=-1)


def test_transversality_signs_on_crafted_cubics():
    # G has roots {1, 2, 4}; the middle one is a leftward crossing
    cc = CharCoeffs(p0=1.0, p1=4.0, p2=1.0, q0=3.0, q1=0.0, q2=0.0)
    assert transversality_sign(1.0, cc) is Transversality.POSITIVE
    assert transversality_sign(2.0, cc) is Transversality.NEGATIVE
    assert transversality_sign(4.0, cc) is Transversality.POSITIVE
    with pytest.raises(ValueError, match="not a root"):
        transversality_sign(3.0, cc)


def test_transversality_degenerate_on_double_root():
    # G = (z - 1)^2 (z - 4): tangential contact at z = 1
    cc = CharCoeffs(p0=0.0, p1=3.0, p2=0.0, q0=2.0, q1=0.0, q2=0.0)
    assert transversality_sign(1.0, cc) is Transversality.DEGENERATE
    assert transversality_sign(4.0, cc) is Transversality.POSITIVE


def test_near_common_root_yields_no_candidate():
    # P = (lam^2+1)(lam+1) and Q = lam^2 + 1e-8 lam + 1 nearly share the
    # root i, so G barely grazes zero near z = 1. Whether the grazing
    # pair is rejected as complex or as a singular recovery system, no
    # spurious candidate may come out of it.
    cc = CharCoeffs(p0=1.0, p1=1.0, p2=1.0, q0=1.0, q1=1e-8, q2=1.0)
    assert hopf_candidates(cc) == []


def test_h1_matches_eigenvalues_of_zero_delay_cubic():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 50:
        p = draw_params(rng)
        est = coexistence(p)
        if not est.exists:
            continue
        cc = char_coeffs(p, est)
        roots = np.roots([1.0, cc.p2 + cc.q2, cc.p1 + cc.q1, cc.p0 + cc.q0])
        margin = float(np.max(roots.real))
        if abs(margin) < 1e-6:
            continue  # too close to the stability boundary to trust either side
        assert h1_holds(cc) == (margin < 0)
        checked += 1


def test_g_matches_modulus_difference():
    # G(omega^2) must equal |P(i omega)|^2 - |Q(i omega)|^2 identically
    rng = np.random.default_rng(11)
    for _ in range(30):
        p, est, cc, _ = draw_with_candidates(rng)
        g = g_cubic(cc)
        for omega in rng.uniform(0.05, 3.0, size=5):
            z = omega * omega
            gv = ((z + g.m) * z + g.n) * z + g.h
            pv, qv = _pq(1j * omega, cc)
            want = abs(pv) ** 2 - abs(qv) ** 2
            scale = 1.0 + abs(pv) ** 2 + abs(qv) ** 2
            assert abs(gv - want) < 1e-9 * scale


def test_candidate_residuals_on_random_draws():
    # every ladder element of every candidate must solve both the full
    # characteristic equation and its split real/imaginary system
    rng = np.random.default_rng(23)
    for _ in range(25):
        p, est, cc, cands = draw_with_candidates(rng)
        for cand in cands:
            z, om = cand.z, cand.omega
            a = cc.q0 - cc.q2 * z
            b = cc.q1 * om
            rr = cc.p2 * z - cc.p0
            ii = om * z - cc.p1 * om
            scale = 1.0 + max(abs(a), abs(b), abs(rr), abs(ii))
            for s in cand.delays:
                assert abs(char_value(1j * om, s, cc)) < 1e-8
                th = om * s
                assert abs(a * math.cos(th) + b * math.sin(th) - rr) < 1e-8 * scale
                assert abs(b * math.cos(th) - a * math.sin(th) - ii) < 1e-8 * scale


def test_candidates_sorted_by_base_delay():
    rng = np.random.default_rng(31)
    for _ in range(20):
        _, _, _, cands = draw_with_candidates(rng)
        bases = [c.delays[0] for c in cands]
        assert bases == sorted(bases)
        assert all(b >= 0 for b in bases)
