"""Headline analysis of the reference parameter set.

Prints the equilibria, the first delay crossing, the oscillation onset
coefficients, and the predicted cycle size just past the switch. With
--simulate it also integrates once below and once above the crossing to
show the settle / oscillate dichotomy in the time domain.

Usage:
    python3 scripts/run_example.py [--delta 0.005] [--simulate]
"""
import argparse
import math

import numpy as np

from infodelay import (
    HistorySpec,
    ModelParams,
    SimulationDiverged,
    compute_normal_form,
    cycle_metrics,
    equilibria,
    h1_holds,
    char_coeffs,
    hopf_candidates,
    predicted_component_amplitudes,
    simulate,
)

REFERENCE = ModelParams(r1=0.5, r2=0.5, a1=0.05, a2=1.045, b1=0.95,
                        b2=0.27, mu=2.0, r=4.0, s=2.0)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--delta", type=float, default=0.005,
                    help="offset past the critical delay for predictions")
    ap.add_argument("--simulate", action="store_true",
                    help="integrate below and above the crossing")
    ap.add_argument("--t-end", type=float, default=5000.0)
    ap.add_argument("--steps-per-delay", type=int, default=200)
    args = ap.parse_args()

    p = REFERENCE
    print("model parameters:")
    print(f"  r1={p.r1} r2={p.r2} a1={p.a1} a2={p.a2} "
          f"b1={p.b1} b2={p.b2} mu={p.mu} r={p.r}")

    print("\nequilibria:")
    for eq in equilibria(p):
        pt = ", ".join(f"{x:.6g}" for x in eq.point)
        print(f"  {eq.label.value:5s} ({pt})  exists={eq.exists}  "
              f"zero-delay verdict: {eq.local_stability.value}")

    estar = equilibria(p)[3]
    cc = char_coeffs(p, estar)
    print(f"\nstability-switch condition holds at s=0: {h1_holds(cc)}")
    for cand in hopf_candidates(cc):
        ladder = ", ".join(f"{s:.4f}" for s in cand.delays)
        print(f"  crossing frequency omega={cand.omega:.6f}  "
              f"delays: {ladder}  transversality: "
              f"{cand.transversality_sign.value}")

    nf = compute_normal_form(p)
    print(f"\nfirst crossing: s* = {nf.s_star:.6f}, "
          f"omega* = {nf.omega_star:.6f}, "
          f"linear period 2*pi/omega* = {2 * math.pi / nf.omega_star:.4f}")
    print(f"amplitude equation: Gamma1 = {nf.Gamma1:.6f}, "
          f"Gamma2 = {nf.Gamma2:.6f}")
    print(f"chi1 = {nf.chi1:.6f}, chi2 = {nf.chi2:.6f} "
          f"-> {nf.direction.value}")

    amps = predicted_component_amplitudes(nf, args.delta)
    print(f"\npredicted cycle half peak-to-peak at s* + {args.delta}:")
    for name, a in zip("uvw", amps):
        print(f"  {name}: {a:.6f}")

    if not args.simulate:
        return

    hist = HistorySpec.constant(1.01 * estar.point[0], 0.99 * estar.point[1])
    eq_point = np.asarray(estar.point)
    for s in (nf.s_star - args.delta, nf.s_star + args.delta):
        q = ModelParams(**{f: getattr(p, f) for f in
                           ("r1", "r2", "a1", "a2", "b1", "b2", "mu", "r")},
                        s=s)
        print(f"\nsimulate s = {s:.6f} "
              f"(t_end={args.t_end}, steps/delay={args.steps_per_delay}):")
        try:
            traj = simulate(q, hist, args.t_end, args.steps_per_delay)
        except SimulationDiverged as exc:
            print(f"  diverged at t = {exc.time:.2f}")
            continue
        m = cycle_metrics(traj, eq_point)
        print(f"  classification: {m.classification.value}")
        if m.amplitude is not None:
            print(f"  measured u amplitude: {m.amplitude[0]:.6f}"
                  f"  period: {m.period:.4f}"
                  f"  (over {m.n_periods_measured} periods)")


if __name__ == "__main__":
    main()
