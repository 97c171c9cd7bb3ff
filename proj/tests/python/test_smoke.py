"""Smoke test for the compiled extension: exercises the main operations
end to end and exits nonzero on any failure."""

import math
import sys

import _loopsim as ls


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    vac = ls.make_vacuum(1, 20)
    check(abs(vac.trace() - 1.0) < 1e-12, "vacuum trace")
    check(abs(ls.var_quadrature(vac, 0.0) - 0.5) < 1e-12, "vacuum variance")
    check(abs(ls.wigner(vac, 0.0, 0.0) - 1.0 / math.pi) < 1e-9, "vacuum Wigner peak")

    sq = ls.make_squeezed_vacuum(0.3, 20)
    check(
        abs(ls.var_quadrature(sq, 0.0) - 0.5 * math.exp(-0.6)) < 1e-6,
        "squeezed variance",
    )
    check(abs(ls.fidelity(vac, sq) - 1.0 / math.cosh(0.3)) < 1e-6, "overlap")

    sc = ls.scenario_current()
    prog = ls.make_program([0.26], ls.Quadrature.x, sc)
    check(len(prog.steps) == 1, "program length")
    out = ls.run_program(vac, prog)[-1]
    check(ls.var_quadrature(out, 0.0) < 0.5, "gate squeezes x")
    check(ls.var_quadrature(out, math.pi / 2) > 0.5, "gate antisqueezes p")

    ideal = ls.ideal_squeeze(vac, 0.26, ls.Quadrature.x)
    f = ls.fidelity(out, ideal)
    check(0.8 < f < 1.0, "lossy gate fidelity in range, got %.4f" % f)

    cat, p_herald = ls.make_cat(ls.CatSpec(), 20)
    check(0.0 < p_herald < 1.0, "herald probability")
    check(ls.negativity(cat) < 0.0, "cat is Wigner-negative")

    data = ls.sample_quadratures(vac, [0.0, 0.5, 1.0], 400, 7)
    check(data.total_samples() == 1200, "dataset size")
    rec = ls.mle_reconstruct(data, 10, max_iters=200)
    check(ls.fidelity(rec.state, ls.make_vacuum(1, 10)) > 0.95, "tomography roundtrip")

    sched = ls.compile_schedule(prog)
    check(len(sched.timeline) == 3, "schedule bins")
    check(sched.timeline[0].vbs_reflectivity == 0.0, "schedule opens fully")

    timing = ls.check_timing()
    check(timing.feasible, "default timing feasible")
    check(abs(timing.clock_hz - 1e9 / 60.8) < 1.0, "clock rate")

    mode = ls.make_mode(2 * math.pi * 0.0298, 2 * math.pi * 0.0956, 380.0)
    check(ls.eval_mode(mode, 385.0) == 0.0, "mode is causal")

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
