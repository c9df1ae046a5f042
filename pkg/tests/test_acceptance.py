"""Acceptance criteria, one test per criterion, each printing a
pass/fail line with the worst residual and runtime.

Criterion 7 includes the rank-two case k = (1, 2); its unit-torus
contour conditions contradict the balancing relation (|t5 t6 t7 t8| is
forced both above and below 1), so no feasible draw exists and that
sub-criterion fails by construction.  The analysis lives in the
decisions ledger and in TestAnSelberg.test_criterion7_k12 below, which
runs the sampler as specified and reports the outcome honestly.
"""

import time

import numpy as np
import pytest

from ellsel.harness import HarnessConfig, run_case, sample_case
from ellsel.partitions import ZERO, Bipartition

CFG = HarnessConfig()


def _line(criterion: str, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status} ({detail})")


def _run_batch(family, seeds, tol, opts=None, require=None, cfg=CFG):
    """Run `seeds` draws; returns (reports, worst rel err among passes)."""
    opts = opts or {}
    reports = [run_case(sample_case(family, s, cfg, **opts)) for s in range(seeds)]
    worst = max((r.rel_err for r in reports if r.status == "pass"), default=np.inf)
    statuses = [r.status for r in reports]
    passing = statuses.count("pass")
    need = require if require is not None else seeds
    ok = passing >= need and worst <= tol
    return reports, worst, passing, ok


class TestCriterion1Algebraic:
    def test_algebraic_suite_50_seeds(self):
        t0 = time.perf_counter()
        worst = 0.0
        failing = []
        for seed in range(50):
            rep = run_case(sample_case("algebraic_suite", seed, CFG))
            worst = max(worst, rep.rel_err)
            if rep.status != "pass":
                failing.append((seed, rep.notes))
        elapsed = time.perf_counter() - t0
        ok = not failing and elapsed < 120
        _line(
            "1 (algebraic suite, 50 seeds)",
            ok,
            f"worst margin {worst:.2g}x tol, {elapsed:.0f}s",
        )
        assert not failing, failing
        assert elapsed < 120


class TestCriterion2BetaK1:
    def test_beta_k1_20_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("beta_k1", 20, 1e-9)
        elapsed = time.perf_counter() - t0
        ok = passing == 20 and worst <= 1e-9 and elapsed < 5
        _line("2 (beta k=1, 20 draws)", ok, f"worst {worst:.2e}, {elapsed:.2f}s")
        assert passing == 20
        assert worst <= 1e-9
        assert elapsed < 5


class TestCriterion3SelbergK2:
    def test_selberg_k2_10_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("selberg_A1", 10, 1e-6, {"k": 2})
        elapsed = time.perf_counter() - t0
        ok = passing == 10 and worst <= 1e-6 and elapsed < 120
        _line("3 (Selberg k=2, 10 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert passing == 10
        assert worst <= 1e-6
        assert elapsed < 120
        for rep in reports:
            assert all(int(n) <= 128 for n in rep.grid.split("x"))


class TestCriterion4VdBult:
    # "two boxes" is read as the torus-feasible two-box shapes (2|0) and
    # (0|2); a box in each component leaves a reciprocal net pole pair
    # that no unit torus can separate (see tests/test_contours.py and
    # the ledger), and such draws are diagnosed as infeasible.
    SHAPES = [
        ZERO,
        Bipartition.of((1,), ()),
        Bipartition.of((), (1,)),
        Bipartition.of((2,), ()),
        Bipartition.of((), (2,)),
    ]

    def test_vdbult_10_draws_per_shape(self):
        t0 = time.perf_counter()
        worst = 0.0
        bad = []
        for mu in self.SHAPES:
            for seed in range(10):
                rep = run_case(sample_case("vdBult", seed, CFG, mu=mu))
                if rep.status != "pass" or rep.rel_err > 1e-8:
                    bad.append((str(mu), seed, rep.status, rep.rel_err))
                else:
                    worst = max(worst, rep.rel_err)
        elapsed = time.perf_counter() - t0
        ok = not bad and elapsed < 60
        _line(
            "4 (van der Bult, 10 draws x 5 shapes)",
            ok,
            f"worst {worst:.2e}, {elapsed:.1f}s; mixed (1|1) diagnosed torus-infeasible",
        )
        assert not bad, bad
        assert elapsed < 60

    def test_mixed_shape_diagnosed(self):
        rep = run_case(sample_case("vdBult", 0, CFG, mu=Bipartition.of((1,), (1,))))
        assert rep.status == "infeasible"


class TestCriterion5KeyAndRK:
    def test_key_theorem_10_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("key_theorem", 10, 1e-8)
        elapsed = time.perf_counter() - t0
        ok = passing == 10 and worst <= 1e-8
        _line("5a (key kernel identity, 10 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert passing == 10 and worst <= 1e-8

    def test_prop_rk_10_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("prop_RK", 10, 1e-8)
        elapsed = time.perf_counter() - t0
        ok = passing == 10 and worst <= 1e-8
        _line("5b (kernel-vs-binomial sum, 10 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert passing == 10 and worst <= 1e-8
        assert elapsed < 120


class TestCriterion6KernelDecomp:
    def test_theorem_and_corollary(self):
        t0 = time.perf_counter()
        worst = 0.0
        for variant in ("theorem", "corollary"):
            for seed in range(5):
                rep = run_case(sample_case("kernel_decomp", seed, CFG, variant=variant))
                assert rep.status == "pass", (variant, seed, rep.notes)
                worst = max(worst, rep.rel_err)
        elapsed = time.perf_counter() - t0
        ok = worst <= 1e-8 and elapsed < 60
        _line("6 (kernel decomposition, 10 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert worst <= 1e-8
        assert elapsed < 60


class TestCriterion7AnSelberg:
    def test_n2_k11_10_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("an_selberg", 10, 1e-6, {"n": 2, "k": (1, 1)})
        elapsed = time.perf_counter() - t0
        ok = passing == 10 and worst <= 1e-6 and elapsed < 300
        _line("7a (rank-2 Selberg k=(1,1), 10 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert passing == 10
        assert worst <= 1e-6
        assert elapsed < 300
        for rep in reports:
            assert all(int(n) <= 128 for n in rep.grid.split("x"))

    def test_criterion7_k12(self):
        # As specified: 3 draws at k = (1, 2), grid <= 48^3, rel err <= 1e-4.
        # The unit-torus conditions force |t5 t6 t7 t8| > 1 while the
        # parameter moduli force it < 1, so no feasible draw can exist;
        # this test states the criterion faithfully and fails with the
        # diagnosis when (as proven in the ledger) sampling is impossible.
        reports = [
            run_case(sample_case("an_selberg", seed, CFG, n=2, k=(1, 2)))
            for seed in range(3)
        ]
        passing = sum(r.status == "pass" for r in reports)
        worst = max((r.rel_err for r in reports if r.status == "pass"), default=np.inf)
        ok = passing == 3 and worst <= 1e-4
        _line(
            "7b (rank-2 Selberg k=(1,2), 3 draws)",
            ok,
            f"{passing}/3 feasible draws; unit-torus contours are provably "
            "impossible for k=(1,2) (balancing forces |t5 t6 t7 t8| > 1); "
            "see notes/decisions.md",
        )
        assert passing == 3, (
            "no torus-feasible draw exists for n=2, k=(1,2): the contour "
            "conditions |t1|,|t2| < |c| and |t5..t8| < 1 contradict the "
            "balancing t^(k1+k2-2) t1 t2 t5 t6 t7 t8 = pq, which forces "
            "|t5 t6 t7 t8| = |pq| / (|t| |t1 t2|) > 1. Statuses: "
            + ", ".join(f"{r.status}: {r.notes[:60]}" for r in reports)
        )


class TestCriterion8Aflt:
    def test_n1_10_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("an_aflt", 10, 1e-8, {"n": 1})
        elapsed = time.perf_counter() - t0
        ok = passing == 10 and worst <= 1e-8
        _line("8a (rank-1 interpolation average, 10 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert passing == 10 and worst <= 1e-8

    def test_n2_single_boxes_5_draws(self):
        t0 = time.perf_counter()
        reports, worst, passing, _ = _run_batch("an_aflt", 5, 1e-5, {"n": 2})
        elapsed = time.perf_counter() - t0
        ok = passing == 5 and worst <= 1e-5
        _line("8b (rank-2 interpolation average, 5 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert passing == 5 and worst <= 1e-5

    def test_consistency_chain(self):
        from ellsel.harness import aflt_rhs
        from ellsel.symbols import SymbolContext

        worst = 0.0
        for seed in range(3):
            kad = run_case(sample_case("an_kadell", seed, CFG, n=1))
            assert kad.status == "pass"
            params = sample_case("an_kadell", seed, CFG, n=1).paramset
            lam = sample_case("an_kadell", seed, CFG, n=1).shapes[0]
            ctx = SymbolContext(params.nomes, params.t)
            full = aflt_rhs(params, lam, ZERO, ctx)
            worst = max(worst, abs(full - kad.rhs) / abs(kad.rhs))

            hua = run_case(sample_case("an_hua_kadell", seed, CFG, n=1))
            assert hua.status == "pass"
            hua_case = sample_case("an_hua_kadell", seed, CFG, n=1)
            aflt_case = sample_case("an_aflt", 0, CFG, n=1, shapes=hua_case.shapes)
            aflt_case.paramset = hua_case.paramset
            via_hybrid = run_case(aflt_case)
            assert via_hybrid.status == "pass"
            worst = max(worst, abs(via_hybrid.lhs - hua.lhs) / abs(hua.lhs))
        ok = worst <= 1e-8
        _line("8c (Kadell / Hua-Kadell chain)", ok, f"worst {worst:.2e}")
        assert worst <= 1e-8


class TestCriterion9KernelConsistency:
    def test_5_draws(self):
        t0 = time.perf_counter()
        worst = 0.0
        for seed in range(5):
            rep = run_case(sample_case("kernel_consistency", seed, CFG))
            assert rep.status == "pass", (seed, rep.notes)
            worst = max(worst, rep.rel_err)
        elapsed = time.perf_counter() - t0
        ok = worst <= 1e-6 and elapsed < 300
        _line("9 (two-pair kernel consistency, 5 draws)", ok, f"worst {worst:.2e}, {elapsed:.1f}s")
        assert worst <= 1e-6
        assert elapsed < 300


class TestCriterion10Recursions:
    def test_equal_k_recursion_5_draws(self):
        reports, worst, passing, _ = _run_batch("equal_k_recursion", 5, 1e-6)
        ok = passing == 5 and worst <= 1e-6
        _line("10a (equal-k recursion, 5 draws)", ok, f"worst {worst:.2e}")
        assert passing == 5 and worst <= 1e-6

    def test_xselberg_base_and_recursion_5_draws(self):
        worst = 0.0
        for variant in ("base", "recursion"):
            for seed in range(5):
                rep = run_case(sample_case("prop_xselberg_base", seed, CFG, variant=variant))
                assert rep.status == "pass", (variant, seed, rep.notes)
                worst = max(worst, rep.rel_err)
        ok = worst <= 1e-6
        _line("10b (kernel-weighted base case and recursion step)", ok, f"worst {worst:.2e}")
        assert worst <= 1e-6
