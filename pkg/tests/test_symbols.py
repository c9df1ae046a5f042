"""Tests for C-symbols, Delta0 ratios and the gamma/Delta0 bridge."""

import cmath

import numpy as np
import pytest

from ellsel.core import NomePair, theta
from ellsel.partitions import Bipartition, Partition, sub_bipartitions
from ellsel.symbols import (
    SymbolContext,
    c0,
    c0_bi,
    cminus,
    cplus,
    delta0,
    delta0_bi,
    gamma_delta_bridge,
)

CTX = SymbolContext(NomePair(0.1, 0.2), 0.25)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def random_unit(rng, lo, hi):
    return rng.uniform(lo, hi) * cmath.exp(2j * cmath.pi * rng.uniform())


class TestCSymbols:
    def test_empty_partition_gives_one(self):
        for fn in (c0, cplus, cminus):
            assert fn(Partition(), 0.7, CTX) == 1.0

    def test_c0_single_row_product(self):
        z, m = 0.6 + 0.1j, 3
        expected = 1.0
        for j in range(m):
            expected *= theta(z * CTX.q**j, CTX.p)
        assert rel_err(c0(Partition((m,)), z, CTX), expected) < 1e-13

    def test_single_cell_plus_minus(self):
        z = 0.45 - 0.2j
        one = Partition((1,))
        assert rel_err(cminus(one, z, CTX), theta(z, CTX.p)) < 1e-14
        assert rel_err(cplus(one, z, CTX), theta(z * CTX.q, CTX.p)) < 1e-14

    def test_role_flag_swaps_series(self):
        z = 0.5
        lam = Partition((2, 1))
        swapped = SymbolContext(CTX.nomes.swapped(), CTX.t)
        assert rel_err(c0(lam, z, CTX, "p"), c0(lam, z, swapped, "q")) < 1e-13

    def test_array_argument(self):
        lam = Partition((2,))
        zs = np.array([0.5, 0.7 + 0.1j])
        vals = c0(lam, zs, CTX)
        for z, v in zip(zs, vals):
            assert rel_err(v, c0(lam, complex(z), CTX)) < 1e-13


class TestDelta0:
    def test_empty_bs(self):
        assert delta0(Partition((2, 1)), 0.4, [], CTX) == 1.0

    def test_reflection(self):
        # Delta0(a|b...) * Delta0(a|pq a / b...) = 1 for random draws.
        rng = np.random.default_rng(11)
        pq = CTX.pq
        for parts in [(1,), (2,), (1, 1), (2, 1)]:
            lam = Partition(parts)
            for _ in range(25):
                a = random_unit(rng, 0.3, 0.9)
                bs = [random_unit(rng, 0.3, 0.9) for _ in range(2)]
                lhs = delta0(lam, a, bs, CTX)
                rhs = delta0(lam, a, [pq * a / b for b in bs], CTX)
                assert abs(lhs * rhs - 1.0) < 1e-10

    def test_reflection_bipartitions(self):
        rng = np.random.default_rng(12)
        pq = CTX.pq
        for lam in [Bipartition.of((1,), (1,)), Bipartition.of((2,), (1, 1))]:
            for _ in range(25):
                a = random_unit(rng, 0.3, 0.9)
                b = random_unit(rng, 0.3, 0.9)
                val = delta0_bi(lam, a, [b], CTX) * delta0_bi(lam, a, [pq * a / b], CTX)
                assert abs(val - 1.0) < 1e-10

    def test_paired_argument_reduction(self):
        # A pair (w, pq a/(b w)) in the list of a [a,b]-ratio collapses to
        # the ratio Delta0(a|w)/Delta0(a|b w) after dividing by Delta0(a/b|...).
        rng = np.random.default_rng(13)
        lam = Bipartition.of((2,), (1,))
        pq = CTX.pq
        for _ in range(10):
            a = random_unit(rng, 0.4, 0.9)
            b = random_unit(rng, 0.4, 0.9)
            w = random_unit(rng, 0.4, 0.9)
            pair = [w, pq * a / (b * w)]
            lhs = delta0_bi(lam, a, pair, CTX) / delta0_bi(lam, a / b, pair, CTX)
            rhs = delta0_bi(lam, a, [w], CTX) / delta0_bi(lam, a, [b * w], CTX)
            assert rel_err(lhs, rhs) < 1e-10

    def test_pq_swap_equals_component_swap(self):
        rng = np.random.default_rng(14)
        swapped = SymbolContext(CTX.nomes.swapped(), CTX.t)
        for lam in [Bipartition.of((2, 1), (1,)), Bipartition.of((1,), (3,))]:
            for _ in range(10):
                a = random_unit(rng, 0.3, 0.9)
                b = random_unit(rng, 0.3, 0.9)
                one = delta0_bi(lam, a, [b], CTX)
                two = delta0_bi(lam.swap(), a, [b], swapped)
                assert rel_err(one, two) < 1e-12


class TestGammaDeltaBridge:
    def test_zero_bipartition(self):
        lhs, rhs = gamma_delta_bridge(Bipartition(), 2, 0.4, 0.3, CTX)
        assert abs(lhs - 1.0) < 1e-13
        assert abs(rhs - 1.0) < 1e-13

    def test_n1_single_box(self):
        lhs, rhs = gamma_delta_bridge(Bipartition.of((1,), ()), 1, 0.4, 0.3, CTX)
        assert rel_err(lhs, rhs) < 1e-10

    def test_n2_mixed(self):
        lhs, rhs = gamma_delta_bridge(Bipartition.of((1,), (1,)), 2, 0.4, 0.3, CTX)
        assert rel_err(lhs, rhs) < 1e-10

    def test_random_shapes(self):
        rng = np.random.default_rng(15)
        shapes = [
            Bipartition.of((1,), (2,)),
            Bipartition.of((2, 1), ()),
            Bipartition.of((1, 1), (1,)),
        ]
        for lam in shapes:
            for n in (3,):
                for _ in range(10):
                    a = random_unit(rng, 0.3, 0.9)
                    b = random_unit(rng, 0.3, 0.9)
                    lhs, rhs = gamma_delta_bridge(lam, n, a, b, CTX)
                    assert rel_err(lhs, rhs) < 1e-9
