"""Contour-placement findings for interpolation-weighted integrands.

A bipartition with boxes in both components leaves a net reciprocal
pole pair at b/(pq) and pq/b in the integrand (the density's single
Gamma(b z^+-) zero cancels only one of the two theta-denominator zeros).
The kernel-derivation contour must enclose b/(pq) while excluding its
reciprocal, which no BC-symmetric circle can do, so the unit torus is
never a valid contour for such shapes.  These tests pin both halves of
that statement: the identity holds on the residue-corrected contour,
and the feasibility machinery diagnoses the obstruction.
"""

import numpy as np

from ellsel.binomials import TableCache
from ellsel.core import NomePair, elliptic_gamma_multi
from ellsel.densities import kappa, vertex_unary_fn
from ellsel.harness import HarnessConfig, run_case, sample_case
from ellsel.interpolation import interp_nonskew, pole_map
from ellsel.partitions import Bipartition
from ellsel.quadrature import GridSpec, TorusFactorizedIntegrand, integrate_torus
from ellsel.symbols import SymbolContext, delta0_bi

MIXED = Bipartition.of((1,), (1,))


def test_mixed_shape_cross_pole_listed():
    ctx = SymbolContext(NomePair(0.3, 0.32), 0.11)
    b = 0.28 + 0.04j
    pm = pole_map(MIXED, b, ctx)
    cross = [loc for loc, label in pm.inward if "cross" in label]
    assert len(cross) == 1
    assert abs(cross[0] - b / (0.3 * 0.32)) < 1e-14


def test_mixed_shape_reported_infeasible():
    rep = run_case(sample_case("vdBult", 5, HarnessConfig(), mu=MIXED))
    assert rep.status == "infeasible"


def test_mixed_shape_identity_holds_on_corrected_contour():
    # Rebuild the torus-infeasible mixed case by hand and verify the
    # closed form against the quadrature corrected by the two residues
    # of the crossing pole pair.
    rng = np.random.default_rng(2024)

    def draw(lo, hi):
        return rng.uniform(lo, hi) * np.exp(2j * np.pi * rng.uniform())

    p, q = draw(0.29, 0.33), draw(0.29, 0.33)
    t = draw(0.1, 0.115)
    t2 = draw(0.26, 0.3)
    t1, t3 = draw(0.72, 0.78), draw(0.72, 0.78)
    t4 = t / (t1 * t2 * t3)
    c = np.sqrt(p * q / t)
    assert abs(t4) < 0.95 and abs(c) < 0.95
    x1 = np.exp(0.77j)
    ctx = SymbolContext(NomePair(p, q), t)
    cache = TableCache()
    unary = vertex_unary_fn((t1, t2, t3, t4, c * x1, c / x1), t, ctx.nomes)
    kap = kappa(1, ctx.nomes)

    def f(z):
        return kap * unary(z) * interp_nonskew(MIXED, (z,), t1, t2, ctx, cache)

    torus = integrate_torus(
        TorusFactorizedIntegrand(nvars=1, unary=[(0, f)]), GridSpec((768,))
    ).value

    def ring_residue(center, radius=1e-3, npts=4096):
        th = 2 * np.pi * np.arange(npts) / npts + 0.37 / npts
        z = center + radius * np.exp(1j * th)
        return complex(np.mean(f(z) * radius * np.exp(1j * th) / z))

    corrected = torus + ring_residue(t2 / (p * q)) - ring_residue(p * q / t2)

    rhs = interp_nonskew(MIXED, (x1,), c * t1, c * t2, ctx, cache)
    rhs *= delta0_bi(MIXED, t1 / t2, [t1 * t3, t1 * t4], ctx)
    gargs = []
    tl = (t1, t2, t3, t4)
    for r in range(4):
        for s in range(r + 1, 4):
            gargs.append(tl[r] * tl[s])
        gargs += [c * tl[r] * x1, c * tl[r] / x1]
    rhs *= elliptic_gamma_multi(gargs, ctx.nomes)

    assert abs(corrected - rhs) / abs(rhs) < 1e-10
    # and the torus alone is NOT the right contour here
    assert abs(torus - rhs) / abs(rhs) > 1e-2
