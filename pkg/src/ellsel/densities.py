"""Dixon, Selberg vertex/edge and A_n Selberg densities, the parameter
record with balancing and torus-contour feasibility, and the factor
builders feeding the structured torus quadrature.

Normalisation note: the constant kappa_k carried by the Dixon and
vertex densities is evaluated here WITHOUT its 1/(2 pi i)^k part, which
lives in the quadrature weight instead; density values on the torus
therefore stay real-scaled.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ellsel.core import (
    NomePair,
    elliptic_gamma,
    elliptic_gamma_multi,
    qpochhammer_inf,
)
from ellsel.quadrature import TorusFactorizedIntegrand

FEASIBILITY_MARGIN = 0.05
POLE_TOWER_FLOOR = 1e-6
SAMPLER_CAP = 200


class BalancingError(ValueError):
    """Parameter set violates the required multiplicative balancing."""


class InfeasibleError(RuntimeError):
    """No torus-feasible parameter draw found."""


def kappa(k: int, nomes: NomePair) -> complex:
    """(p;p)_inf^k (q;q)_inf^k / (2^k k!), the torus-measure constant
    with the (2 pi i)^-k factor folded into the quadrature weight."""
    pp = qpochhammer_inf(nomes.p, nomes.p, nomes.eps_tail)
    qq = qpochhammer_inf(nomes.q, nomes.q, nomes.eps_tail)
    return (pp * qq) ** k / (2**k * math.factorial(k))


# ---------------------------------------------------------------------------
# Point evaluators (reference implementations; quadrature uses the factor
# builders further down, which share the same gamma arguments).
# ---------------------------------------------------------------------------


def _gamma_pm(a, z, nomes):
    return elliptic_gamma(a * z, nomes) * elliptic_gamma(a / z, nomes)


def _gamma_pm2(a, z, w, nomes):
    return (
        elliptic_gamma(a * z * w, nomes)
        * elliptic_gamma(a * z / w, nomes)
        * elliptic_gamma(a * w / z, nomes)
        * elliptic_gamma(a / (z * w), nomes)
    )


def selberg_vertex_density(z, ts, t: complex, nomes: NomePair) -> complex:
    """BC-symmetric vertex density with m univariate parameters."""
    k = len(z)
    val = kappa(k, nomes)
    for i in range(k):
        for j in range(i + 1, k):
            val *= _gamma_pm2(t, z[i], z[j], nomes) / _gamma_pm2(1.0, z[i], z[j], nomes)
    gamma_t = elliptic_gamma(t, nomes)
    for zi in z:
        num = gamma_t
        for tr in ts:
            num *= _gamma_pm(tr, zi, nomes)
        den = elliptic_gamma(zi**2, nomes) * elliptic_gamma(zi**-2, nomes)
        val *= num / den
    return val


def dixon_density(z, ts, nomes: NomePair) -> complex:
    """Dixon density: no vertex deformation, cross terms inverted."""
    k = len(z)
    val = kappa(k, nomes)
    for i in range(k):
        for j in range(i + 1, k):
            val /= _gamma_pm2(1.0, z[i], z[j], nomes)
    for zi in z:
        num = 1.0
        for tr in ts:
            num *= _gamma_pm(tr, zi, nomes)
        den = elliptic_gamma(zi**2, nomes) * elliptic_gamma(zi**-2, nomes)
        val *= num / den
    return val


def selberg_edge_density(z, w, cval: complex, nomes: NomePair) -> complex:
    """prod_{i,j} Gamma(c z_i^+- w_j^+-)."""
    val = 1.0
    for zi in z:
        for wj in w:
            val *= _gamma_pm2(cval, zi, wj, nomes)
    return val


@dataclass(frozen=True)
class ParamSet:
    """Full parameter record for the rank-n density.

    ts holds t_1 .. t_(2n+4); c is fixed to branch_tag * sqrt(pq/t).
    Every balancing relation must hold to 1e-13 relative."""

    n: int
    k: tuple[int, ...]
    p: complex
    q: complex
    t: complex
    ts: tuple[complex, ...]
    branch_tag: int = +1

    def __post_init__(self):
        if self.n < 1 or len(self.k) != self.n:
            raise ValueError("need k_1..k_n for a rank-n parameter set")
        if any(self.k[i] > self.k[i + 1] for i in range(self.n - 1)) or any(
            kr < 0 for kr in self.k
        ):
            raise ValueError(f"k must be weakly increasing and nonnegative: {self.k}")
        if len(self.ts) != 2 * self.n + 4:
            raise ValueError(f"need {2 * self.n + 4} t-parameters, got {len(self.ts)}")
        for name, val in (("p", self.p), ("q", self.q), ("t", self.t)):
            if abs(val) >= 1:
                raise ValueError(f"|{name}| must be < 1")
        if abs(self.p * self.q / self.t) >= 1:
            raise ValueError("|pq/t| must be < 1")
        for r in range(1, self.n + 1):
            res = self.balancing_residual(r)
            if res > 1e-13:
                raise BalancingError(f"balancing violated at r={r}: residual {res:.3g}")

    @property
    def nomes(self) -> NomePair:
        return NomePair(self.p, self.q)

    @property
    def c(self) -> complex:
        return self.branch_tag * cmath.sqrt(self.p * self.q / self.t)

    def balancing_residual(self, r: int) -> float:
        """Relative residual of the rank-r balancing relation."""
        kk = (0,) + self.k
        expo = kk[r] - kk[r - 1] + kk[self.n] - 2
        prod = self.t**expo * self.ts[2 * r - 2] * self.ts[2 * r - 1]
        for s in range(2 * self.n, 2 * self.n + 4):
            prod *= self.ts[s]
        return abs(prod - self.p * self.q) / abs(self.p * self.q)

    def vertex_params(self, r: int) -> tuple[complex, ...]:
        """Univariate parameter list of the vertex at node r (1-based)."""
        if r == self.n:
            return tuple(self.ts[2 * self.n - 2 : 2 * self.n + 4])
        c = self.c
        return (
            c ** (r - self.n) * self.ts[2 * r - 2],
            c ** (r - self.n) * self.ts[2 * r - 1],
            self.t * c ** (self.n - r) / self.ts[2 * r],
            self.t * c ** (self.n - r) / self.ts[2 * r + 1],
        )

    def to_json_dict(self) -> dict:
        def c2(z):
            return [z.real, z.imag]

        return {
            "n": self.n,
            "k": list(self.k),
            "p": c2(complex(self.p)),
            "q": c2(complex(self.q)),
            "t": c2(complex(self.t)),
            "ts": [c2(complex(v)) for v in self.ts],
            "branch_tag": self.branch_tag,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ParamSet":
        def fromc(v):
            return complex(v[0], v[1])

        return cls(
            n=int(data["n"]),
            k=tuple(int(v) for v in data["k"]),
            p=fromc(data["p"]),
            q=fromc(data["q"]),
            t=fromc(data["t"]),
            ts=tuple(fromc(v) for v in data["ts"]),
            branch_tag=int(data.get("branch_tag", 1)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "ParamSet":
        return cls.from_json_dict(json.loads(text))


def an_density(levels, params: ParamSet) -> complex:
    """Full rank-n density at one point: vertex factors along the Dynkin
    nodes and edge factors between neighbours."""
    if len(levels) != params.n:
        raise ValueError("need one point tuple per level")
    nomes = params.nomes
    val = 1.0
    for r in range(1, params.n + 1):
        try:
            val *= selberg_vertex_density(
                levels[r - 1], params.vertex_params(r), params.t, nomes
            )
            if r < params.n:
                val *= selberg_edge_density(levels[r - 1], levels[r], params.c, nomes)
        except Exception as exc:
            raise type(exc)(f"level {r}: {exc}") from exc
    return val


def selberg_average_normalizer(k: int, ts, t: complex, nomes: NomePair) -> complex:
    """Closed form of the 6-parameter torus integral at rank one:
    prod_i Gamma(t^i) prod_{r<s} Gamma(t^(i-1) t_r t_s)."""
    if len(ts) != 6:
        raise ValueError("normalizer needs exactly six parameters")
    bal = t ** (2 * k - 2)
    for v in ts:
        bal *= v
    if abs(bal - nomes.pq) / abs(nomes.pq) > 1e-10:
        raise BalancingError("t^(2k-2) t_1..t_6 must equal pq")
    args = []
    for i in range(1, k + 1):
        args.append(t**i)
        for r in range(6):
            for s in range(r + 1, 6):
                args.append(t ** (i - 1) * ts[r] * ts[s])
    return elliptic_gamma_multi(args, nomes)


def an_selberg_rhs(params: ParamSet) -> complex:
    """Closed form of the rank-n torus integral."""
    n, t, c = params.n, params.t, params.c
    ts = params.ts
    kk = (0,) + params.k
    args = []
    for r in range(1, n + 1):
        for i in range(1, kk[r] - kk[r - 1] + 1):
            args.append(t**i)
            args.append(t ** (i - 1) * c ** (2 * r - 2 * n) * ts[2 * r - 2] * ts[2 * r - 1])
    for r in range(2 * n + 1, 2 * n + 5):
        for s in range(r + 1, 2 * n + 5):
            for i in range(1, kk[n] + 1):
                args.append(t ** (i - 1) * ts[r - 1] * ts[s - 1])
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            for i in range(1, kk[r] - kk[r - 1] + 1):
                args.append(t**i * ts[2 * r - 2] / ts[2 * s - 2])
                args.append(t**i * ts[2 * r - 1] / ts[2 * s - 2])
                args.append(t**i * ts[2 * r - 2] / ts[2 * s - 1])
                args.append(t**i * ts[2 * r - 1] / ts[2 * s - 1])
    for r in range(1, n + 1):
        for s in range(2 * n + 1, 2 * n + 5):
            for i in range(1, kk[r] - kk[r - 1] + 1):
                args.append(t ** (i - 1) * ts[2 * r - 2] * ts[s - 1])
                args.append(t ** (i - 1) * ts[2 * r - 1] * ts[s - 1])
    return elliptic_gamma_multi(args, params.nomes)


# ---------------------------------------------------------------------------
# Factor builders for the structured quadrature path.
# ---------------------------------------------------------------------------


def vertex_unary_fn(ts, t: complex, nomes: NomePair):
    """Univariate part of the vertex density: Gamma(t) prod_r
    Gamma(t_r z^+-) / Gamma(z^+-2), vectorised over z.

    The reciprocal gammas are evaluated through the reflection formula
    1/Gamma(w) = Gamma(pq/w), which turns the would-be poles at grid
    coincidences into the exact zeros they really are."""
    gamma_t = elliptic_gamma(t, nomes)
    params = tuple(ts)
    pq = nomes.pq

    def fn(z):
        num = np.full_like(z, gamma_t, dtype=np.complex128)
        for tr in params:
            num *= elliptic_gamma(tr * z, nomes) * elliptic_gamma(tr / z, nomes)
        num *= elliptic_gamma(pq / z**2, nomes) * elliptic_gamma(pq * z**2, nomes)
        return num

    return fn


def dixon_unary_fn(ts, nomes: NomePair):
    params = tuple(ts)
    pq = nomes.pq

    def fn(z):
        num = np.ones_like(z, dtype=np.complex128)
        for tr in params:
            num *= elliptic_gamma(tr * z, nomes) * elliptic_gamma(tr / z, nomes)
        num *= elliptic_gamma(pq / z**2, nomes) * elliptic_gamma(pq * z**2, nomes)
        return num

    return fn


def vertex_pair_fn(t: complex, nomes: NomePair):
    """Cross factor of the vertex density as a function of one product
    or ratio w: Gamma(t w) Gamma(t / w) / (Gamma(w) Gamma(1/w)), with the
    denominator reflected into Gamma(pq/w) Gamma(pq w)."""
    pq = nomes.pq

    def fn(w):
        num = elliptic_gamma(t * w, nomes) * elliptic_gamma(t / w, nomes)
        num *= elliptic_gamma(pq / w, nomes) * elliptic_gamma(pq * w, nomes)
        return num

    return fn


def dixon_pair_fn(nomes: NomePair):
    pq = nomes.pq

    def fn(w):
        return elliptic_gamma(pq / w, nomes) * elliptic_gamma(pq * w, nomes)

    return fn


def edge_pair_fn(cval: complex, nomes: NomePair):
    def fn(w):
        return elliptic_gamma(cval * w, nomes) * elliptic_gamma(cval / w, nomes)

    return fn


@dataclass
class IntegrandDescriptor:
    """Composable description of a BC-symmetric integrand: per-level
    density factors plus arbitrary extra univariate/multivariate factors
    (interpolation functions, kernels) keyed by level."""

    params: ParamSet
    dixon_levels: tuple[int, ...] = ()
    extra_unary: dict = field(default_factory=dict)  # level -> [fn(z)]
    extra_blocks: list = field(default_factory=list)  # (level, fn(*cols))
    drop_vertex_params: dict = field(default_factory=dict)  # level -> indices
    prefactor: complex = 1.0

    def dimension_vector(self) -> tuple[int, ...]:
        return self.params.k

    def build(self) -> TorusFactorizedIntegrand:
        params = self.params
        nomes = params.nomes
        n = params.n
        var_of_level: list[list[int]] = []
        counter = 0
        for r in range(1, n + 1):
            var_of_level.append(list(range(counter, counter + params.k[r - 1])))
            counter += params.k[r - 1]

        unary = []
        pairs = []
        pref = complex(self.prefactor)
        for r in range(1, n + 1):
            lvars = var_of_level[r - 1]
            if not lvars:
                continue
            ts_r = list(params.vertex_params(r))
            for idx in sorted(self.drop_vertex_params.get(r, ()), reverse=True):
                del ts_r[idx]
            if r in set(self.dixon_levels):
                ufn = dixon_unary_fn(ts_r, nomes)
                pfn = dixon_pair_fn(nomes)
            else:
                ufn = vertex_unary_fn(ts_r, params.t, nomes)
                pfn = vertex_pair_fn(params.t, nomes)
            pref *= kappa(len(lvars), nomes)
            for v in lvars:
                unary.append((v, ufn))
            for i, vi in enumerate(lvars):
                for vj in lvars[i + 1 :]:
                    pairs.append((vi, vj, pfn, pfn))
            if r < n and var_of_level[r]:
                efn = edge_pair_fn(params.c, nomes)
                for vi in lvars:
                    for vj in var_of_level[r]:
                        pairs.append((vi, vj, efn, efn))
            for fn in self.extra_unary.get(r, ()):
                for v in lvars:
                    unary.append((v, fn))

        blocks = []
        for level, fn in self.extra_blocks:
            blocks.append((tuple(var_of_level[level - 1]), fn))

        return TorusFactorizedIntegrand(
            nvars=counter, unary=unary, pairs=pairs, blocks=blocks, prefactor=pref
        )


# ---------------------------------------------------------------------------
# Feasibility and sampling.
# ---------------------------------------------------------------------------


@dataclass
class Feasibility:
    ok: bool
    violations: list[str] = field(default_factory=list)


def feasibility_check(params: ParamSet, extra_poles=()) -> Feasibility:
    """Torus feasibility with margin: every inward pole sequence must
    stay inside modulus 1 - delta and every reciprocal outside 1 + delta,
    with all contours the unit circle.  Only tower bases need checking:
    the p^i q^j shifts move members strictly inward.

    extra_poles: iterable of (location, label) pairs for integrand
    factors beyond the density (interpolation functions, kernels)."""
    delta = FEASIBILITY_MARGIN
    hi = 1.0 - delta
    lo = 1.0 + delta
    nomes = params.nomes
    violations = []

    def require_inside(value, label):
        if abs(value) >= hi:
            violations.append(f"{label}: |{value:.4g}| = {abs(value):.4g} >= {hi}")

    def require_outside(value, label):
        if abs(value) <= lo:
            violations.append(f"{label}: |{value:.4g}| = {abs(value):.4g} <= {lo}")

    n, t, c = params.n, params.t, params.c
    require_inside(t, "contour scaling t*C_r")
    if n >= 2:
        require_inside(c, "edge scaling c*C_r")
        require_inside(nomes.pq / t, "inner scaling (pq/t)*C_r")
    for r in range(1, n + 1):
        for idx, base in enumerate(params.vertex_params(r)):
            label = f"vertex r={r} parameter {idx + 1}"
            require_inside(base, label)
            require_outside(1.0 / base, label + " (reciprocal)")
    for loc, label in extra_poles:
        if abs(loc) < 1.0:
            require_inside(loc, label)
        else:
            require_outside(loc, label)
    return Feasibility(not violations, violations)


def sample_an_params(
    n: int,
    k: tuple[int, ...],
    rng,
    windows: dict | None = None,
    accept=None,
    cap: int = SAMPLER_CAP,
) -> ParamSet:
    """Rejection sampler: draw t, the four shared parameters and one
    member of each vertex pair; the partner is solved from the balancing
    relation; draws failing feasibility (or the extra accept hook) are
    rejected up to the cap."""
    w = {
        "p": (0.15, 0.3),
        "q": (0.15, 0.3),
        "t": (0.2, 0.45),
        "odd": (0.3, 0.6),
        "shared": (0.3, 0.6),
    }
    if windows:
        w.update(windows)

    def draw(lohi):
        lo, hi = lohi
        return rng.uniform(lo, hi) * cmath.exp(2j * math.pi * rng.uniform())

    kk = (0,) + tuple(k)
    last = None
    for _ in range(cap):
        p, q, t = draw(w["p"]), draw(w["q"]), draw(w["t"])
        shared = [draw(w["shared"]) for _ in range(4)]
        ts: list[complex] = []
        ok = True
        for r in range(1, n + 1):
            odd = draw(w["odd"])
            expo = kk[r] - kk[r - 1] + kk[n] - 2
            partner = p * q / (t**expo * odd * math.prod(shared))
            ts.extend([odd, partner])
        ts.extend(shared)
        try:
            params = ParamSet(n=n, k=tuple(k), p=p, q=q, t=t, ts=tuple(ts))
        except (ValueError, BalancingError):
            continue
        last = params
        if not feasibility_check(params).ok:
            continue
        if accept is not None and not accept(params):
            continue
        return params
    raise InfeasibleError(
        f"no torus-feasible draw for n={n}, k={k} after {cap} tries"
        + (f" (last violations: {feasibility_check(last).violations[:3]})" if last else "")
    )
