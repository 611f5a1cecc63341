"""Exponentially decaying odd-harmonic solutions by fixed-point iteration.

State ``U = [u, v]`` with ``u = sum_j u_j cos(j tau)`` over odd ``j <= J``.
The system is ``U' = A U + F(U)`` where, per harmonic,

    u_j' = v_j,    v_j' = c_j u_j + F_j,    c_j = (1 - (1 - eps^2) j^2)/eps^2

and ``F = g3 u^3 + g5 eps^2 u^5 + g7 eps^4 u^7 + ...`` (``eps u`` solves the
scaled wave equation).  ``c_1 = 1`` gives the modes ``exp(-xi)`` (``U_-``)
and ``exp(xi)`` (``U_+``); for ``j >= 3`` ``c_j = -nu_j^2`` with
``nu_j = omega_j/eps`` and the block rotates.

The map iterated is

    M(U)(xi) = exp(-xi) [a, -a] cos(tau) + int_0^xi e^{A(xi-s)} F_-(U) ds
               - int_xi^inf e^{A(xi-s)} (F_+ + sum_j F_j)(U) ds

with ``F`` interpolated linearly between grid points and every propagator
factor integrated exactly, and the tail beyond ``Xi`` closed with
``F(s) = F(Xi) exp(-3 beta (s - Xi))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DomainTooShort, NoBreatherRegime, NoContraction, SpectralGapViolated
from .presets import ODD_PRESETS, preset_coefficient

__all__ = [
    "GOdd",
    "SolverConfig",
    "StateVector",
    "Trajectory",
    "Diagnostics",
    "sobolev_norm",
    "x_norm",
    "decompose",
    "recompose",
    "propagate",
    "omega",
    "spectral_kappa",
    "norm_splitting_check",
    "sandwich_check",
    "propagator_bound_check",
    "nonlinearity",
    "apply_M",
    "solve_fixed_point",
    "residual",
    "translation_experiment",
    "product_constant",
    "product_constant_check",
    "eps_of_period",
    "exp_series_profile",
    "compare_with_series",
]

_EPS2_MAX = 8 / 9


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GOdd:
    """Odd nonlinearity ``u + g3 u^3 + g5 u^5 + ...``; ``coeffs[m] = g_m``."""

    coeffs: dict = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self):
        c = {int(m): Fraction(v) for m, v in self.coeffs.items()}
        bad = [m for m, v in c.items() if v and (m % 2 == 0 or m < 3)]
        if bad:
            raise ValueError(f"GOdd takes odd indices >= 3 only, got g{bad[0]}")
        object.__setattr__(self, "coeffs", {m: v for m, v in sorted(c.items()) if v})

    @classmethod
    def preset(cls, name: str, max_m: int = 15) -> "GOdd":
        if name not in ODD_PRESETS:
            raise ValueError(f"preset {name!r} is not odd")
        return cls({m: preset_coefficient(name, m) for m in range(3, max_m + 1, 2)}, name)

    @property
    def max_m(self) -> int:
        return max(self.coeffs, default=1)


@dataclass(frozen=True)
class SolverConfig:
    eps: float = 0.3
    s: float = 2.0
    beta: float = 0.5
    a: float = 0.05
    J: int = 9
    Xi: float = 12.0
    N: int = 1200
    max_iter: int = 200
    tol: float = 1e-10

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.eps**2 >= _EPS2_MAX:
            raise SpectralGapViolated(
                f"eps^2 = {self.eps**2:.6g} >= 8/9: omega_3^2 = 9(1 - eps^2) - 1 <= 0 "
                "and the j = 3 block stops rotating"
            )
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if not self.s > 1.5:
            raise ValueError("s must exceed 3/2")
        if self.J < 1 or self.J % 2 == 0:
            raise ValueError("J must be odd and >= 1")
        if self.N < 2 or self.Xi <= 0:
            raise ValueError("need N >= 2 and Xi > 0")

    @property
    def h(self) -> float:
        return self.Xi / self.N

    @property
    def js(self) -> np.ndarray:
        return np.arange(1, self.J + 1, 2)

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.Xi, self.N + 1)


# ---------------------------------------------------------------------------
# States and norms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateVector:
    """One ``xi`` slice; ``u[i]``, ``v[i]`` belong to harmonic ``2i + 1``."""

    eps: float
    s: float
    u: np.ndarray
    v: np.ndarray

    @property
    def J(self) -> int:
        return 2 * len(self.u) - 1

    @classmethod
    def from_dict(cls, eps, s, u: dict, v: dict | None = None, J: int | None = None) -> "StateVector":
        v = v or {}
        top = J if J is not None else max([1, *u, *v])
        if any(j % 2 == 0 for j in (*u, *v)):
            raise ValueError("only odd harmonics are allowed")
        n = (top + 1) // 2
        uu, vv = np.zeros(n), np.zeros(n)
        for j, x in u.items():
            uu[(j - 1) // 2] = x
        for j, x in v.items():
            vv[(j - 1) // 2] = x
        return cls(eps, s, uu, vv)


def sobolev_norm(u, s: float, js=None) -> float:
    """``sqrt(sum_j u_j^2 (1 + j^2)^s)``; ``u`` is a ``{j: u_j}`` map or an
    array over ``js`` (default odd ``1, 3, ...``)."""
    if isinstance(u, dict):
        if not u:
            return 0.0
        return math.sqrt(sum(x * x * (1 + j * j) ** s for j, x in u.items()))
    u = np.asarray(u, dtype=float)
    if js is None:
        js = np.arange(1, 2 * u.shape[-1], 2)
    wts = (1.0 + np.asarray(js, dtype=float) ** 2) ** s
    return np.sqrt(np.sum(u * u * wts, axis=-1))


def _x_norm_arr(u, v, eps, s, js):
    return np.sqrt(sobolev_norm(u, s, js) ** 2 + eps * eps * sobolev_norm(v, s - 1, js) ** 2)


def x_norm(U: StateVector) -> float:
    js = np.arange(1, 2 * len(U.u), 2)
    return float(_x_norm_arr(U.u, U.v, U.eps, U.s, js))


@dataclass(frozen=True)
class Decomposition:
    a: float
    b: float
    blocks: dict  # j -> (u_j, v_j)


def decompose(U: StateVector) -> Decomposition:
    """``U = [a, -a] cos + [b, b] cos + sum_j [u_j, v_j] cos(j tau)``."""
    u1, v1 = float(U.u[0]), float(U.v[0])
    blocks = {2 * i + 1: (float(U.u[i]), float(U.v[i])) for i in range(1, len(U.u))}
    return Decomposition((u1 - v1) / 2, (u1 + v1) / 2, blocks)


def recompose(d: Decomposition, eps: float, s: float) -> StateVector:
    n = 1 + len(d.blocks)
    u, v = np.zeros(n), np.zeros(n)
    u[0], v[0] = d.a + d.b, d.b - d.a
    for j, (x, y) in d.blocks.items():
        u[(j - 1) // 2], v[(j - 1) // 2] = x, y
    return StateVector(eps, s, u, v)


def omega(j, eps: float):
    """``omega_j = sqrt((1 - eps^2) j^2 - 1)``; raises if not positive."""
    w2 = (1 - eps * eps) * np.asarray(j, dtype=float) ** 2 - 1
    if np.any(w2 <= 0):
        raise SpectralGapViolated(f"omega^2 = {np.min(w2):.6g} <= 0 at eps = {eps}")
    return np.sqrt(w2)


def spectral_kappa(eps: float, J: int) -> float:
    """``min_j omega_j^2/(1 + j^2)`` over odd ``3 <= j <= J``."""
    js = np.arange(3, J + 1, 2, dtype=float)
    if len(js) == 0:
        return 1.0
    return float(np.min(omega(js, eps) ** 2 / (1 + js**2)))


def propagate(component, xi: float, eps: float):
    """``exp(A xi)`` on one piece of the decomposition.

    ``component`` is ``("-", a)``, ``("+", b)`` or ``(j, (u_j, v_j))``.
    """
    kind, val = component
    if kind == "-":
        return ("-", val * math.exp(-xi))
    if kind == "+":
        return ("+", val * math.exp(xi))
    j = int(kind)
    w = float(omega(j, eps))
    nu = w / eps
    c, sn = math.cos(nu * xi), math.sin(nu * xi)
    x, y = val
    return (j, (c * x + sn / nu * y, -nu * sn * x + c * y))


@dataclass(frozen=True)
class InequalityReport:
    name: str
    eps: float
    samples: int
    worst: float  # largest (lhs - rhs)/rhs; <= 0 means the bound held everywhere
    holds: bool


def _rand_states(rng, n, nh, scale=1.0):
    return rng.uniform(-scale, scale, (n, nh)), rng.uniform(-scale, scale, (n, nh))


def norm_splitting_check(eps: float, s: float = 2.0, J: int = 9, samples: int = 10_000,
                         seed: int = 0) -> InequalityReport:
    """``||U||^2 = ||U_+ + U_-||^2 + sum_j ||U_j||^2``: worst relative gap."""
    rng = np.random.default_rng(seed)
    nh = (J + 1) // 2
    js = np.arange(1, J + 1, 2)
    u, v = _rand_states(rng, samples, nh)
    tot = _x_norm_arr(u, v, eps, s, js) ** 2
    low = _x_norm_arr(u[:, :1], v[:, :1], eps, s, js[:1]) ** 2
    rest = sum(_x_norm_arr(u[:, i:i + 1], v[:, i:i + 1], eps, s, js[i:i + 1]) ** 2 for i in range(1, nh))
    gap = float(np.max(np.abs(tot - low - rest) / tot))
    return InequalityReport("norm splitting", eps, samples, gap, gap <= 1e-14)


def sandwich_check(eps: float, s: float = 2.0, samples: int = 10_000, seed: int = 0) -> InequalityReport:
    """``2 eps^2/(2 + eps^2) (P + M) <= ||U_+ + U_-||^2 <= 2 (P + M)`` with
    ``P = ||U_+||^2``, ``M = ||U_-||^2`` on random ``(a, b)``."""
    rng = np.random.default_rng(seed)
    ab = rng.uniform(-1, 1, (samples, 2))
    a, b = ab[:, 0], ab[:, 1]
    one = np.ones(1)

    def nrm2(x, y):
        return _x_norm_arr(x[:, None], y[:, None], eps, s, one) ** 2

    mid = nrm2(a + b, b - a)
    both = nrm2(a, -a) + nrm2(b, b)
    lo = 2 * eps**2 / (2 + eps**2) * both
    hi = 2 * both
    # the lower bound is attained at a = -b, so allow rounding only
    worst = float(max(np.max((lo - mid) / both), np.max((mid - hi) / both)))
    return InequalityReport("sandwich", eps, samples, worst, worst <= 1e-15)


def propagator_bound_check(eps: float, s: float = 2.0, J: int = 9, samples: int = 10_000,
                           xi_max: float = 10.0, seed: int = 0) -> InequalityReport:
    """``||exp(A xi) U_j||^2 <= (1 + 1/kappa) ||U_j||^2`` for random ``j``,
    ``U_j`` and ``xi`` in ``[0, xi_max]``."""
    rng = np.random.default_rng(seed)
    kappa = spectral_kappa(eps, J)
    if not 0 < kappa < 1:
        raise SpectralGapViolated(f"kappa = {kappa} outside (0, 1)")
    jj = rng.choice(np.arange(3, J + 1, 2), samples)
    x, y = rng.uniform(-1, 1, samples), rng.uniform(-1, 1, samples)
    xi = rng.uniform(0, xi_max, samples)
    nu = omega(jj, eps) / eps
    c, sn = np.cos(nu * xi), np.sin(nu * xi)
    x2, y2 = c * x + sn / nu * y, -nu * sn * x + c * y
    wu = (1 + jj.astype(float) ** 2) ** s
    wv = eps**2 * (1 + jj.astype(float) ** 2) ** (s - 1)
    before = wu * x * x + wv * y * y
    after = wu * x2 * x2 + wv * y2 * y2
    bound = (1 + 1 / kappa) * before
    worst = float(np.max((after - bound) / bound))
    return InequalityReport("propagator bound", eps, samples, worst, worst <= 0)


# ---------------------------------------------------------------------------
# Nonlinearity
# ---------------------------------------------------------------------------

def _full(u_odd: np.ndarray) -> np.ndarray:
    """Odd-compact ``(n, nh)`` -> full harmonic index ``(n, 2 nh)``."""
    n, nh = u_odd.shape
    out = np.zeros((n, 2 * nh))
    out[:, 1::2] = u_odd
    return out


def nonlinearity_batch(u_odd: np.ndarray, g: GOdd, eps: float) -> np.ndarray:
    """``sum_m g_m eps^(m-3) u^m`` truncated to the stored harmonics, for a
    stack ``(n, nh)`` of odd-compact coefficient rows."""
    u_odd = np.atleast_2d(np.asarray(u_odd, dtype=float))
    nh = u_odd.shape[1]
    if not g.coeffs:
        return np.zeros_like(u_odd)
    uf = _full(u_odd)
    u2 = kernels.cos_mul_batch(uf, uf)
    acc = np.zeros((u_odd.shape[0], 2 * nh))
    p = kernels.cos_mul_batch(uf, u2)  # u^3
    m = 3
    while True:
        gm = g.coeffs.get(m)
        if gm:
            acc += float(gm) * eps ** (m - 3) * p[:, : 2 * nh]
        if m + 2 > g.max_m:
            break
        p = kernels.cos_mul_batch(p, u2)
        m += 2
    return acc[:, 1::2].copy()


def nonlinearity(U: StateVector, g: GOdd) -> StateVector:
    """``F(U) = [0, g3 u^3 + g5 eps^2 u^5 + ...]`` with harmonics above ``J`` dropped."""
    fv = nonlinearity_batch(U.u[None, :], g, U.eps)[0]
    return StateVector(U.eps, U.s, np.zeros_like(U.u), fv)


# ---------------------------------------------------------------------------
# Trajectories and the map M
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    xi: np.ndarray
    u: np.ndarray  # (N+1, nh)
    v: np.ndarray
    eps: float
    s: float
    beta: float

    @property
    def js(self) -> np.ndarray:
        return np.arange(1, 2 * self.u.shape[1], 2)

    def state(self, k: int) -> StateVector:
        return StateVector(self.eps, self.s, self.u[k].copy(), self.v[k].copy())

    def x_norms(self) -> np.ndarray:
        return _x_norm_arr(self.u, self.v, self.eps, self.s, self.js)

    def y_norm(self) -> float:
        return float(np.max(np.exp(self.beta * self.xi) * self.x_norms()))

    def y_distance(self, other: "Trajectory") -> float:
        du, dv = self.u - other.u, self.v - other.v
        xn = _x_norm_arr(du, dv, self.eps, self.s, self.js)
        return float(np.max(np.exp(self.beta * self.xi) * xn))

    def dump(self) -> str:
        """Plain text: one row per grid point, ``xi u1 v1 u3 v3 ...`` in ``%.17g``."""
        cols = ["xi"] + [f"{c}{j}" for j in self.js for c in ("u", "v")]
        lines = [f"# trajectory eps={self.eps!r} s={self.s!r} beta={self.beta!r} N={len(self.xi) - 1}",
                 "# " + " ".join(cols)]
        inter = np.empty((len(self.xi), 2 * self.u.shape[1]))
        inter[:, 0::2], inter[:, 1::2] = self.u, self.v
        for x, row in zip(self.xi, inter):
            lines.append(" ".join("%.17g" % t for t in (x, *row)))
        return "\n".join(lines) + "\n"


def zero_trajectory(cfg: SolverConfig) -> Trajectory:
    nh = (cfg.J + 1) // 2
    z = np.zeros((cfg.N + 1, nh))
    return Trajectory(cfg.grid(), z, z.copy(), cfg.eps, cfg.s, cfg.beta)


def _exp_weights(h: float):
    e = math.exp(-h)
    phi0 = -math.expm1(-h)
    if h < 1e-4:
        phi1 = h / 2 - h * h / 6 + h**3 / 24
        psi1 = h / 2 - h * h / 3 + h**3 / 8
    else:
        phi1 = (h + math.expm1(-h)) / h
        psi1 = (phi0 - h * e) / h
    return e, phi0, phi1, psi1


def _rot_weights(nu: float, h: float):
    """``R = exp(-A h)`` and the vectors ``p0, p1`` with
    ``int_0^h exp(-A t) [0, f(t)] dt = p0 f(0) + p1 f(h)`` for linear ``f``."""
    x = nu * h
    c, sn = math.cos(x), math.sin(x)
    R = np.array([[c, -sn / nu], [nu * sn, c]])
    if x < 1e-3:
        # series in x for the four moments, divided by nu^k h^k as needed
        S0 = h * (x / 2 - x**3 / 24)  # int sin(nu t) dt
        C0 = h * (1 - x**2 / 6 + x**4 / 120)  # int cos(nu t) dt
        S1 = h * h * (x / 3 - x**3 / 30)  # int t sin(nu t) dt
        C1 = h * h * (0.5 - x**2 / 8 + x**4 / 144)  # int t cos(nu t) dt
    else:
        S0 = (1 - c) / nu
        C0 = sn / nu
        S1 = (sn - x * c) / nu**2
        C1 = (c + x * sn - 1) / nu**2
    p1 = np.array([-S1 / (nu * h), C1 / h])
    p0 = np.array([-S0 / nu, C0]) - p1
    return R, p0, p1


@dataclass
class _Plan:
    cfg: SolverConfig
    e: float
    phi0: float
    phi1: float
    psi1: float
    nus: np.ndarray
    R: np.ndarray
    p0: np.ndarray
    p1: np.ndarray


def _plan(cfg: SolverConfig) -> _Plan:
    h = cfg.h
    e, phi0, phi1, psi1 = _exp_weights(h)
    js = cfg.js[1:]
    nus = omega(js, cfg.eps) / cfg.eps if len(js) else np.zeros(0)
    R = np.zeros((len(js), 2, 2))
    p0 = np.zeros((len(js), 2))
    p1 = np.zeros((len(js), 2))
    for i, nu in enumerate(nus):
        R[i], p0[i], p1[i] = _rot_weights(float(nu), h)
    return _Plan(cfg, e, phi0, phi1, psi1, nus, R, p0, p1)


def apply_M(T: Trajectory, a: float, g: GOdd, cfg: SolverConfig, plan: _Plan | None = None,
            tail_out: list | None = None) -> Trajectory:
    """One application of ``M`` on the grid of ``cfg``."""
    plan = plan or _plan(cfg)
    F = nonlinearity_batch(T.u, g, cfg.eps)  # (N+1, nh)
    kappa = 3 * cfg.beta
    f1 = F[:, 0]
    aF, bF = -f1 / 2, f1 / 2
    e, phi0, phi1, psi1 = plan.e, plan.phi0, plan.phi1, plan.psi1
    alpha = kernels.scan_exp_forward(aF, e, phi0 - phi1, phi1, float(a))
    b_tail = -bF[-1] / (1 + kappa)
    beta_ = kernels.scan_exp_backward(bF, e, phi0 - psi1, psi1, b_tail)
    u = np.empty_like(T.u)
    v = np.empty_like(T.v)
    u[:, 0] = alpha + beta_
    v[:, 0] = beta_ - alpha
    tails = [abs(b_tail) * math.sqrt(2 ** cfg.s + cfg.eps**2 * 2 ** (cfg.s - 1))]
    if F.shape[1] > 1:
        fj = np.ascontiguousarray(F[:, 1:].T)
        fN = fj[:, -1]
        den = kappa**2 + plan.nus**2
        tail = np.stack([fN / den, -kappa * fN / den], axis=1)
        W = kernels.scan_rot_backward(fj, plan.R, plan.p0, plan.p1, tail)
        u[:, 1:] = W[:, :, 0].T
        v[:, 1:] = W[:, :, 1].T
        js = cfg.js[1:]
        tails.append(float(_x_norm_arr(tail[:, 0], tail[:, 1], cfg.eps, cfg.s, js)))
    if tail_out is not None:
        tail_out.append(math.exp(cfg.beta * cfg.Xi) * math.hypot(*tails))
    return Trajectory(T.xi, u, v, cfg.eps, cfg.s, cfg.beta)


@dataclass
class Diagnostics:
    iterations: int = 0
    distances: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    converged: bool = False
    a_used: float = 0.0
    halvings: int = 0
    tail: float = 0.0
    slope_leading: float | None = None
    slope_norm: float | None = None
    backend: str = kernels.BACKEND

    @property
    def max_ratio(self) -> float | None:
        return max(self.ratios) if self.ratios else None

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "a_used": self.a_used,
            "halvings": self.halvings,
            "final_distance": self.distances[-1] if self.distances else 0.0,
            "max_contraction_ratio": self.max_ratio,
            "tail_estimate": self.tail,
            "slope_leading_mode": self.slope_leading,
            "slope_x_norm": self.slope_norm,
            "distances": list(self.distances),
            "ratios": list(self.ratios),
            "backend": self.backend,
        }


def _fit_slope(xi, y, lo, hi) -> float | None:
    m = (xi >= lo) & (xi <= hi) & (y > 0)
    if m.sum() < 2:
        return None
    return float(np.polyfit(xi[m], np.log(y[m]), 1)[0])


def _iterate(g: GOdd, cfg: SolverConfig) -> tuple[Trajectory, Diagnostics]:
    plan = _plan(cfg)
    T = zero_trajectory(cfg)
    d = Diagnostics(a_used=cfg.a)
    bad = 0
    for it in range(1, cfg.max_iter + 1):
        tails: list = []
        with np.errstate(over="ignore", invalid="ignore"):
            T_new = apply_M(T, cfg.a, g, cfg, plan, tails)
            dist = T_new.y_distance(T)
        d.tail = tails[-1]
        if d.distances:
            prev = d.distances[-1]
            r = dist / prev if prev > 0 else 0.0
            d.ratios.append(r)
            bad = bad + 1 if r >= 1 else 0
        d.distances.append(dist)
        d.iterations = it
        T = T_new
        if not np.isfinite(dist):
            raise NoContraction(f"iterates diverged at a = {cfg.a}")
        if bad >= 5:
            raise NoContraction(f"contraction ratio >= 1 for 5 iterations at a = {cfg.a}")
        if dist <= cfg.tol:
            d.converged = True
            break
    # judged on the final iterate: a diverging run is a contraction failure
    if d.tail > cfg.tol:
        raise DomainTooShort(
            f"tail beyond Xi = {cfg.Xi} contributes {d.tail:.3g} > tol = {cfg.tol:.3g} in the Y norm"
        )
    return T, d


def solve_fixed_point(g: GOdd, cfg: SolverConfig, auto_halve: bool = True,
                      a_min: float = 1e-6) -> tuple[Trajectory, Diagnostics]:
    """Iterate ``M`` from ``0`` until the Y-distance of successive iterates is
    at most ``cfg.tol``.  On :class:`NoContraction` the seed amplitude is
    halved (down to ``a_min``) when ``auto_halve`` is set."""
    halvings = 0
    cur = cfg
    while True:
        try:
            T, d = _iterate(g, cur)
            break
        except NoContraction:
            if not auto_halve or abs(cur.a) / 2 < a_min:
                raise
            cur = replace(cur, a=cur.a / 2)
            halvings += 1
    d.halvings = halvings
    d.a_used = cur.a
    lo, hi = 2.0, cfg.Xi - 2.0
    d.slope_leading = _fit_slope(T.xi, np.abs(T.u[:, 0]), lo, hi)
    d.slope_norm = _fit_slope(T.xi, T.x_norms(), lo, hi)
    return T, d


def residual(T: Trajectory, g: GOdd, per_point: bool = False):
    """``max_k || (U_{k+1} - U_{k-1})/(2 h) - A U_k - F(U_k) ||_X`` over interior points."""
    h = T.xi[1] - T.xi[0]
    js = T.js.astype(float)
    eps = T.eps
    c = (1 - (1 - eps * eps) * js**2) / (eps * eps)
    du = (T.u[2:] - T.u[:-2]) / (2 * h)
    dv = (T.v[2:] - T.v[:-2]) / (2 * h)
    F = nonlinearity_batch(T.u[1:-1], g, eps)
    ru = du - T.v[1:-1]
    rv = dv - c * T.u[1:-1] - F
    norms = _x_norm_arr(ru, rv, eps, T.s, T.js)
    if per_point:
        return norms
    return float(np.max(norms)) if len(norms) else 0.0


# ---------------------------------------------------------------------------
# Translation and comparisons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranslationReport:
    lam: float
    a: float
    a_shifted: float
    distance: float
    window: tuple


def translation_experiment(g: GOdd, cfg: SolverConfig, lam: float, window=None) -> TranslationReport:
    """Solve with ``a`` and ``a exp(-lam)``; compare ``U_a(xi + lam)`` with
    ``U_{a'}(xi)`` in the X norm, sup over grid points of ``window``.

    ``lam`` must be a multiple of the grid step so the shift is exact.
    """
    h = cfg.h
    k = round(lam / h)
    if abs(k * h - lam) > 1e-9 * max(1.0, abs(lam)):
        raise ValueError(f"lam = {lam} is not a multiple of the grid step {h}")
    T1, _ = solve_fixed_point(g, cfg, auto_halve=False)
    cfg2 = replace(cfg, a=cfg.a * math.exp(-lam))
    T2, _ = solve_fixed_point(g, cfg2, auto_halve=False)
    if window is None:
        window = (max(0.0, -lam) + 2.0, min(cfg.Xi, cfg.Xi - lam) - 1.0)
    lo, hi = window
    idx = np.nonzero((T2.xi >= lo - 1e-12) & (T2.xi <= hi + 1e-12))[0]
    idx = idx[(idx + k >= 0) & (idx + k <= cfg.N)]
    du = T1.u[idx + k] - T2.u[idx]
    dv = T1.v[idx + k] - T2.v[idx]
    dist = float(np.max(_x_norm_arr(du, dv, cfg.eps, cfg.s, T1.js))) if len(idx) else 0.0
    return TranslationReport(lam, cfg.a, cfg2.a, dist, (lo, hi))


def exp_series_profile(g: GOdd, eps: float, L: int = 9):
    """Float coefficients ``C[l][q]`` of the unit-normalized exp-series at
    ``w = eps^2`` (exact arithmetic, then rounded)."""
    from .exp_series import GSpec, expand_exp
    from .algebra import eval_w

    w = Fraction(eps).limit_denominator(10**15) ** 2 if isinstance(eps, float) else Fraction(eps) ** 2
    spec = GSpec(dict(g.coeffs), max_m=max(L, 3))
    ser = expand_exp(spec, L)
    out = {}
    for c in ser.coeffs:
        out[c.l] = {q: float(eval_w(x, w)) for q, x in c.harmonics.items()}
    return out


def _series_state(C: dict, A: float, eps: float, xi: np.ndarray, nh: int):
    """``u = (1/eps) sum_l (eps A)^l C_l e^{-l xi}`` and ``u_xi`` on the grid."""
    u = np.zeros((len(xi), nh))
    v = np.zeros((len(xi), nh))
    for l, row in C.items():
        fac = (eps * A) ** l / eps
        ex = np.exp(-l * xi)
        for q, cq in row.items():
            if q % 2 and (q - 1) // 2 < nh:
                u[:, (q - 1) // 2] += fac * cq * ex
                v[:, (q - 1) // 2] += -l * fac * cq * ex
    return u, v


@dataclass(frozen=True)
class ComparisonReport:
    amplitude: float
    xi_star: float
    window: tuple
    max_rel: float
    rel: np.ndarray
    xi: np.ndarray


def compare_with_series(T: Trajectory, g: GOdd, L: int = 9, window=(5.0, 10.0),
                        xi_star: float | None = None) -> ComparisonReport:
    """Relative X-norm difference between the trajectory and the exp-series
    partial sum, after fitting the series amplitude on the leading mode at
    ``xi_star`` (default: middle of ``window``) by Newton's method."""
    eps = T.eps
    C = exp_series_profile(g, eps, L)
    nh = T.u.shape[1]
    lo, hi = window
    xi_star = (lo + hi) / 2 if xi_star is None else xi_star
    k = int(np.argmin(np.abs(T.xi - xi_star)))
    xs = T.xi[k]
    target = T.u[k, 0]

    def lead(A):
        val = der = 0.0
        for l, row in C.items():
            cq = row.get(1)
            if cq:
                t = eps ** (l - 1) * cq * math.exp(-l * xs)
                val += t * A**l
                der += l * t * A ** (l - 1)
        return val, der

    A = target * math.exp(xs)
    for _ in range(50):
        f, df = lead(A)
        step = (f - target) / df
        A -= step
        if abs(step) <= 1e-16 * abs(A):
            break
    m = (T.xi >= lo - 1e-12) & (T.xi <= hi + 1e-12)
    xi = T.xi[m]
    us, vs = _series_state(C, A, eps, xi, nh)
    num = _x_norm_arr(T.u[m] - us, T.v[m] - vs, eps, T.s, T.js)
    den = _x_norm_arr(us, vs, eps, T.s, T.js)
    rel = num / den
    return ComparisonReport(A, float(xs), (lo, hi), float(np.max(rel)), rel, xi)


# ---------------------------------------------------------------------------
# Product estimate and the period relation
# ---------------------------------------------------------------------------

def product_constant(s: float) -> float:
    """``2^(s+1) sqrt(1 + 2 zeta(2s))``."""
    from scipy.special import zeta

    if not s > 0.5:
        raise ValueError("s must exceed 1/2")
    return 2 ** (s + 1) * math.sqrt(1 + 2 * float(zeta(2 * s)))


def _hs_exp(c: np.ndarray, s: float) -> np.ndarray:
    """``H^s`` norm in the exponential basis for real cosine series (rows of ``c``)."""
    q = np.arange(c.shape[-1], dtype=float)
    # cos(q t) = (e^{iqt} + e^{-iqt})/2: two modes of size c_q/2 for q > 0
    mag2 = np.where(q == 0, c**2, 2 * (c / 2) ** 2)
    return np.sqrt(np.sum(mag2 * (1 + q * q) ** s, axis=-1))


@dataclass(frozen=True)
class ProductReport:
    s: float
    trials: int
    constant: float
    max_ratio: float
    holds: bool


def product_constant_check(s: float, trials: int, max_harmonic: int = 64, seed: int = 0) -> ProductReport:
    """``|uv|_s <= C(s) |u|_s |v|_s`` on random real trigonometric
    polynomials (cosine coefficients uniform in [-1, 1], harmonics <= 64)."""
    rng = np.random.default_rng(seed)
    const = product_constant(s)
    a = rng.uniform(-1, 1, size=(trials, max_harmonic + 1))
    b = rng.uniform(-1, 1, size=(trials, max_harmonic + 1))
    ab = kernels.cos_mul_batch(a, b)
    ratios = _hs_exp(ab, s) / (_hs_exp(a, s) * _hs_exp(b, s))
    worst = float(np.max(ratios)) if trials else 0.0
    return ProductReport(s, trials, const, worst, worst <= const)


def eps_of_period(T: float) -> float:
    """``eps = sqrt(1 - (2 pi/T)^2)`` for a period ``T > 2 pi``."""
    if not T > 2 * math.pi:
        raise NoBreatherRegime(f"period T = {T} <= 2 pi: no breather regime")
    return math.sqrt(1 - (2 * math.pi / T) ** 2)
