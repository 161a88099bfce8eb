"""Direct integration of Eulerian systems with torus and invariance diagnostics.

States are ordered (x_1, y_1, ..., x_n, y_n).  Backward time is handled by
integrating the negated field forward, so recorded times run from t0 towards
t1 whichever way the span points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .algebra.system import EulerianSystem, compile_rhs
from .errors import InputError, NumericFailure

METHODS = ("rk4", "dopri-adaptive")
CONVERGENCE_REL = 1e-3
MIN_TAIL_SAMPLES = 50
BLOWUP_RADIUS = 1e6


@dataclass(frozen=True)
class SimConfig:
    method: str = "dopri-adaptive"
    t_span: tuple = (0.0, 100.0)
    dt: float = 1e-3
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    record_stride: int = 1
    n_record: int | None = 4001  # adaptive only: samples on a uniform grid

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}; choose from {METHODS}")
        t0, t1 = (float(v) for v in self.t_span)
        if t0 == t1:
            raise InputError("t_span must have t1 != t0")
        if self.dt <= 0 or self.rel_tol <= 0 or self.abs_tol <= 0:
            raise InputError("dt and tolerances must be positive")
        if self.record_stride < 1:
            raise InputError("record_stride must be >= 1")
        object.__setattr__(self, "t_span", (t0, t1))

    @property
    def direction(self) -> int:
        return 1 if self.t_span[1] > self.t_span[0] else -1


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 2n)
    backward: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.states.shape[1] // 2

    @property
    def radii(self) -> np.ndarray:
        """rho_i(t), shape (len(times), n)."""
        return np.hypot(self.states[:, 0::2], self.states[:, 1::2])

    @property
    def angles(self) -> np.ndarray:
        return np.arctan2(self.states[:, 1::2], self.states[:, 0::2])

    def leaf_coordinates(self) -> np.ndarray:
        """C(t) = rho(t)/|rho(t)| (zero rows stay zero)."""
        r = self.radii
        nr = np.linalg.norm(r, axis=1, keepdims=True)
        return np.divide(r, nr, out=np.zeros_like(r), where=nr > 0)


def _rk4(rhs: Callable, x0: np.ndarray, t0: float, t1: float, dt: float, stride: int):
    n_steps = int(math.ceil(abs(t1 - t0) / dt - 1e-9))
    h = (t1 - t0) / n_steps
    ts, xs = [t0], [x0.copy()]
    x, t = x0.copy(), t0
    for i in range(1, n_steps + 1):
        k1 = rhs(t, x)
        k2 = rhs(t + h / 2, x + h / 2 * k1)
        k3 = rhs(t + h / 2, x + h / 2 * k2)
        k4 = rhs(t + h, x + h * k3)
        x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + i * h
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > BLOWUP_RADIUS:
            raise NumericFailure(f"rk4 blowup at t = {t!r}; last valid state {xs[-1].tolist()}")
        if i % stride == 0 or i == n_steps:
            ts.append(t)
            xs.append(x.copy())
    return np.array(ts), np.array(xs)


def integrate_rhs(rhs: Callable, x0: Sequence, cfg: SimConfig) -> Trajectory:
    """Integrate a plain callable rhs(t, x) according to cfg."""
    x0 = np.asarray(x0, dtype=float)
    t0, t1 = cfg.t_span
    sgn = cfg.direction
    # s runs forward over [0, |t1 - t0|]; t = t0 + sgn * s
    f = (lambda s, x: sgn * rhs(t0 + sgn * s, x))
    T = abs(t1 - t0)
    if cfg.method == "rk4":
        s, xs = _rk4(f, x0, 0.0, T, cfg.dt, cfg.record_stride)
    else:
        def blow(s, x):
            return BLOWUP_RADIUS - np.max(np.abs(x))
        blow.terminal = True
        t_eval = None if cfg.n_record is None else np.linspace(0.0, T, cfg.n_record)
        sol = solve_ivp(f, (0.0, T), x0, method="DOP853", rtol=cfg.rel_tol, atol=cfg.abs_tol,
                        t_eval=t_eval, events=blow)
        if sol.status < 0:
            last = sol.y[:, -1].tolist() if sol.y.size else x0.tolist()
            t_fail = float(t0 + sgn * sol.t[-1]) if sol.t.size else t0
            raise NumericFailure(f"integrator failed at t = {t_fail!r}: {sol.message}; "
                                 f"last valid state {last}")
        if sol.status == 1 or not np.all(np.isfinite(sol.y)):
            last = sol.y[:, -1].tolist() if sol.y.size else x0.tolist()
            raise NumericFailure(f"trajectory left the box |x| < {BLOWUP_RADIUS:g} at "
                                 f"t = {float(t0 + sgn * sol.t_events[0][0])!r}; last valid state {last}")
        s, xs = sol.t, sol.y.T
        if cfg.record_stride > 1:
            keep = np.r_[np.arange(0, len(s), cfg.record_stride)]
            if keep[-1] != len(s) - 1:
                keep = np.r_[keep, len(s) - 1]
            s, xs = s[keep], xs[keep]
    return Trajectory(t0 + sgn * s, xs, backward=sgn < 0,
                      meta={"method": cfg.method, "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
                            "dt": cfg.dt})


def integrate(sys: EulerianSystem, x0: Sequence, mu: Sequence = (), cfg: SimConfig | None = None) -> Trajectory:
    cfg = cfg or SimConfig()
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (2 * sys.n,):
        raise InputError(f"x0 must have length {2 * sys.n}")
    if len(mu) != sys.n_params:
        raise InputError(f"mu must have length {sys.n_params} ({', '.join(sys.params)})")
    traj = integrate_rhs(compile_rhs(sys, tuple(float(m) for m in mu)), x0, cfg)
    traj.meta["mu"] = [float(m) for m in mu]
    return traj


@dataclass(frozen=True)
class TorusEstimate:
    radii_mean: np.ndarray
    radii_osc: np.ndarray
    converged: bool
    tail_fraction: float
    radii_rms: np.ndarray | None = None
    # change of the window mean between the two halves of the tail
    drift: np.ndarray | None = None

    @property
    def settled(self) -> bool:
        """Tail mean stationary to CONVERGENCE_REL (deformed tori never pass the osc test)."""
        sup = self.radii_mean > 0
        return self.drift is not None and bool(np.all(self.drift[sup] < CONVERGENCE_REL * self.radii_mean[sup]))

    def to_dict(self) -> dict:
        return {"radii_mean": self.radii_mean.tolist(), "radii_osc": self.radii_osc.tolist(),
                "radii_rms": None if self.radii_rms is None else self.radii_rms.tolist(),
                "drift": None if self.drift is None else self.drift.tolist(), "settled": self.settled,
                "converged": self.converged, "tail_fraction": self.tail_fraction}


def estimate_torus(traj: Trajectory, tail: float = 0.2, rel: float = CONVERGENCE_REL) -> TorusEstimate:
    """Tail statistics of the pair radii.

    Converged means every supported pair has tail peak-to-peak oscillation
    below ``rel`` times its mean.
    """
    if not 0 < tail <= 1:
        raise InputError("tail must lie in (0, 1]")
    r = traj.radii
    m = int(round(tail * r.shape[0]))
    if m < MIN_TAIL_SAMPLES:
        raise InputError(f"tail window has {m} samples, need at least {MIN_TAIL_SAMPLES}")
    w = r[-m:]
    mean = w.mean(axis=0)
    osc = w.max(axis=0) - w.min(axis=0)
    rms = np.sqrt((w ** 2).mean(axis=0))
    drift = np.abs(w[: m // 2].mean(axis=0) - w[m // 2:].mean(axis=0))
    sup = mean > 0
    ok = bool(np.all(np.isfinite(w))) and bool(np.all(osc[sup] < rel * mean[sup]))
    return TorusEstimate(mean, osc, ok, m / r.shape[0], rms, drift)


@dataclass(frozen=True)
class InvarianceReport:
    leaf_defect: float
    zero_pair_max: float
    support: tuple
    C0: tuple

    def to_dict(self) -> dict:
        return {"leaf_defect": self.leaf_defect, "zero_pair_max": self.zero_pair_max,
                "support": list(self.support), "C0": list(self.C0)}


def invariance_diagnostics(traj: Trajectory, zero_rel: float = 1e-9) -> InvarianceReport:
    """Leaf defect max |c_j rho_i - c_i rho_j| over supported pairs and the
    largest radius reached by initially-zero pairs."""
    r = traj.radii
    r0 = r[0]
    tot = np.linalg.norm(r0)
    if tot == 0:
        return InvarianceReport(0.0, float(np.max(r)) if r.size else 0.0, (), tuple(r0))
    sup = np.flatnonzero(r0 >= zero_rel * tot)
    C = r0 / tot
    defect = 0.0
    for a, i in enumerate(sup):
        for j in sup[a + 1:]:
            defect = max(defect, float(np.max(np.abs(C[j] * r[:, i] - C[i] * r[:, j]))))
    off = np.setdiff1d(np.arange(r.shape[1]), sup)
    zmax = float(np.max(r[:, off])) if off.size else 0.0
    return InvarianceReport(defect, zmax, tuple(int(i) + 1 for i in sup), tuple(float(c) for c in C))


def step_halving_order(rhs: Callable, x0, T: float, dt: float) -> float:
    """Observed rk4 order from three step sizes dt, dt/2, dt/4."""
    x0 = np.asarray(x0, dtype=float)
    ends = []
    for h in (dt, dt / 2, dt / 4):
        _, xs = _rk4(rhs, x0, 0.0, T, h, 10 ** 9)
        ends.append(xs[-1])
    e1 = np.linalg.norm(ends[0] - ends[1])
    e2 = np.linalg.norm(ends[1] - ends[2])
    return math.log2(e1 / e2)


def radial_trajectory(rhs: Callable, r0: Sequence, cfg: SimConfig) -> Trajectory:
    """Integrate a radial system dr/dt = rhs(t, r); states store (r_i, 0) pairs."""
    traj = integrate_rhs(rhs, np.asarray(r0, dtype=float), cfg)
    st = np.zeros((traj.states.shape[0], 2 * traj.states.shape[1]))
    st[:, 0::2] = traj.states
    return Trajectory(traj.times, st, traj.backward, traj.meta)
