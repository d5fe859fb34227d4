"""Transport time-stepping, both constitutive laws, and the Picard scheme.

The scalar obeys d(theta)/dt = -dealias(u . grad theta), advanced with RK4.
The velocity comes either from the direct multiplier (``constitutive =
'direct'``) or from the kernel-split reconstruction

    u(t) = u0 + near * (theta(t) - theta0) - int_0^t far *. (theta u) dtau,

with the time integral accumulated by the trapezoid rule at step
boundaries.  In serfati mode the advecting field is additionally Leray-
projected: the reconstruction is divergence-free in the continuum, and the
projection removes the sampling residue so transport stays conservative
(the raw reconstruction is what ``velocity_serfati`` returns).

The approximation sequence follows the iteration the existence proof
uses: theta^(n+1) solves transport by the frozen previous velocity from
smoothed initial data S_(n+2) theta0, and u^(n+1) is rebuilt from the
reconstruction with theta^(n+1) and u^n in the far integrand.  Successive
gaps are measured by D_n(t) = ||u^n - u^(n-1)||_inf + ||theta^n -
theta^(n-1)||_(C^(r-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .dyadic import build_partition, smooth_truncate_initial
from .errors import ConfigurationError, DomainError, SimulationError
from .fields import SpectralField, dealias
from .grid import Grid2D
from .kernels import KernelSplit, build_split, convolve_far, convolve_near
from .multipliers import biot_savart_velocity, gradient, divergence
from .norms import WindowFamily, classical_holder_norm, uniformly_local_norm, zygmund_norm

CFL_NUMBER = 0.5


@dataclass
class SolverConfig:
    beta: float
    r: float = 2.5
    dt: float = 1e-2
    t_end: float = 0.5
    constitutive: str = "direct"
    n_side: int = 256
    box_length: float = 2.0 * np.pi
    record_norms: tuple = ("linf:theta", "l2:theta")
    c_existence: float = 1.0  # 0 disables the existence-time cap
    sample_every: int = 0  # 0: pick automatically (<= ~64 stored samples)
    oversample: int = 4

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if self.constitutive not in ("direct", "serfati"):
            raise ConfigurationError(f"unknown constitutive law {self.constitutive!r}")
        if self.dt <= 0 or self.t_end < 0:
            raise ConfigurationError("need dt > 0 and t_end >= 0")

    def grid(self) -> Grid2D:
        return Grid2D(self.n_side, self.box_length)


@dataclass
class SimState:
    t: float
    theta: SpectralField
    u: SpectralField
    far_accumulator: SpectralField | None = None
    far_prev: SpectralField | None = None
    far_time: float = 0.0
    theta0_linf: float = 0.0


@dataclass
class Trajectory:
    times: list = dc_field(default_factory=list)
    thetas: list = dc_field(default_factory=list)
    us: list = dc_field(default_factory=list)
    norms: list = dc_field(default_factory=list)  # (t, kind, value)
    diagnostics: dict = dc_field(default_factory=dict)
    final_state: "SimState" = None

    def norm_series(self, kind: str):
        ts = [t for t, k, _ in self.norms if k == kind]
        vs = [v for _, k, v in self.norms if k == kind]
        return np.asarray(ts), np.asarray(vs)


@dataclass
class IterationTrace:
    iterates: list = dc_field(default_factory=list)  # per n: dict with sampled fields
    decrements: dict = dc_field(default_factory=dict)  # n -> array of D_n at sample times
    sample_times: np.ndarray = None
    time_bound: float = 0.0
    norm_bound_curve: np.ndarray = None
    verdict: str = "ok"

    def contraction_ratios(self, at: int = -1) -> dict:
        """rho_n = D_(n+1)(T)/D_n(T) at the given sample index."""
        ns = sorted(self.decrements)
        out = {}
        for a, b in zip(ns, ns[1:]):
            d0 = self.decrements[a][at]
            if d0 > 0:
                out[a] = self.decrements[b][at] / d0
        return out


# -- basic operators -----------------------------------------------------------


def advection_tendency(theta: SpectralField, u: SpectralField) -> SpectralField:
    """-dealias(u . grad theta), products formed in physical space."""
    gt = dealias(gradient(theta))
    ud = dealias(u)
    adv = ud.values[0] * gt.values[0] + ud.values[1] * gt.values[1]
    return dealias(SpectralField.from_values(theta.grid, -adv))


def leray_project(u: SpectralField) -> SpectralField:
    k1, k2 = u.grid.wavenumbers()
    ksq = k1 * k1 + k2 * k2
    ksq[0, 0] = 1.0
    c = u.coefficients
    div = (k1 * c[0] + k2 * c[1]) / ksq
    out = np.stack([c[0] - k1 * div, c[1] - k2 * div])
    return SpectralField.from_coefficients(u.grid, out)


def cfl_dt(u: SpectralField, grid: Grid2D, dt: float) -> float:
    umax = u.linf()
    if umax == 0.0:
        return dt
    return min(dt, CFL_NUMBER * grid.spacing / umax)


def _check_blowup(theta: SpectralField, theta0_linf: float):
    v = theta.values
    if not np.all(np.isfinite(v)):
        raise SimulationError("NaN/Inf in the advected scalar")
    if theta0_linf > 0 and float(np.abs(v).max()) > 10.0 * theta0_linf:
        raise SimulationError(
            f"blow-up detected: ||theta||_inf exceeded 10x its initial value "
            f"({float(np.abs(v).max()):.3g} vs {theta0_linf:.3g})"
        )


def step_transport(state: SimState, u_frozen, dt: float, beta: float | None = None) -> SimState:
    """One RK4 step of the transport equation.

    ``u_frozen`` may be a vector ``SpectralField`` (held fixed over the
    step), a callable ``t -> SpectralField`` (frozen trajectory, Picard
    mode), or ``None`` for the self-consistent mode (velocity recomputed
    from theta at every stage via the constitutive law; requires ``beta``).
    """
    th = state.theta
    t = state.t

    if u_frozen is None:
        if beta is None:
            raise ConfigurationError("self-consistent stepping needs beta")
        u_of = lambda tt, thth: biot_savart_velocity(thth, beta)
    elif callable(u_frozen):
        u_of = lambda tt, thth: u_frozen(tt)
    else:
        u_of = lambda tt, thth: u_frozen

    k1 = advection_tendency(th, u_of(t, th))
    th2 = SpectralField.from_values(th.grid, th.values + 0.5 * dt * k1.values)
    k2 = advection_tendency(th2, u_of(t + 0.5 * dt, th2))
    th3 = SpectralField.from_values(th.grid, th.values + 0.5 * dt * k2.values)
    k3 = advection_tendency(th3, u_of(t + 0.5 * dt, th3))
    th4 = SpectralField.from_values(th.grid, th.values + dt * k3.values)
    k4 = advection_tendency(th4, u_of(t + dt, th4))

    new_vals = th.values + (dt / 6.0) * (k1.values + 2 * k2.values + 2 * k3.values + k4.values)
    new_theta = SpectralField.from_values(th.grid, new_vals)
    _check_blowup(new_theta, state.theta0_linf)
    u_new = u_of(t + dt, new_theta)
    return SimState(t=t + dt, theta=new_theta, u=u_new,
                    far_accumulator=state.far_accumulator, far_prev=state.far_prev,
                    far_time=state.far_time, theta0_linf=state.theta0_linf)


def velocity_serfati(state: SimState, u0: SpectralField, theta0: SpectralField,
                     split: KernelSplit) -> SpectralField:
    """Reconstructed velocity u0 + near*(theta - theta0) - far accumulator."""
    if state.far_accumulator is None:
        acc_vals = 0.0
    else:
        if abs(state.far_time - state.t) > 1e-9 * max(1.0, abs(state.t)):
            raise SimulationError(
                f"far accumulator at t={state.far_time} but state at t={state.t}"
            )
        acc_vals = state.far_accumulator.values
    near = convolve_near(split, state.theta - theta0)
    return SpectralField.from_values(u0.grid, u0.values + near.values - acc_vals)


# -- existence time -------------------------------------------------------------


def existence_time(u0_linf: float, theta0_cr: float, c: float = 1.0) -> float:
    """T = ln 2 / (c M) with M = 2c (||theta0||_C^r + ||u0||_inf)."""
    if u0_linf < 0 or theta0_cr < 0:
        raise DomainError("norms must be nonnegative")
    total = u0_linf + theta0_cr
    if total == 0.0 or c <= 0.0:
        return math.inf
    m = 2.0 * c * total
    return math.log(2.0) / (c * m)


# -- norm recording -------------------------------------------------------------


class NormRecorder:
    """Maps descriptor strings to norm evaluations on (theta, u)."""

    def __init__(self, descriptors, grid: Grid2D):
        self.descriptors = list(descriptors)
        self.family = build_partition(grid)
        self._windows = {}
        self.grid = grid

    def windows(self, scale: float = 1.0) -> WindowFamily:
        if scale not in self._windows:
            self._windows[scale] = WindowFamily.build(self.grid, scale)
        return self._windows[scale]

    def _eval(self, desc: str, theta: SpectralField, u: SpectralField) -> float:
        parts = desc.split(":")
        kind, target = parts[0], parts[1]
        f = theta if target == "theta" else u
        if kind == "linf":
            return f.linf()
        if kind == "l2":
            return f.l2()
        if kind == "mean":
            return f.mean()
        if kind == "cr":
            return zygmund_norm(f, float(parts[2]), self.family).value
        if kind == "holder":
            return classical_holder_norm(f, float(parts[2])).value
        if kind == "ctilde1":
            return classical_holder_norm(f, 1.0).value
        if kind == "w1inf":
            g = gradient(f) if f.components == 1 else None
            if g is None:
                raise ConfigurationError("w1inf applies to scalar fields")
            return f.linf() + g.linf()
        if kind == "hsul":
            return uniformly_local_norm(f, float(parts[2]), self.windows(), "Hs_ul").value
        if kind == "hsul_hom":
            return uniformly_local_norm(f, float(parts[2]), self.windows(), "Hs_ul",
                                        homogeneous=True).value
        if kind == "div":
            return divergence(f).linf()
        raise ConfigurationError(f"unknown norm descriptor {desc!r}")

    def record(self, out: list, t: float, theta: SpectralField, u: SpectralField):
        for desc in self.descriptors:
            out.append((t, desc, self._eval(desc, theta, u)))


# -- simulation ------------------------------------------------------------------


def simulate(config: SolverConfig, theta0: SpectralField, u0: SpectralField | None = None,
             split: KernelSplit | None = None) -> Trajectory:
    """Advance the system to min(t_end, existence-time estimate).

    Records the requested norms at the sample cadence and returns the full
    trajectory (fields stored at sample times).  Passing a kernel split
    with the direct law keeps the reconstruction accumulator up to date
    along the run, so ``velocity_serfati`` can be evaluated on the final
    state for identity-consistency measurements.
    """
    grid = theta0.grid
    if u0 is None:
        u0 = biot_savart_velocity(theta0, config.beta)
    if config.constitutive == "direct":
        gap = (u0 - biot_savart_velocity(theta0, config.beta)).linf()
        if gap > 1e-6 * max(u0.linf(), 1e-300):
            raise ConfigurationError(
                f"u0 inconsistent with theta0 under the direct law (rel gap {gap:.2e})"
            )
    if config.constitutive == "serfati" and split is None:
        split = build_split(grid, config.beta, oversample=config.oversample)

    dt = cfl_dt(u0, grid, config.dt)
    t_stop = config.t_end
    if config.c_existence > 0:
        t_reach = existence_time(u0.linf(), zygmund_norm(theta0, config.r).value,
                                 config.c_existence)
        t_stop = min(t_stop, t_reach)
    n_steps = max(1, int(round(t_stop / dt)))
    dt = t_stop / n_steps
    sample_every = config.sample_every or max(1, n_steps // 64)

    recorder = NormRecorder(config.record_norms, grid)
    traj = Trajectory()

    state = SimState(t=0.0, theta=theta0, u=u0, theta0_linf=theta0.linf())
    if split is not None:
        state.far_accumulator = SpectralField.zeros(grid, components=2)
        state.far_prev = convolve_far(split, theta0, u0)

    def store(state: SimState):
        traj.times.append(state.t)
        traj.thetas.append(state.theta)
        traj.us.append(state.u)
        recorder.record(traj.norms, state.t, state.theta, state.u)

    store(state)
    l2_0 = theta0.l2()

    for k in range(n_steps):
        if config.constitutive == "direct":
            new = step_transport(state, None, dt, beta=config.beta)
            if split is not None:
                integ = convolve_far(split, new.theta, new.u)
                new.far_accumulator = SpectralField.from_values(
                    grid, state.far_accumulator.values
                    + 0.5 * dt * (state.far_prev.values + integ.values))
                new.far_prev = integ
                new.far_time = new.t
            state = new
        else:
            u_adv = leray_project(state.u)
            new = step_transport(state, u_adv, dt)
            # trapezoid leg with predictor/corrector for the new-boundary integrand
            base = state.far_accumulator.values + 0.5 * dt * state.far_prev.values
            integ_pred = convolve_far(split, new.theta, u_adv)
            new.far_accumulator = SpectralField.from_values(
                grid, base + 0.5 * dt * integ_pred.values)
            new.far_time = new.t
            u_star = velocity_serfati(new, u0, theta0, split)
            integ = convolve_far(split, new.theta, u_star)
            new.far_accumulator = SpectralField.from_values(
                grid, base + 0.5 * dt * integ.values)
            new.far_prev = integ
            # the reconstruction is divergence-free in the continuum; project
            # away the sampling residue so the state velocity stays solenoidal
            new.u = leray_project(velocity_serfati(new, u0, theta0, split))
            state = new
        if (k + 1) % sample_every == 0 or k == n_steps - 1:
            store(state)

    traj.diagnostics = {
        "dt": dt,
        "n_steps": n_steps,
        "t_final": state.t,
        "l2_drift": abs(state.theta.l2() - l2_0) / max(l2_0, 1e-300),
        "linf_growth": state.theta.linf() / max(state.theta0_linf, 1e-300),
        "div_u_final": divergence(state.u).linf(),
    }
    traj.final_state = state
    return traj


# -- flow map --------------------------------------------------------------------


def _interp_velocity_time(times: np.ndarray, u_vals: np.ndarray, t: float) -> np.ndarray:
    """Catmull-Rom interpolation in time of stacked velocity samples."""
    n = len(times)
    if n == 1:
        return u_vals[0]
    dt = times[1] - times[0]
    s = (t - times[0]) / dt
    k = int(np.clip(np.floor(s), 0, n - 2))
    x = s - k
    i0, i1, i2, i3 = max(k - 1, 0), k, min(k + 1, n - 1), min(k + 2, n - 1)
    p0, p1, p2, p3 = u_vals[i0], u_vals[i1], u_vals[i2], u_vals[i3]
    return 0.5 * ((2 * p1) + (-p0 + p2) * x + (2 * p0 - 5 * p1 + 4 * p2 - p3) * x**2
                  + (-p0 + 3 * p1 - 3 * p2 + p3) * x**3)


def _bilinear_sample(vals: np.ndarray, pts: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Periodic bilinear interpolation of (2, n, n) values at points (m, 2)."""
    h = grid.spacing
    n = grid.n_side
    q = pts / h
    i0 = np.floor(q).astype(int)
    frac = q - i0
    i0 %= n
    i1 = (i0 + 1) % n
    fx, fy = frac[:, 0], frac[:, 1]
    out = np.empty_like(pts)
    for c in range(2):
        v = vals[c]
        out[:, c] = ((1 - fx) * (1 - fy) * v[i0[:, 0], i0[:, 1]]
                     + fx * (1 - fy) * v[i1[:, 0], i0[:, 1]]
                     + (1 - fx) * fy * v[i0[:, 0], i1[:, 1]]
                     + fx * fy * v[i1[:, 0], i1[:, 1]])
    return out


def flow_map(u_trajectory, particles, dt: float, t_end: float | None = None):
    """Integrate particle paths dX/dt = u(t, X) with RK4.

    ``u_trajectory`` is either a ``Trajectory`` or a pair (times, fields).
    Velocity is bilinear in space and Catmull-Rom (cubic) in time.
    Returns an array of positions (n_times, n_particles, 2) including t=0.
    """
    if isinstance(u_trajectory, Trajectory):
        times = np.asarray(u_trajectory.times)
        fields = u_trajectory.us
    else:
        times, fields = u_trajectory
        times = np.asarray(times)
    grid = fields[0].grid
    u_vals = np.stack([f.values for f in fields])
    t_end = times[-1] if t_end is None else t_end

    pts = np.asarray(particles, dtype=np.float64).copy()
    L = grid.box_length
    out = [pts.copy()]
    n_steps = max(1, int(round(t_end / dt)))
    dt = t_end / n_steps
    t = 0.0

    def vel(tq, p):
        uv = _interp_velocity_time(times, u_vals, min(tq, times[-1]))
        return _bilinear_sample(uv, p % L, grid)

    for _ in range(n_steps):
        k1 = vel(t, pts)
        k2 = vel(t + dt / 2, pts + dt / 2 * k1)
        k3 = vel(t + dt / 2, pts + dt / 2 * k2)
        k4 = vel(t + dt, pts + dt * k3)
        pts = pts + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(pts)):
            raise SimulationError("particle position became NaN/Inf")
        t += dt
        out.append(pts.copy())
    return np.stack(out)


def polygon_area(points: np.ndarray) -> float:
    """Shoelace area of a polygon given as (m, 2) vertices."""
    x, y = points[:, 0], points[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


# -- Picard iteration ------------------------------------------------------------


def picard_iterate(config: SolverConfig, theta0: SpectralField,
                   u0: SpectralField | None = None, n_max: int = 8,
                   split: KernelSplit | None = None, n_samples: int = 8) -> IterationTrace:
    """Build the approximating sequence and record the decrements D_n.

    theta^1 = S_2 theta0 and u^1 = S_2 u0, both frozen in time; for n >= 1,
    theta^(n+1) solves transport by the frozen u^n from initial data
    S_(n+2) theta0, and u^(n+1) comes from the reconstruction recursion with
    the far integrand theta^(n+1) u^n.
    """
    if n_max < 2:
        raise ConfigurationError(f"need n_max >= 2, got {n_max}")
    grid = theta0.grid
    if u0 is None:
        u0 = biot_savart_velocity(theta0, config.beta)
    if split is None:
        split = build_split(grid, config.beta, oversample=config.oversample)
    family = build_partition(grid)

    theta0_cr = zygmund_norm(theta0, config.r, family).value
    u0_linf = u0.linf()
    t_bound = existence_time(u0_linf, theta0_cr, config.c_existence or 1.0)
    t_end = config.t_end
    dt = cfl_dt(u0, grid, config.dt)
    n_steps = max(2, int(round(t_end / dt)))
    dt = t_end / n_steps
    step_times = np.arange(n_steps + 1) * dt
    sample_idx = np.unique(np.linspace(0, n_steps, n_samples).round().astype(int))
    sample_times = step_times[sample_idx]

    def frozen_interp(fields):
        vals = np.stack([f.values for f in fields])
        return lambda t: SpectralField.from_values(
            grid, _interp_velocity_time(step_times, vals, min(t, t_end)))

    # n = 1: time-frozen smoothed data
    th_prev = [smooth_truncate_initial(theta0, 2, family)] * (n_steps + 1)
    u_prev = [smooth_truncate_initial(u0, 2, family)] * (n_steps + 1)

    trace = IterationTrace(sample_times=sample_times, time_bound=t_bound)
    c = config.c_existence or 1.0
    denom = 1.0 - c * sample_times * (u0_linf + theta0_cr)
    with np.errstate(divide="ignore"):
        curve = np.where(denom > 0, c * (u0_linf + theta0_cr) / denom, np.inf)
    trace.norm_bound_curve = curve
    trace.iterates.append({"n": 1,
                           "theta": [th_prev[i] for i in sample_idx],
                           "u": [u_prev[i] for i in sample_idx]})

    increase_streak = 0
    prev_dn_final = None
    for n in range(1, n_max):
        u_interp = frozen_interp(u_prev)
        th_new = [smooth_truncate_initial(theta0, n + 2, family)]
        state = SimState(t=0.0, theta=th_new[0], u=u_prev[0], theta0_linf=theta0.linf())
        for k in range(n_steps):
            state = step_transport(state, u_interp, dt)
            th_new.append(state.theta)

        u_new = [smooth_truncate_initial(u0, n + 2, family)]
        th_init = th_new[0]
        acc = SpectralField.zeros(grid, components=2)
        integ_prev = convolve_far(split, th_new[0], u_prev[0])
        for k in range(1, n_steps + 1):
            integ = convolve_far(split, th_new[k], u_prev[k])
            acc = SpectralField.from_values(
                grid, acc.values + 0.5 * dt * (integ_prev.values + integ.values))
            integ_prev = integ
            near = convolve_near(split, th_new[k] - th_init)
            u_new.append(SpectralField.from_values(
                grid, u_new[0].values + near.values - acc.values))

        dn = np.empty(len(sample_idx))
        for m, idx in enumerate(sample_idx):
            v = (u_new[idx] - u_prev[idx]).linf()
            eta = zygmund_norm(th_new[idx] - th_prev[idx], config.r - 1.0, family).value
            dn[m] = v + eta
        trace.decrements[n + 1] = dn
        trace.iterates.append({"n": n + 1,
                               "theta": [th_new[i] for i in sample_idx],
                               "u": [u_new[i] for i in sample_idx]})

        if prev_dn_final is not None and dn[-1] >= prev_dn_final:
            increase_streak += 1
            if increase_streak >= 3:
                trace.verdict = "warning"
        else:
            increase_streak = 0
        prev_dn_final = dn[-1]

        th_prev, u_prev = th_new, u_new

    return trace
