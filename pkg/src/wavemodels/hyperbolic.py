"""Saint-Venant dynamics, Riemann invariants, characteristics, wavebreaking.

The 1D system is evolved pseudospectrally in the non-conservative velocity
form (flux mass equation, transport velocity equation) until gradient
blow-up; there is no shock capturing past the breaking time.  Simple waves
reduce to a scalar transport equation with straight-line characteristics,
solved exactly by foot-point inversion, and the breaking time has the
closed form T* = -2 / (3 inf u0').
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BreakingError, CavitationError, RiemannOrderingError
from .physics import PhysicalParams
from .spectral import Grid, SpectralField, derivative
from .stepping import DtControl, HaltEvent, Trajectory, resolve_substeps, snapshot_times

__all__ = [
    "SVState",
    "RiemannPair",
    "CharacteristicFan",
    "sv_eigenvalues",
    "to_riemann",
    "from_riemann",
    "simple_wave_velocity",
    "simple_wave_elevation",
    "breaking_time",
    "hopf_characteristic_solve",
    "characteristic_fan",
    "sv_evolve",
]


@dataclass
class SVState:
    """Surface deformation and horizontal velocity at one time."""

    zeta: SpectralField
    u: SpectralField
    time: float = 0.0

    def __post_init__(self):
        if not self.zeta.same_grid(self.u):
            raise ValueError("zeta and u must live on the same grid")

    @property
    def grid(self) -> Grid:
        return self.zeta.grid

    def depth(self, p: PhysicalParams) -> np.ndarray:
        return p.H + self.zeta.values


@dataclass
class RiemannPair:
    """The transported quantities r_pm = u +- 2 sqrt(g (H + zeta))."""

    r_plus: SpectralField
    r_minus: SpectralField


@dataclass(frozen=True)
class CharacteristicFan:
    """Straight-line characteristics of the scalar transport equation."""

    foot_points: np.ndarray
    speeds: np.ndarray
    breaking_time: float

    def positions(self, t: float) -> np.ndarray:
        return self.foot_points + self.speeds * t


def sv_eigenvalues(zeta, u, p: PhysicalParams, direction=None) -> np.ndarray:
    """Characteristic speeds {u.d, u.d +- sqrt(g h)} at one node.

    ``u`` is a scalar in 1D or a 2-vector in 2D; ``direction`` (2D only)
    is normalized internally.  Raises CavitationError when h = H + zeta
    is not positive.
    """
    h = p.H + float(zeta)
    if h <= 0.0:
        raise CavitationError(f"hyperbolicity lost: depth H + zeta = {h} <= 0")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if direction is None:
        if u.size != 1:
            raise ValueError("direction is required for a 2D velocity")
        u_n = float(u[0])
    else:
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        u_n = float(np.dot(u, d))
    s = math.sqrt(p.g * h)
    return np.array([u_n - s, u_n, u_n + s])


def _check_non_cavitating(depth: np.ndarray):
    dmin = float(np.min(depth))
    if dmin <= 0.0:
        raise CavitationError(f"non-cavitation violated: min depth {dmin} <= 0")


def to_riemann(state: SVState, p: PhysicalParams) -> RiemannPair:
    """r_pm = u +- 2 sqrt(g h); requires a non-cavitating state."""
    h = state.depth(p)
    _check_non_cavitating(h)
    s = 2.0 * np.sqrt(p.g * h)
    grid = state.grid
    return RiemannPair(
        r_plus=SpectralField(grid, state.u.values + s),
        r_minus=SpectralField(grid, state.u.values - s),
    )


def from_riemann(r: RiemannPair, p: PhysicalParams, time: float = 0.0) -> SVState:
    """Invert the Riemann map: u = (r+ + r-)/2, h = (r+ - r-)^2 / (16 g)."""
    gap = r.r_plus.values - r.r_minus.values
    bad = gap <= 0.0
    if np.any(bad):
        raise RiemannOrderingError(
            f"r_plus <= r_minus at {int(np.sum(bad))} node(s); no water state exists"
        )
    u = 0.5 * (r.r_plus.values + r.r_minus.values)
    h = gap**2 / (16.0 * p.g)
    grid = r.r_plus.grid
    return SVState(
        zeta=SpectralField(grid, h - p.H), u=SpectralField(grid, u), time=time
    )


def simple_wave_velocity(zeta, p: PhysicalParams):
    """Velocity pairing u = 2 sqrt(g(H+zeta)) - 2 sqrt(gH) that freezes r-."""
    if isinstance(zeta, SpectralField):
        return SpectralField(zeta.grid, simple_wave_velocity(zeta.values, p))
    return 2.0 * (np.sqrt(p.g * (p.H + np.asarray(zeta))) - math.sqrt(p.g * p.H))


def simple_wave_elevation(u, p: PhysicalParams):
    """Elevation zeta = (sqrt(gH) u + u^2/4) / g matching a simple wave."""
    if isinstance(u, SpectralField):
        return SpectralField(u.grid, simple_wave_elevation(u.values, p))
    u = np.asarray(u)
    return (p.c0 * u + 0.25 * u**2) / p.g


def _golden_minimize(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of f on [a, b]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(200):  # interval shrinks by 0.618 per step
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


def _profile_derivative(u0, grid: Grid | None, u0_prime):
    """Return (derivative callable, scan points) for a velocity profile.

    SpectralField profiles use the spectral derivative with trigonometric
    interpolation between nodes.  Callables use the supplied ``u0_prime``
    or central differences, scanned over the grid extent.
    """
    if isinstance(u0, SpectralField):
        du = derivative(u0, axis=0, order=1)
        xs = u0.grid.axis_coordinates(0)
        return (lambda x: du.evaluate(x)), xs
    if grid is None:
        raise ValueError("a grid is required to scan a callable profile")
    xs = grid.axis_coordinates(0)
    if u0_prime is not None:
        return (lambda x: np.asarray(u0_prime(np.asarray(x, dtype=float)))), xs
    h = 1e-6 * max(grid.spacing[0], 1.0)

    def fd(x):
        x = np.asarray(x, dtype=float)
        return (np.asarray(u0(x + h)) - np.asarray(u0(x - h))) / (2.0 * h)

    return fd, xs


def breaking_time(u0, grid: Grid | None = None, u0_prime=None) -> float:
    """First crossing time of the characteristics seeded by u0.

    Returns -2 / (3 m) with m = inf u0', or +inf when m >= 0.  The infimum
    is located by a grid scan refined with golden-section minimization;
    ties go to the smallest x.
    """
    dfn, xs = _profile_derivative(u0, grid, u0_prime)
    dvals = np.asarray(dfn(xs), dtype=float)
    i = int(np.argmin(dvals))  # first occurrence wins ties
    dx = xs[1] - xs[0]
    xa, xb = xs[i] - dx, xs[i] + dx
    _, m = _golden_minimize(lambda x: float(dfn(np.array([x]))[0]), xa, xb, 1e-12 * dx)
    m = min(m, float(dvals[i]))
    if m >= 0.0:
        return math.inf
    return -2.0 / (3.0 * m)


def characteristic_fan(u0, p: PhysicalParams, foot_points, grid: Grid | None = None,
                       u0_prime=None) -> CharacteristicFan:
    """Bundle foot points, speeds c0 + (3/2) u0, and the breaking time."""
    foot_points = np.asarray(foot_points, dtype=float)
    if isinstance(u0, SpectralField):
        uvals = u0.evaluate(foot_points)
    else:
        uvals = np.asarray(u0(foot_points), dtype=float)
    return CharacteristicFan(
        foot_points=foot_points,
        speeds=p.c0 + 1.5 * uvals,
        breaking_time=breaking_time(u0, grid=grid, u0_prime=u0_prime),
    )


def hopf_characteristic_solve(
    u0,
    p: PhysicalParams,
    t: float,
    query_points,
    grid: Grid | None = None,
    u0_prime=None,
) -> np.ndarray:
    """Solve the transport equation d_t u + (c0 + 3u/2) d_x u = 0 exactly.

    For each query x the unique foot point x0 with
    x = x0 + (c0 + 1.5 u0(x0)) t is found by bisection of the monotone
    foot-point map, and u(t, x) = u0(x0) is returned.

    Raises BreakingError when t is at or past the crossing time, or when
    the foot-point map is found non-monotone on a dense scan.
    """
    query = np.atleast_1d(np.asarray(query_points, dtype=float))
    if isinstance(u0, SpectralField):
        ueval = u0.evaluate
        length_scale = u0.grid.length[0]
    else:
        if grid is None:
            raise ValueError("a grid is required with a callable profile")
        ueval = lambda x: np.asarray(u0(np.asarray(x, dtype=float)), dtype=float)
        length_scale = grid.length[0]

    t_star = breaking_time(u0, grid=grid, u0_prime=u0_prime)
    if t >= t_star:
        raise BreakingError(
            f"characteristics cross at T* = {t_star}; requested t = {t}"
        )

    # Bracket all foot points, then bisect the monotone map simultaneously.
    # Two probe passes so the sampled velocity range covers the feet even
    # when they sit far behind the queries (non-periodic profiles).
    lo_q, hi_q = float(np.min(query)), float(np.max(query))
    pad = max(1e-9 * length_scale, 1e-12)
    window = (lo_q - p.c0 * t - 2.0 * length_scale, hi_q + length_scale)
    for _ in range(2):
        probe = ueval(np.linspace(window[0], window[1], 4096))
        smin = p.c0 + 1.5 * float(np.min(probe))
        smax = p.c0 + 1.5 * float(np.max(probe))
        lo = query - smax * t - pad
        hi = query - smin * t + pad
        window = (
            min(window[0], float(np.min(lo)) - length_scale),
            max(window[1], float(np.max(hi)) + length_scale),
        )

    scan = np.linspace(float(np.min(lo)), float(np.max(hi)), 4096)
    phi_scan = scan + (p.c0 + 1.5 * ueval(scan)) * t
    if np.any(np.diff(phi_scan) <= 0.0):
        raise BreakingError("foot-point map is not monotone: breaking detected")

    tol = 1e-10 * length_scale
    while float(np.max(hi - lo)) > tol:
        mid = 0.5 * (lo + hi)
        phi = mid + (p.c0 + 1.5 * ueval(mid)) * t - query
        neg = phi < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    feet = 0.5 * (lo + hi)
    out = np.asarray(ueval(feet), dtype=float)
    return out if np.ndim(query_points) else float(out[0])


def _sv_rhs(z, u, p, ik, mask, fft, ifft):
    h = p.H + z
    dz = -ifft(ik * (mask * fft(h * u))).real
    ux = ifft(ik * fft(u)).real
    du = -p.g * ifft(ik * fft(z)).real - ifft(mask * fft(u * ux)).real
    return dz, du


def sv_evolve(
    state: SVState,
    p: PhysicalParams,
    t_end: float,
    dt_control: DtControl | None = None,
    n_out: int = 10,
    blowup_threshold: float | None = None,
) -> Trajectory:
    """Pseudospectral method-of-lines run of the 1D system until t_end.

    Mass flux form d_t zeta = -d_x(h u) and transport velocity form
    d_t u = -g d_x zeta - u d_x u, quadratic products dealiased, classical
    four-stage Runge-Kutta in time.  The run halts with a breaking flag
    once max|d_x u| exceeds the blow-up threshold (default
    200 * (initial max|d_x u| + 1)); cavitation raises, with the partial
    trajectory attached to the exception.
    """
    grid = state.grid
    if grid.dim != 1:
        raise ValueError("time stepping is 1D only; 2D exposes eigenvalues only")
    ctrl = dt_control or DtControl()
    z = state.zeta.values.copy()
    u = state.u.values.copy()
    _check_non_cavitating(p.H + z)

    xi = grid.wavenumbers(0)
    ik = 1j * xi
    ik[grid.nodes[0] // 2] = 0.0  # odd-derivative Nyquist convention
    mask = grid.dealias_mask()
    fft, ifft = np.fft.fft, np.fft.ifft
    xs = grid.axis_coordinates(0)
    dx = grid.spacing[0]

    def grad_max(u_arr):
        ux = ifft(ik * fft(u_arr)).real
        j = int(np.argmax(np.abs(ux)))
        return float(np.abs(ux[j])), float(xs[j])

    g0, _ = grad_max(u)
    threshold = blowup_threshold if blowup_threshold is not None else 200.0 * (g0 + 1.0)
    # Sub-threshold crossing times; each extrapolates to the breaking time
    # via t_cross + (2/3)/level, the compression law of a gradient blow-up.
    levels = [threshold / 8.0, threshold / 4.0, threshold / 2.0, threshold]
    crossings: dict[float, float] = {}

    traj = Trajectory()
    traj.states.append(
        SVState(SpectralField(grid, z.copy()), SpectralField(grid, u.copy()), state.time)
    )

    times = snapshot_times(t_end, n_out)
    t_now = 0.0
    for t_target in times[1:]:
        vmax = float(np.max(np.abs(u) + np.sqrt(p.g * (p.H + z))))
        dt_raw = min(ctrl.cfl * dx / vmax, ctrl.dt_max)
        if ctrl.dt is not None:
            if ctrl.dt > dt_raw:
                raise ValueError(
                    f"explicit dt {ctrl.dt} violates the CFL bound {dt_raw}"
                )
            dt_raw = ctrl.dt
        m, dt = resolve_substeps(t_target - t_now, dt_raw)
        for _ in range(m):
            k1z, k1u = _sv_rhs(z, u, p, ik, mask, fft, ifft)
            k2z, k2u = _sv_rhs(z + 0.5 * dt * k1z, u + 0.5 * dt * k1u, p, ik, mask, fft, ifft)
            k3z, k3u = _sv_rhs(z + 0.5 * dt * k2z, u + 0.5 * dt * k2u, p, ik, mask, fft, ifft)
            k4z, k4u = _sv_rhs(z + dt * k3z, u + dt * k3u, p, ik, mask, fft, ifft)
            z = z + (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
            u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            t_now += dt

            depth_min = float(np.min(p.H + z))
            if depth_min <= 0.0:
                gmax, loc = grad_max(u)
                traj.halt = HaltEvent("cavitation", state.time + t_now,
                                      float(xs[int(np.argmin(p.H + z))]), gmax)
                raise CavitationError(
                    f"cavitation at t = {state.time + t_now}", partial_trajectory=traj
                )
            gmax, loc = grad_max(u)
            for level in levels:
                if level not in crossings and gmax >= level > g0:
                    crossings[level] = state.time + t_now
            if gmax > threshold:
                traj.states.append(
                    SVState(SpectralField(grid, z), SpectralField(grid, u),
                            state.time + t_now)
                )
                estimates = sorted(
                    t_c + 2.0 / (3.0 * level) for level, t_c in crossings.items()
                ) or [state.time + t_now + 2.0 / (3.0 * gmax)]
                traj.halt = HaltEvent(
                    reason="breaking",
                    time=state.time + t_now,
                    location=loc,
                    max_gradient=gmax,
                    breaking_time_estimate=estimates[len(estimates) // 2],
                )
                return traj
        traj.states.append(
            SVState(SpectralField(grid, z.copy()), SpectralField(grid, u.copy()),
                    state.time + t_now)
        )
    return traj
