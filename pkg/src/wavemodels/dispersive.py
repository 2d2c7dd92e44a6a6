"""Dispersive model family: four-parameter Boussinesq systems, the
unidirectional cubic-dispersion equation (KdV), and both full-dispersion
scalar equations.

The four-parameter family carries the constraint a + b + c + d = 1/3.  Its
linear dispersion relation

    omega(k)^2 = g H k^2 (1 - a(Hk)^2)(1 - c(Hk)^2)
                 / ((1 + b(Hk)^2)(1 + d(Hk)^2))

turns negative at large wavenumbers for ill-chosen parameters, which makes
the initial-value problem strongly ill-posed; ``classify_abcd`` screens for
this before any time stepping.  Scalar models are advanced with an
integrating-factor scheme: the linear part is exponentiated exactly
mode-wise, so only the nonlinear term constrains the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CavitationError,
    IllPosedError,
    SingularSymbolError,
    StepSizeUnderflowError,
)
from .physics import PhysicalParams
from .spectral import Grid, SpectralField
from .stepping import DtControl, Trajectory, resolve_substeps, snapshot_times

__all__ = [
    "AbcdParams",
    "BoussinesqState",
    "ScalarWaveState",
    "WellPosednessVerdict",
    "SCALAR_MODELS",
    "abcd_symbol",
    "classify_abcd",
    "abcd_evolve",
    "abcd_linear_evolve",
    "scalar_evolve",
    "whitham_multiplier_values",
]

SCALAR_MODELS = ("kdv", "whitham", "whitham2")

_CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class AbcdParams:
    """Dimensionless coefficients of the four-parameter Boussinesq family."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        total = self.a + self.b + self.c + self.d
        if abs(total - 1.0 / 3.0) > _CONSTRAINT_TOL:
            raise ValueError(
                f"a+b+c+d must equal 1/3 (zero surface tension); got {total!r}"
            )


@dataclass
class BoussinesqState:
    zeta: SpectralField
    u: SpectralField
    time: float = 0.0

    def __post_init__(self):
        if not self.zeta.same_grid(self.u):
            raise ValueError("zeta and u must live on the same grid")

    @property
    def grid(self) -> Grid:
        return self.zeta.grid


@dataclass
class ScalarWaveState:
    zeta: SpectralField
    time: float = 0.0
    model: str = "kdv"

    def __post_init__(self):
        if self.model not in SCALAR_MODELS:
            raise ValueError(f"model must be one of {SCALAR_MODELS}, got {self.model!r}")

    @property
    def grid(self) -> Grid:
        return self.zeta.grid


@dataclass(frozen=True)
class WellPosednessVerdict:
    verdict: str  # "well_posed" or "ill_posed"
    witness_wavenumber: float | None
    omega_squared_min: float


def _abcd_omega_squared(k, params: AbcdParams, p: PhysicalParams):
    """Vectorized omega^2; may contain inf/nan at denominator zeros."""
    k = np.asarray(k, dtype=float)
    mu2 = (p.H * k) ** 2
    num = p.g * p.H * k**2 * (1.0 - params.a * mu2) * (1.0 - params.c * mu2)
    den = (1.0 + params.b * mu2) * (1.0 + params.d * mu2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


def abcd_symbol(k: float, params: AbcdParams, p: PhysicalParams) -> float:
    """omega^2(k) of the linearized four-parameter system at wavenumber k."""
    mu2 = (p.H * k) ** 2
    den = (1.0 + params.b * mu2) * (1.0 + params.d * mu2)
    if den == 0.0:
        raise SingularSymbolError(f"dispersion denominator vanishes at k = {k!r}")
    return float(
        p.g * p.H * k**2 * (1.0 - params.a * mu2) * (1.0 - params.c * mu2) / den
    )


def _asymptotic_sign(params: AbcdParams) -> float:
    """Sign of omega^2 as k -> infinity, by leading-order bookkeeping."""
    if params.a != 0.0 and params.c != 0.0:
        num_lead = params.a * params.c
    elif params.a != 0.0:
        num_lead = -params.a
    elif params.c != 0.0:
        num_lead = -params.c
    else:
        num_lead = 1.0
    # denominator leading coefficient is positive whenever b, d >= 0
    return math.copysign(1.0, num_lead)


def classify_abcd(
    params: AbcdParams,
    p: PhysicalParams,
    k_min: float | None = None,
    k_max: float | None = None,
    samples: int = 4001,
) -> WellPosednessVerdict:
    """Screen the parameters with a dense logarithmic modal scan.

    Ill-posed verdicts carry the smallest scanned wavenumber with
    omega^2 < 0 as witness (so the witness sits just past the sign
    change), or None when the symbol is singular but nowhere negative.
    """
    k_lo = (1e-3 / p.H) if k_min is None else k_min
    k_hi = (1e3 / p.H) if k_max is None else k_max
    ks = np.geomspace(k_lo, k_hi, samples)
    w2 = _abcd_omega_squared(ks, params, p)
    finite = np.isfinite(w2)
    w2_min = float(np.min(w2[finite])) if np.any(finite) else math.inf

    def first_negative():
        neg = finite & (w2 < 0.0)
        if np.any(neg):
            return float(ks[int(np.argmax(neg))])
        return None

    if params.b < 0.0 or params.d < 0.0:
        return WellPosednessVerdict("ill_posed", first_negative(), w2_min)

    witness = first_negative()
    if witness is not None:
        return WellPosednessVerdict("ill_posed", witness, w2_min)

    if _asymptotic_sign(params) < 0.0:
        # Sign change beyond the scan range: extend geometrically.
        k_prev, k_cur = ks[-1], 2.0 * ks[-1]
        for _ in range(120):
            val = float(_abcd_omega_squared(k_cur, params, p))
            if np.isfinite(val) and val < 0.0:
                break
            k_prev, k_cur = k_cur, 2.0 * k_cur
        # Bisect down to just past the crossing.
        for _ in range(80):
            mid = math.sqrt(k_prev * k_cur)
            if float(_abcd_omega_squared(mid, params, p)) < 0.0:
                k_cur = mid
            else:
                k_prev = mid
            if k_cur / k_prev < 1.0 + 1e-9:
                break
        val = float(_abcd_omega_squared(k_cur, params, p))
        return WellPosednessVerdict("ill_posed", float(k_cur), min(w2_min, val))

    return WellPosednessVerdict("well_posed", None, w2_min)


def _require_evolvable(params: AbcdParams, p: PhysicalParams):
    if params.b < 0.0 or params.d < 0.0:
        raise IllPosedError(
            f"b and d must be nonnegative for time stepping; got b={params.b}, d={params.d}"
        )
    verdict = classify_abcd(params, p)
    if verdict.verdict != "well_posed":
        raise IllPosedError(
            "parameters are linearly ill-posed "
            f"(omega^2 = {verdict.omega_squared_min} at k = {verdict.witness_wavenumber})"
        )


def abcd_evolve(
    state: BoussinesqState,
    params: AbcdParams,
    p: PhysicalParams,
    t_end: float,
    dt_control: DtControl | None = None,
    n_out: int = 10,
) -> Trajectory:
    """Method-of-lines run of the 1D four-parameter system.

    Each right-hand side inverts the elliptic factors (1 - b H^2 d_xx) and
    (1 - d H^2 d_xx) mode-wise; quadratic products are dealiased; classical
    RK4 advances in time.  The step obeys both the advective CFL bound and
    an oscillatory bound pi/omega_max from the linear dispersion.
    """
    _require_evolvable(params, p)
    grid = state.grid
    if grid.dim != 1:
        raise ValueError("time stepping is 1D only")
    ctrl = dt_control or DtControl()

    z = state.zeta.values.copy()
    u = state.u.values.copy()
    if float(np.min(p.H + z)) <= 0.0:
        raise CavitationError("initial data violates non-cavitation")

    kk = grid.wavenumbers(0)
    ik = 1j * kk
    ik[grid.nodes[0] // 2] = 0.0
    k2 = kk**2
    mu2 = (p.H * kk) ** 2
    inv_b = 1.0 / (1.0 + params.b * mu2)
    inv_d = 1.0 / (1.0 + params.d * mu2)
    lin_zu = 1.0 - params.a * mu2  # factor on u in the mass flux
    lin_uz = 1.0 - params.c * mu2  # factor on zeta in the velocity equation
    mask = grid.dealias_mask()
    fft, ifft = np.fft.fft, np.fft.ifft
    dx = grid.spacing[0]
    xs = grid.axis_coordinates(0)

    w2_grid = np.maximum(p.g * p.H * k2 * lin_zu * lin_uz * inv_b * inv_d, 0.0)
    omega_max = float(np.sqrt(np.max(w2_grid)))

    def rhs(z_arr, u_arr):
        h = p.H + z_arr
        u_hat = fft(u_arr)
        hu_hat = mask * fft(h * u_arr)
        # mass flux: h u + a H^3 u_xx, then d_x and the b-elliptic inverse
        dz_hat = -ik * (hu_hat - params.a * p.H**3 * k2 * u_hat) * inv_b
        ux = ifft(ik * u_hat).real
        du_hat = (-p.g * ik * lin_uz * fft(z_arr) - mask * fft(u_arr * ux)) * inv_d
        return ifft(dz_hat).real, ifft(du_hat).real

    traj = Trajectory()
    traj.states.append(
        BoussinesqState(SpectralField(grid, z.copy()), SpectralField(grid, u.copy()),
                        state.time)
    )
    times = snapshot_times(t_end, n_out)
    t_now = 0.0
    for t_target in times[1:]:
        vmax = p.c0 + 1.5 * float(np.max(np.abs(u)))
        dt_raw = min(ctrl.cfl * dx / vmax, ctrl.dt_max)
        if omega_max > 0.0:
            dt_raw = min(dt_raw, ctrl.cfl * math.pi / omega_max)
        if ctrl.dt is not None:
            if ctrl.dt > dt_raw:
                raise ValueError(f"explicit dt {ctrl.dt} violates stability bound {dt_raw}")
            dt_raw = ctrl.dt
        if dt_raw < 1e-14:
            raise StepSizeUnderflowError(f"time step underflow: dt = {dt_raw}")
        m, dt = resolve_substeps(t_target - t_now, dt_raw)
        for _ in range(m):
            k1z, k1u = rhs(z, u)
            k2z, k2u = rhs(z + 0.5 * dt * k1z, u + 0.5 * dt * k1u)
            k3z, k3u = rhs(z + 0.5 * dt * k2z, u + 0.5 * dt * k2u)
            k4z, k4u = rhs(z + dt * k3z, u + dt * k3u)
            z = z + (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
            u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            t_now += dt
            if float(np.min(p.H + z)) <= 0.0:
                raise CavitationError(
                    f"cavitation at t = {state.time + t_now}", partial_trajectory=traj
                )
        traj.states.append(
            BoussinesqState(SpectralField(grid, z.copy()), SpectralField(grid, u.copy()),
                            state.time + t_now)
        )
    return traj


def abcd_linear_evolve(
    state: BoussinesqState, params: AbcdParams, p: PhysicalParams, t: float
) -> BoussinesqState:
    """Exact mode-wise solution of the linearized four-parameter system.

    Reference oracle for the small-amplitude consistency of abcd_evolve.
    """
    _require_evolvable(params, p)
    grid = state.grid
    kk = grid.wavenumbers(0)
    mu2 = (p.H * kk) ** 2
    alpha = p.H * (1.0 - params.a * mu2) / (1.0 + params.b * mu2)
    beta = p.g * (1.0 - params.c * mu2) / (1.0 + params.d * mu2)
    w = np.abs(kk) * np.sqrt(np.maximum(alpha * beta, 0.0))
    zhat, uhat = state.zeta.hat, state.u.hat
    cos_wt = np.cos(w * t)
    sinc = t * np.sinc(w * t / np.pi)  # sin(wt)/w with the w=0 limit t
    new_z = cos_wt * zhat - 1j * kk * alpha * sinc * uhat
    new_u = cos_wt * uhat - 1j * kk * beta * sinc * zhat
    return BoussinesqState(
        zeta=SpectralField.from_hat(grid, new_z),
        u=SpectralField.from_hat(grid, new_u),
        time=state.time + t,
    )


def whitham_multiplier_values(k, p: PhysicalParams):
    """sqrt(tanh(H|k|)/(H|k|)) on an array of wavenumbers, 1 at k = 0."""
    k = np.asarray(k, dtype=float)
    mu = p.H * np.abs(k)
    out = np.ones_like(mu)
    nz = mu != 0.0
    out[nz] = np.sqrt(np.tanh(mu[nz]) / mu[nz])
    return out


def _scalar_linear_symbol(model: str, kk: np.ndarray, p: PhysicalParams) -> np.ndarray:
    """Purely imaginary symbol L(k) of the exactly-integrated linear part."""
    if model == "kdv":
        return -1j * p.c0 * kk * (1.0 - (p.H * kk) ** 2 / 6.0)
    # whitham and whitham2 share the linear propagator c_p(|k|) d_x
    return -1j * p.c0 * kk * whitham_multiplier_values(kk, p)


def _scalar_run(state, p, t_end, dt, n_out):
    grid = state.grid
    kk = grid.wavenumbers(0)
    ik = 1j * kk
    ik[grid.nodes[0] // 2] = 0.0
    mask = grid.dealias_mask()
    fft, ifft = np.fft.fft, np.fft.ifft
    model = state.model
    lin = _scalar_linear_symbol(model, kk, p)
    sqrt_gH = math.sqrt(p.g * p.H)

    def nonlinear_hat(zhat, t_abs):
        z = ifft(zhat).real
        if model == "whitham2":
            depth = p.H + z
            if float(np.min(depth)) <= 0.0:
                raise CavitationError(f"cavitation at t = {t_abs}")
            coeff = 3.0 * np.sqrt(p.g * depth) - 3.0 * sqrt_gH
            zx = ifft(ik * zhat).real
            return -(mask * fft(coeff * zx))
        return -(3.0 * p.c0 / (4.0 * p.H)) * ik * (mask * fft(z * z))

    traj = Trajectory()
    traj.states.append(
        ScalarWaveState(SpectralField(grid, state.zeta.values.copy()), state.time, model)
    )
    zhat = fft(state.zeta.values)
    times = snapshot_times(t_end, n_out)
    t_now = 0.0
    for t_target in times[1:]:
        m, h = resolve_substeps(t_target - t_now, dt)
        e_half = np.exp(0.5 * h * lin)
        e_full = e_half * e_half
        for _ in range(m):
            t_abs = state.time + t_now
            try:
                n1 = nonlinear_hat(zhat, t_abs)
                n2 = nonlinear_hat(e_half * (zhat + 0.5 * h * n1), t_abs)
                n3 = nonlinear_hat(e_half * zhat + 0.5 * h * n2, t_abs)
                n4 = nonlinear_hat(e_full * zhat + h * e_half * n3, t_abs)
            except CavitationError as err:
                err.partial_trajectory = traj
                raise
            zhat = e_full * zhat + (h / 6.0) * (
                e_full * n1 + 2.0 * e_half * (n2 + n3) + n4
            )
            t_now += h
        traj.states.append(
            ScalarWaveState(SpectralField(grid, ifft(zhat).real),
                            state.time + t_now, model)
        )
    return traj


def scalar_evolve(
    state: ScalarWaveState,
    p: PhysicalParams,
    t_end: float,
    dt_control: DtControl | None = None,
    n_out: int = 10,
) -> Trajectory:
    """Integrating-factor run of a scalar model to t_end.

    The linear part is exponentiated exactly mode-wise and the nonlinear
    part advanced with four-stage Runge-Kutta on the filtered variable, so
    the step is accuracy-limited, not stiffness-limited.  By default the
    advective-scale step is halved until two successive refinements agree
    to 1e-8 in the max norm at the final time.
    """
    ctrl = dt_control or DtControl(refine_tol=1e-8)
    grid = state.grid
    if grid.dim != 1:
        raise ValueError("scalar models are 1D")
    if state.model == "whitham2" and float(np.min(p.H + state.zeta.values)) <= 0.0:
        raise CavitationError("initial data violates non-cavitation")
    if t_end == 0.0:
        traj = Trajectory()
        traj.states.append(state)
        return traj

    dx = grid.spacing[0]
    zmax = float(np.max(np.abs(state.zeta.values)))
    speed = p.c0 + 1.5 * (p.c0 / p.H) * zmax
    dt0 = min(ctrl.cfl * dx / speed, ctrl.dt_max)
    if ctrl.dt is not None:
        return _scalar_run(state, p, t_end, ctrl.dt, n_out)
    if ctrl.refine_tol is None:
        return _scalar_run(state, p, t_end, dt0, n_out)

    traj = _scalar_run(state, p, t_end, dt0, n_out)
    dt = dt0
    for _ in range(14):
        dt *= 0.5
        finer = _scalar_run(state, p, t_end, dt, n_out)
        diff = float(
            np.max(np.abs(finer.final_state.zeta.values - traj.final_state.zeta.values))
        )
        traj = finer
        if diff < ctrl.refine_tol:
            return traj
    raise StepSizeUnderflowError(
        f"step refinement did not reach tolerance {ctrl.refine_tol} (last dt = {dt})"
    )
