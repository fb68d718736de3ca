"""Forward physics: rigid mass striking a Kelvin-Voigt wire.

The wire is a parallel spring/dashpot acting along the lab axis.  It
carries tension only: zero force while slack (stretch <= 0) and zero
force whenever the constitutive value would push the mass forward.
The constant stress offset of the constitutive law is a regression
artifact, not a prestress, and is excluded here so that a slack wire
carries exactly zero force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .model import ApparatusSpec, MaterialKV, SpecimenSpec, cross_section_area

#: uniform-grid tolerance for MotionTrace time axes (relative to the step)
GRID_RTOL = 1e-9


@dataclass(frozen=True)
class SimConfig:
    """One simulated run: who is hit, how hard, and how finely to integrate.

    ``slack_gap`` is the loose-wire travel before the wire goes taut; the
    run starts with the mass at the origin moving at ``v0`` toward it.
    ``v0 = 0`` is allowed as the degenerate at-rest case even though any
    useful run needs ``v0 > 0``.
    """

    specimen: SpecimenSpec
    material: MaterialKV
    apparatus: ApparatusSpec
    v0: float
    slack_gap: float
    dt: float
    duration: float
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.v0 < 0:
            raise ConfigError(f"v0 must be >= 0, got {self.v0}")
        if not (self.dt > 0):
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not (self.duration > 0):
            raise ConfigError(f"duration must be > 0, got {self.duration}")
        if self.slack_gap < 0:
            raise ConfigError(f"slack_gap must be >= 0, got {self.slack_gap}")


@dataclass
class MotionTrace:
    """Aligned kinematic history on a uniform time grid.

    ``F`` is the force on the moving mass (negative while the wire pulls
    back); the wire sees ``-F``.
    """

    t: np.ndarray
    v: np.ndarray
    x: np.ndarray
    a: np.ndarray
    F: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        arrays = [np.asarray(arr, dtype=np.float64) for arr in (self.t, self.v, self.x, self.a, self.F)]
        self.t, self.v, self.x, self.a, self.F = arrays
        n = len(self.t)
        if any(len(arr) != n for arr in arrays[1:]):
            raise ConfigError("trace arrays must share one length")
        if n >= 2:
            steps = np.diff(self.t)
            step = steps.mean()
            if step <= 0 or np.any(np.abs(steps - step) > GRID_RTOL * step + 1e-300):
                raise ConfigError("trace time grid must be uniform and increasing")

    @property
    def dt(self) -> float:
        if len(self.t) < 2:
            raise ConfigError("trace has no time step")
        return float(self.t[1] - self.t[0])

    def __len__(self) -> int:
        return len(self.t)


def wire_stiffness(material: MaterialKV, specimen: SpecimenSpec) -> float:
    """Equivalent spring constant of the taut wire, -A*E/L0 (positive for a stiff wire)."""
    return -cross_section_area(specimen) * material.e_modulus / specimen.natural_length


def wire_damping(material: MaterialKV, specimen: SpecimenSpec) -> float:
    """Equivalent dashpot constant of the taut wire, -A*eta/L0."""
    return -cross_section_area(specimen) * material.eta / specimen.natural_length


def contact_force(x: float, v: float, material: MaterialKV, specimen: SpecimenSpec) -> float:
    """Force on the mass from the wire at stretch ``x`` and stretch rate ``v``.

    Zero while slack (x <= 0) and clamped to zero when the constitutive
    value turns compressive: a string cannot push.
    """
    if x <= 0.0:
        return 0.0
    area = cross_section_area(specimen)
    length = specimen.natural_length
    force = area * (material.e_modulus * x + material.eta * v) / length
    return force if force < 0.0 else 0.0


def _force_profile(x: np.ndarray, v: np.ndarray, material: MaterialKV, specimen: SpecimenSpec,
                   slack_gap: float) -> np.ndarray:
    """Vectorized ``contact_force(x - slack_gap, v)``."""
    area = cross_section_area(specimen)
    length = specimen.natural_length
    stretch = x - slack_gap
    force = area * (material.e_modulus * stretch + material.eta * v) / length
    force[stretch <= 0.0] = 0.0
    force[force > 0.0] = 0.0
    return force


def stable_step_limit(cfg: SimConfig) -> float:
    """Largest admissible RK4 step, one percent of the contact time scale."""
    area = cross_section_area(cfg.specimen)
    stiffness_scale = area * abs(cfg.material.e_modulus)
    if stiffness_scale == 0.0:
        return math.inf
    return 1e-2 * math.sqrt(cfg.apparatus.moving_mass * cfg.specimen.natural_length / stiffness_scale)


def simulate_impact(cfg: SimConfig) -> MotionTrace:
    """Integrate m*x'' = contact_force(x - slack_gap, x') with classical fixed-step RK4.

    The trace covers the whole configured duration: approach flight,
    contact and post-release flight.  Fixed stepping keeps the grid
    deterministic so downstream synthesis can interpolate it.
    """
    limit = stable_step_limit(cfg)
    if cfg.dt > limit:
        raise ConfigError(
            f"dt {cfg.dt:g} exceeds the stable-step limit {limit:g} for this stiffness"
        )

    n_steps = int(round(cfg.duration / cfg.dt))
    t = np.arange(n_steps + 1) * cfg.dt
    xs = np.empty(n_steps + 1)
    vs = np.empty(n_steps + 1)

    # scalar-local RK4 loop; the force law is inlined for speed
    area = cross_section_area(cfg.specimen)
    length = cfg.specimen.natural_length
    ke = area * cfg.material.e_modulus / length
    kn = area * cfg.material.eta / length
    slack = cfg.slack_gap
    inv_m = 1.0 / cfg.apparatus.moving_mass
    dt = cfg.dt
    half = 0.5 * dt

    def accel(xx: float, vv: float) -> float:
        s = xx - slack
        if s <= 0.0:
            return 0.0
        f = ke * s + kn * vv
        return f * inv_m if f < 0.0 else 0.0

    x = 0.0
    v = cfg.v0
    xs[0] = x
    vs[0] = v
    for i in range(n_steps):
        a1 = accel(x, v)
        x2 = x + half * v
        v2 = v + half * a1
        a2 = accel(x2, v2)
        x3 = x + half * v2
        v3 = v + half * a2
        a3 = accel(x3, v3)
        x4 = x + dt * v3
        v4 = v + dt * a3
        a4 = accel(x4, v4)
        x += dt * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
        v += dt * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0
        xs[i + 1] = x
        vs[i + 1] = v

    accel_profile = _force_profile(xs, vs, cfg.material, cfg.specimen, slack) * inv_m
    meta = {
        "source": "simulate_impact",
        "v0": cfg.v0,
        "slack_gap": cfg.slack_gap,
        "dt": cfg.dt,
        "rng_seed": cfg.rng_seed,
    }
    return MotionTrace(t=t, v=vs, x=xs, a=accel_profile,
                       F=cfg.apparatus.moving_mass * accel_profile, meta=meta)


def analytic_contact_trace(cfg: SimConfig) -> MotionTrace:
    """Closed-form underdamped contact oracle on the simulation grid.

    Contact frame: t = 0 at the taut instant, x is the wire stretch with
    x(0) = 0 and x'(0) = v0.  The trace stops just before the first
    force sign flip (release).
    """
    k = wire_stiffness(cfg.material, cfg.specimen)
    b = wire_damping(cfg.material, cfg.specimen)
    m = cfg.apparatus.moving_mass
    if k <= 0:
        raise ConfigError("analytic contact needs a restoring wire (negative modulus)")
    if b * b >= 4.0 * m * k:
        raise ConfigError(
            f"overdamped parameters: b^2 = {b * b:g} >= 4mk = {4 * m * k:g}"
        )

    omega0 = math.sqrt(k / m)
    gamma = b / (2.0 * m)
    omega_d = math.sqrt(omega0 * omega0 - gamma * gamma)

    n_steps = int(round(cfg.duration / cfg.dt))
    t = np.arange(n_steps + 1) * cfg.dt
    decay = np.exp(-gamma * t)
    x = (cfg.v0 / omega_d) * decay * np.sin(omega_d * t)
    v = cfg.v0 * decay * (np.cos(omega_d * t) - (gamma / omega_d) * np.sin(omega_d * t))
    force = -(k * x + b * v)

    flip = np.flatnonzero(force[1:] >= 0.0)
    end = flip[0] + 1 if len(flip) else len(t)
    sl = slice(0, end)
    accel = force[sl] / m
    meta = {"source": "analytic_contact_trace", "v0": cfg.v0,
            "omega_d": omega_d, "gamma": gamma}
    return MotionTrace(t=t[sl], v=v[sl], x=x[sl], a=accel, F=m * accel, meta=meta)
