"""Shared domain types and derived geometry.

Units are strict SI throughout: lengths in m, mass in kg, stress and
moduli in Pa, viscosity in Pa*s, frequencies in Hz.  Sign convention:
the lab axis points along the initial velocity of the moving mass, so
during loading the tension decelerates the mass and the force on the
mass, the acceleration and the stress are all negative while strain is
positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class SpecimenSpec:
    """Geometry of the wire under test."""

    diameter: float
    natural_length: float
    label: str = ""

    def __post_init__(self) -> None:
        if not (self.diameter > 0):
            raise ConfigError(f"specimen diameter must be > 0, got {self.diameter}")
        if not (self.natural_length > 0):
            raise ConfigError(f"natural length must be > 0, got {self.natural_length}")


@dataclass(frozen=True)
class ApparatusSpec:
    """Moving mass, laser and digitizer constants of one bench configuration.

    ``zfm_periods`` is the number of signal periods per frequency-estimation
    window; ``bearing_coefficient`` is the linear drag coefficient of the
    aerostatic bearing (used only in the uncertainty budget, never in the
    equation of motion).
    """

    moving_mass: float
    wavelength_air: float
    f_rest: float
    bearing_coefficient: float
    sample_rate: float
    adc_bits: int
    capture_duration: float
    zfm_periods: int

    def __post_init__(self) -> None:
        positive = {
            "moving_mass": self.moving_mass,
            "wavelength_air": self.wavelength_air,
            "f_rest": self.f_rest,
            "bearing_coefficient": self.bearing_coefficient,
            "sample_rate": self.sample_rate,
            "capture_duration": self.capture_duration,
            "zfm_periods": self.zfm_periods,
        }
        for name, value in positive.items():
            if not (value > 0):
                raise ConfigError(f"apparatus {name} must be > 0, got {value}")
        if not (2 <= self.adc_bits <= 16):
            raise ConfigError(f"adc_bits must be in [2, 16], got {self.adc_bits}")
        if not (self.sample_rate > 4 * self.f_rest):
            raise ConfigError(
                f"sample_rate {self.sample_rate:g} must exceed 4 x f_rest "
                f"({4 * self.f_rest:g}) to keep the beat band clear of Nyquist"
            )


@dataclass(frozen=True)
class MaterialKV:
    """Kelvin-Voigt constitutive coefficients: stress = c + E*strain + eta*strain_rate.

    With the global sign convention, tensile stress is negative, so for a
    stiff wire E and eta are negative numbers.
    """

    c: float
    e_modulus: float
    eta: float


def cross_section_area(specimen: SpecimenSpec) -> float:
    """Circular cross-section area, pi*d^2/4."""
    return math.pi * specimen.diameter**2 / 4.0


def wire_volume(specimen: SpecimenSpec) -> float:
    """Cylinder volume, cross-section area times natural length."""
    return cross_section_area(specimen) * specimen.natural_length
