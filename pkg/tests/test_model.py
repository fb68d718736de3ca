"""Geometry and domain-type invariants."""

import dataclasses
import math

import pytest

from conftest import make_apparatus, make_specimen
from lmmbench.errors import ConfigError
from lmmbench.model import MaterialKV, SpecimenSpec, cross_section_area, wire_volume


def test_area_of_reference_wire():
    # pi * (1e-4)^2 / 4 by hand
    area = cross_section_area(make_specimen())
    assert area == pytest.approx(math.pi * 1e-8 / 4.0, rel=1e-15)
    assert area == pytest.approx(7.854e-9, rel=1e-4)


def test_area_unit_identity():
    specimen = SpecimenSpec(diameter=2.0 / math.sqrt(math.pi), natural_length=1.0)
    assert cross_section_area(specimen) == pytest.approx(1.0, rel=1e-14)


def test_zero_diameter_rejected():
    with pytest.raises(ConfigError):
        SpecimenSpec(diameter=0.0, natural_length=0.1)


def test_volume_of_reference_wire():
    volume = wire_volume(make_specimen())
    assert volume == pytest.approx(7.853981633974483e-10, rel=1e-12)


def test_zero_length_rejected():
    with pytest.raises(ConfigError):
        SpecimenSpec(diameter=1e-4, natural_length=0.0)


def test_unit_cylinder_volume():
    specimen = SpecimenSpec(diameter=2.0 / math.sqrt(math.pi), natural_length=1.0)
    assert wire_volume(specimen) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("diameter", [1e-5, 1e-4, 3.7e-3, 2.0])
def test_area_scales_quadratically(diameter):
    small = SpecimenSpec(diameter=diameter, natural_length=0.1)
    doubled = SpecimenSpec(diameter=2 * diameter, natural_length=0.1)
    assert cross_section_area(doubled) == pytest.approx(4 * cross_section_area(small),
                                                        rel=1e-14)


@pytest.mark.parametrize("diameter,length", [(1e-4, 0.1), (5e-4, 0.03), (0.002, 1.7)])
def test_volume_is_area_times_length(diameter, length):
    specimen = SpecimenSpec(diameter=diameter, natural_length=length)
    assert wire_volume(specimen) == cross_section_area(specimen) * length


def test_apparatus_validation():
    with pytest.raises(ConfigError):
        make_apparatus(adc_bits=1)
    with pytest.raises(ConfigError):
        make_apparatus(adc_bits=17)
    with pytest.raises(ConfigError):
        make_apparatus(sample_rate=4 * 3.13e6)  # not strictly above 4x
    with pytest.raises(ConfigError):
        make_apparatus(moving_mass=0.0)
    make_apparatus(adc_bits=2)
    make_apparatus(adc_bits=16)


def test_material_signs_are_free():
    MaterialKV(c=4.960e7, e_modulus=-3.758e11, eta=-2.432e7)
    MaterialKV(c=-1.0, e_modulus=2e11, eta=0.0)


def test_types_are_immutable():
    specimen = make_specimen()
    with pytest.raises(dataclasses.FrozenInstanceError):
        specimen.diameter = 2e-4
    apparatus = make_apparatus()
    with pytest.raises(dataclasses.FrozenInstanceError):
        apparatus.moving_mass = 1.0
