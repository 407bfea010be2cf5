import pytest

from dilute1d.potentials import (
    ConfigError,
    DeltaSpike,
    HardCoreBand,
    Potential,
    PotentialError,
    StepPotential,
    dumps_potential,
    is_impenetrable,
    loads_potential,
    make_hard_core,
    make_lieb_liniger,
    regular_mass,
)


def test_lieb_liniger_factory():
    p = make_lieb_liniger(1.0)
    (spike,) = p.delta_spikes
    assert spike.x0 == 0.0
    assert spike.strength == 2.0
    assert p.range == 0.0

    p10 = make_lieb_liniger(10.0)
    assert p10.delta_spikes[0].strength == 20.0


def test_lieb_liniger_rejects_nonpositive():
    with pytest.raises(PotentialError):
        make_lieb_liniger(0.0)
    with pytest.raises(PotentialError):
        make_lieb_liniger(-1.0)


def test_hard_core_factory():
    p = make_hard_core(0.3)
    (band,) = p.hard_core_bands
    assert (band.x1, band.x2) == (0.0, 0.3)
    assert p.range == 0.3
    with pytest.raises(PotentialError):
        make_hard_core(-0.1)


def test_regular_mass():
    assert regular_mass(make_lieb_liniger(1.0)) == 2.0
    assert regular_mass(make_hard_core(0.3)) == 0.0
    steps = Potential([StepPotential((0.2,), (5.0,))])
    assert regular_mass(steps) == pytest.approx(2.0)
    paired = Potential([DeltaSpike(0.4, 1.5)])
    assert regular_mass(paired) == 3.0


def test_regular_mass_additive_and_order_free():
    comps = [DeltaSpike(0.0, 2.0), StepPotential((0.3,), (1.0,)), DeltaSpike(0.2, 0.5)]
    total = sum(regular_mass(Potential([c])) for c in comps)
    assert regular_mass(Potential(comps)) == pytest.approx(total)
    assert Potential(comps) == Potential(comps[::-1])


def test_is_impenetrable():
    assert is_impenetrable(make_hard_core(0.3))
    assert not is_impenetrable(make_lieb_liniger(5.0))
    assert not is_impenetrable(Potential([HardCoreBand(0.1, 0.2)]))
    assert is_impenetrable(Potential([HardCoreBand(0.0, 0.0)]))


def test_range_is_max_outer_radius():
    p = Potential(
        [DeltaSpike(0.5, 1.0), HardCoreBand(0.1, 0.2), StepPotential((0.35,), (2.0,))]
    )
    assert p.range == 0.5
    assert p.regular_value_at(0.6) == 0.0


def test_component_validation():
    with pytest.raises(PotentialError):
        DeltaSpike(-0.1, 1.0)
    with pytest.raises(PotentialError):
        DeltaSpike(0.0, 0.0)
    with pytest.raises(PotentialError):
        HardCoreBand(0.3, 0.2)
    with pytest.raises(PotentialError):
        StepPotential((0.2, 0.1), (1.0, 1.0))
    with pytest.raises(PotentialError):
        StepPotential((0.2,), (-1.0,))


CONFIG = """
# two-component example
[potential.delta]
x0 = 0.0
strength = 2.0

[potential.steps]
breakpoints = 0.1 0.25
values = 5.0 1.5

[potential.hardcore]
x1 = 0.0
x2 = 0.05
"""


def test_config_round_trip():
    p = loads_potential(CONFIG)
    assert len(p.components) == 3
    assert loads_potential(dumps_potential(p)) == p


def test_config_rejects_negative_strength_with_line_number():
    bad = "[potential.delta]\nx0 = 0.1\nstrength = -2.0\n"
    with pytest.raises(ConfigError) as err:
        loads_potential(bad)
    assert "line 1" in str(err.value)


def test_config_rejects_unknown_section_and_key():
    with pytest.raises(ConfigError, match="line 1"):
        loads_potential("[potential.bogus]\n")
    with pytest.raises(ConfigError, match="line 2"):
        loads_potential("[potential.delta]\nwat = 3\n")
    with pytest.raises(ConfigError, match="line 3"):
        loads_potential("[potential.delta]\nx0 = 0\nstrength = abc\n")
