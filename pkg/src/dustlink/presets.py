"""Built-in Earth and Mars channel presets.

Earth runs 0.24 THz links through 1-150 micron dust under a 288 K /
1013 mb atmosphere; Mars runs 1.64 THz through 0.5-4 micron dust at
210 K / 6.1 mb, with the Table-style defaults of 10^4 photon packets,
50 m antennas and 10 m link distance. The log-normal shape parameters
(Earth: median 10 um, sigma 2.0; Mars: median 1.5 um, sigma 1.5) are
modeling choices and overridable everywhere.
"""

from dataclasses import dataclass, replace
from importlib import resources

from .atmosphere import GasMixture
from .constants import BOLTZMANN, MB_PER_ATM, dbm_to_watts
from .errors import DomainError
from .scatter import (DustPermittivity, LinearDensity, MediumSpec,
                      SizeDistribution, Visibility, VolumetricDensity,
                      dust_permittivity)

__all__ = ["PlanetPreset", "EARTH", "MARS", "preset", "bundled_catalog_dir",
            "DEFAULT_NOISE_PSD_W_HZ", "DEFAULT_TX_POWER_W"]

# Thermal noise floor at 290 K (-174 dBm/Hz). Absolute capacities scale
# with this choice; override it to model other receivers.
DEFAULT_NOISE_PSD_W_HZ = BOLTZMANN * 290.0
DEFAULT_TX_POWER_W = dbm_to_watts(10.0)
BEAM_FACE_AREA_M2 = 1e-6   # 0.01 cm**2


@dataclass(frozen=True)
class PlanetPreset:
    """Default channel conditions and simulation settings for one planet."""

    name: str
    frequency_hz: float
    band_lo_hz: float
    band_hi_hz: float
    packet_count: int
    antenna_height_m: float
    temperature_k: float
    pressure_atm: float
    distance_m: float
    dust_count_per_m: float
    size_distribution: SizeDistribution
    permittivity_model: str
    gases: tuple[tuple[str, float], ...]
    asymmetry_lo: float = 0.5
    asymmetry_hi: float = 1.0
    weight_threshold: float = 1e-5
    frequency_cap_hz: float | None = None   # sweep ceiling, where applicable

    def permittivity(self, f_hz: float | None = None) -> DustPermittivity:
        return dust_permittivity(self.permittivity_model,
                                 f_hz if f_hz is not None else self.frequency_hz)

    def mixture(self) -> GasMixture:
        return GasMixture(self.gases, self.temperature_k, self.pressure_atm)

    def medium_from_count(self, count_per_m: float,
                          f_hz: float | None = None) -> MediumSpec:
        return MediumSpec(self.size_distribution, self.permittivity(f_hz),
                          LinearDensity(count_per_m, BEAM_FACE_AREA_M2))

    def medium_from_visibility(self, visibility_m: float,
                               f_hz: float | None = None) -> MediumSpec:
        return MediumSpec(self.size_distribution, self.permittivity(f_hz),
                          Visibility(visibility_m))

    def medium_volumetric(self, per_m3: float,
                          f_hz: float | None = None) -> MediumSpec:
        return MediumSpec(self.size_distribution, self.permittivity(f_hz),
                          VolumetricDensity(per_m3))

    def with_overrides(self, **kwargs) -> "PlanetPreset":
        return replace(self, **kwargs)


EARTH = PlanetPreset(
    name="earth",
    frequency_hz=0.24e12,
    band_lo_hz=0.22e12,
    band_hi_hz=0.24e12,
    packet_count=10_000,
    antenna_height_m=50.0,
    temperature_k=288.0,
    pressure_atm=1013.0 / MB_PER_ATM,
    distance_m=10.0,
    dust_count_per_m=10.0,     # 100 particles per 10 m path
    size_distribution=SizeDistribution.log_normal(10e-6, 2.0, 1e-6, 150e-6),
    permittivity_model="earth-frequency-dependent",
    gases=(
        ("N2", 0.78084), ("O2", 0.20946), ("H2O", 0.01),
        ("CO2", 0.00003), ("CH4", 1.5e-6), ("SO2", 1e-6),
        ("O3", 0.05e-6), ("N2O", 0.02e-6), ("CO", 0.01e-6),
        ("NH3", 0.01e-6),
    ),
    frequency_cap_hz=4e12,
)

MARS = PlanetPreset(
    name="mars",
    frequency_hz=1.64e12,
    band_lo_hz=1.64e12,
    band_hi_hz=1.67e12,
    packet_count=10_000,
    antenna_height_m=50.0,
    temperature_k=210.0,
    pressure_atm=6.1 / MB_PER_ATM,
    distance_m=10.0,
    dust_count_per_m=1000.0,   # 10**4 particles per 10 m path
    size_distribution=SizeDistribution.log_normal(1.5e-6, 1.5, 0.5e-6, 4e-6),
    permittivity_model="mars-constant",
    gases=(
        ("CO2", 0.9532), ("N2", 0.027), ("O2", 0.0013),
        ("H2O", 200e-6), ("O3", 0.1e-6), ("CO", 0.0008),
        ("NO", 100e-6),
    ),
)

_PRESETS = {"earth": EARTH, "mars": MARS}


def preset(name: str) -> PlanetPreset:
    try:
        return _PRESETS[name.lower()]
    except KeyError:
        raise DomainError(f"unknown planet preset {name!r}") from None


def bundled_catalog_dir() -> str:
    """Directory of the bundled synthetic spectroscopic catalog."""
    return str(resources.files("dustlink") / "data")
