"""Line-of-sight channel gain composition and Shannon capacity.

The channel transfer amplitude is the product of the spreading loss
c/(4*pi*D*f), the molecular absorption amplitude exp(-k*D/2), and the
dust transfer amplitude, with the propagation phase tracked separately.
The dust amplitude 1/sqrt(10**(-0.4343*ln T)) is implemented in its
algebraically exact form sqrt(T), since 0.4343 stands for log10(e).

Capacity uses a single narrow sub-band: C = B * log2(1 + |h|^2 * P / (B * N0)).
"""

import math
from dataclasses import dataclass

from .constants import SPEED_OF_LIGHT, dbm_to_watts
from .errors import DomainError
from .presets import DEFAULT_NOISE_PSD_W_HZ, DEFAULT_TX_POWER_W, PlanetPreset
from .rng import derive_seed, substream
from .transport import TransportConfig, UniformAsymmetry, estimate_transmittance
from .scatter import ensemble_extinction

__all__ = [
    "LinkConfig",
    "ChannelGains",
    "CapacityResult",
    "TimePoint",
    "DistancePoint",
    "h_spreading",
    "h_absorption",
    "h_dust",
    "channel_gain",
    "capacity",
    "default_time_counts",
    "run_time_scenario",
    "run_distance_sweep",
]

TIME_SCENARIO_SECONDS = 21               # samples at t = 0..20 s
DROP_WINDOWS_S = ((7, 9), (15, 17))      # inclusive low-dust intervals


@dataclass(frozen=True)
class LinkConfig:
    """Band, power, noise and geometry of one link evaluation."""

    band_lo_hz: float
    band_hi_hz: float
    center_hz: float
    tx_power_w: float = DEFAULT_TX_POWER_W
    noise_psd_w_hz: float = DEFAULT_NOISE_PSD_W_HZ
    distance_m: float = 10.0
    planet: str = "earth"

    def __post_init__(self):
        if self.band_lo_hz >= self.band_hi_hz:
            raise DomainError("band must satisfy f_lo < f_hi")
        if self.tx_power_w <= 0 or self.noise_psd_w_hz <= 0:
            raise DomainError("power and noise density must be positive")
        if self.distance_m <= 0:
            raise DomainError("distance must be positive")

    @property
    def bandwidth_hz(self) -> float:
        return self.band_hi_hz - self.band_lo_hz

    @classmethod
    def for_preset(cls, planet: PlanetPreset, distance_m: float | None = None,
                   tx_power_dbm: float | None = None,
                   noise_psd_w_hz: float | None = None) -> "LinkConfig":
        return cls(
            band_lo_hz=planet.band_lo_hz,
            band_hi_hz=planet.band_hi_hz,
            center_hz=planet.frequency_hz,
            tx_power_w=(DEFAULT_TX_POWER_W if tx_power_dbm is None
                        else dbm_to_watts(tx_power_dbm)),
            noise_psd_w_hz=noise_psd_w_hz or DEFAULT_NOISE_PSD_W_HZ,
            distance_m=distance_m if distance_m is not None else planet.distance_m,
            planet=planet.name,
        )


@dataclass(frozen=True)
class ChannelGains:
    """Component amplitudes of the line-of-sight transfer function."""

    h_spreading: float
    h_absorption: float
    h_dust: float
    h_los: float
    delay_s: float
    phase_rad: float

    @property
    def h_complex(self) -> complex:
        return self.h_los * complex(math.cos(self.phase_rad),
                                    math.sin(self.phase_rad))


@dataclass(frozen=True)
class CapacityResult:
    capacity_bps: float
    snr: float
    gains: ChannelGains


def h_spreading(f_hz: float, distance_m: float) -> float:
    """Free-space spreading amplitude c/(4*pi*D*f)."""
    if f_hz <= 0 or distance_m <= 0:
        raise DomainError("frequency and distance must be positive")
    return SPEED_OF_LIGHT / (4.0 * math.pi * distance_m * f_hz)


def h_absorption(k_per_m: float, distance_m: float) -> float:
    """Molecular absorption amplitude exp(-k*D/2)."""
    if k_per_m < 0:
        raise DomainError("absorption coefficient must be >= 0")
    if distance_m <= 0:
        raise DomainError("distance must be positive")
    return math.exp(-0.5 * k_per_m * distance_m)


def h_dust(transmittance: float) -> float:
    """Dust transfer amplitude; exactly sqrt(T)."""
    if not (0.0 <= transmittance <= 1.0):
        raise DomainError("transmittance must be in [0, 1]")
    return math.sqrt(transmittance)


def channel_gain(f_hz: float, distance_m: float, k_per_m: float,
                 transmittance: float) -> ChannelGains:
    """Compose the three loss amplitudes and the propagation delay."""
    spr = h_spreading(f_hz, distance_m)
    absn = h_absorption(k_per_m, distance_m)
    dust = h_dust(transmittance)
    delay = distance_m / SPEED_OF_LIGHT
    return ChannelGains(
        h_spreading=spr,
        h_absorption=absn,
        h_dust=dust,
        h_los=spr * absn * dust,
        delay_s=delay,
        phase_rad=-2.0 * math.pi * f_hz * delay,
    )


def capacity(cfg: LinkConfig, h_los: float) -> CapacityResult:
    """Shannon capacity of the single sub-band at amplitude ``h_los``."""
    if h_los < 0:
        raise DomainError("channel amplitude must be >= 0")
    bw = cfg.bandwidth_hz
    snr = h_los * h_los * cfg.tx_power_w / (bw * cfg.noise_psd_w_hz)
    gains = ChannelGains(h_spreading=math.nan, h_absorption=math.nan,
                         h_dust=math.nan, h_los=h_los,
                         delay_s=cfg.distance_m / SPEED_OF_LIGHT,
                         phase_rad=0.0)
    return CapacityResult(capacity_bps=bw * math.log2(1.0 + snr),
                          snr=snr, gains=gains)


def _capacity_from_gains(cfg: LinkConfig, gains: ChannelGains) -> CapacityResult:
    result = capacity(cfg, gains.h_los)
    return CapacityResult(result.capacity_bps, result.snr, gains)


@dataclass(frozen=True)
class TimePoint:
    t_s: float
    count: float
    transmittance: float
    attenuation_db_per_m: float
    capacity_bps: float


@dataclass(frozen=True)
class DistancePoint:
    distance_m: float
    density_per_m: float
    k_per_m: float
    transmittance: float
    h_spreading: float
    h_absorption: float
    h_dust: float
    capacity_bps: float


def default_time_counts(planet: PlanetPreset, seed: int,
                        seconds: int = TIME_SCENARIO_SECONDS) -> list[int]:
    """Per-second dust counts with low-dust drop windows.

    Storm-level counts run 100-200 (Earth) or 10000-20000 (Mars); inside
    the drop windows they fall below 30 / 300.
    """
    if planet.name == "earth":
        base, drop = (100, 200), (5, 30)
    else:
        base, drop = (10_000, 20_000), (50, 300)
    rng = substream(derive_seed(seed, "time-counts"), 0)
    counts = []
    for t in range(seconds):
        in_window = any(lo <= t <= hi for lo, hi in DROP_WINDOWS_S)
        lo, hi = drop if in_window else base
        counts.append(int(rng.integers(lo, hi + 1)))
    return counts


def _transport_config(planet: PlanetPreset, extinction_per_m: float,
                      distance_m: float, seed: int,
                      packet_count: int | None = None) -> TransportConfig:
    return TransportConfig(
        distance_m=distance_m,
        packet_count=packet_count or planet.packet_count,
        extinction_per_m=extinction_per_m,
        asymmetry=UniformAsymmetry(planet.asymmetry_lo, planet.asymmetry_hi),
        weight_threshold=planet.weight_threshold,
        seed=seed,
        launch_height_m=planet.antenna_height_m,
    )


def run_time_scenario(cfg: LinkConfig, planet: PlanetPreset,
                      counts: list[int], seed: int, k_per_m: float,
                      packet_count: int | None = None) -> list[TimePoint]:
    """Per-second capacity under a time-varying dust count.

    Each second's count becomes a per-meter density over the link
    distance, drives a seeded transport run, and the resulting dust
    amplitude composes with spreading and the fixed band-center
    absorption ``k_per_m``. Deterministic per seed.
    """
    if any(c < 0 for c in counts):
        raise DomainError("dust counts must be >= 0")
    points = []
    for t, count in enumerate(counts):
        medium = planet.medium_from_count(count / cfg.distance_m, cfg.center_hz)
        cext = ensemble_extinction(medium, cfg.center_hz).extinction_per_m
        transport = _transport_config(planet, cext, cfg.distance_m,
                                      derive_seed(seed, "time", t), packet_count)
        result = estimate_transmittance(transport)
        gains = channel_gain(cfg.center_hz, cfg.distance_m, k_per_m,
                             result.transmittance)
        points.append(TimePoint(
            t_s=float(t),
            count=count,
            transmittance=result.transmittance,
            attenuation_db_per_m=result.attenuation_db_per_m,
            capacity_bps=_capacity_from_gains(cfg, gains).capacity_bps,
        ))
    return points


def run_distance_sweep(cfg: LinkConfig, planet: PlanetPreset,
                       distances_m: list[float],
                       density_range_per_m: tuple[float, float], seed: int,
                       k_per_m: float,
                       packet_count: int | None = None) -> list[DistancePoint]:
    """Capacity versus distance at a per-meter dust density range.

    The density at each distance is drawn uniformly from the range (a
    (0, 0) range is clear sky); transport reruns per distance with a
    derived seed. Distances must be increasing.
    """
    if list(distances_m) != sorted(distances_m):
        raise DomainError("distances must be increasing")
    lo, hi = density_range_per_m
    if lo < 0 or hi < lo:
        raise DomainError("density range must be ordered and >= 0")
    rng = substream(derive_seed(seed, "distance-densities"), 0)
    points = []
    for i, distance in enumerate(distances_m):
        density = float(rng.uniform(lo, hi)) if hi > 0 else 0.0
        if density > 0:
            medium = planet.medium_from_count(density, cfg.center_hz)
            cext = ensemble_extinction(medium, cfg.center_hz).extinction_per_m
            transport = _transport_config(planet, cext, distance,
                                          derive_seed(seed, "distance", i),
                                          packet_count)
            transmittance = estimate_transmittance(transport).transmittance
        else:
            transmittance = 1.0
        link = LinkConfig(cfg.band_lo_hz, cfg.band_hi_hz, cfg.center_hz,
                          cfg.tx_power_w, cfg.noise_psd_w_hz, distance,
                          cfg.planet)
        gains = channel_gain(cfg.center_hz, distance, k_per_m, transmittance)
        points.append(DistancePoint(
            distance_m=float(distance),
            density_per_m=density,
            k_per_m=k_per_m,
            transmittance=transmittance,
            h_spreading=gains.h_spreading,
            h_absorption=gains.h_absorption,
            h_dust=gains.h_dust,
            capacity_bps=_capacity_from_gains(link, gains).capacity_bps,
        ))
    return points
