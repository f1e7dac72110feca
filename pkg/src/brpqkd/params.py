"""Parameter containers shared by every analysis stage.

The three dataclasses mirror the knobs of a weak-pulse QKD link guarded
by bright reference pulses: the transmitter (:class:`SourceParams`), the
fiber (:class:`ChannelParams`) and the receiver (:class:`DetectorParams`).
They are frozen so a parameter set can be hashed, cached and shared
between worker threads without defensive copying.

``GYS_DETECTOR`` bundles the detector figures of the long-haul fiber
experiment commonly used to benchmark weak-pulse security analyses;
``IDEAL_DETECTOR`` is the noiseless unit-efficiency receiver used for
limit curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SourceParams",
    "ChannelParams",
    "DetectorParams",
    "GYS_DETECTOR",
    "IDEAL_DETECTOR",
    "DEFAULT_LOSS_DB_PER_KM",
]

DEFAULT_LOSS_DB_PER_KM = 0.21


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class SourceParams:
    """Mean photon numbers of the two pulse classes leaving the transmitter.

    Attributes
    ----------
    mu_s:
        Mean photon number of a signal pulse.  Zero is allowed so that a
        dark-source simulation can be expressed; analytic operations that
        divide by the single-photon weight reject it at the call site.
    mu_b:
        Mean photon number of the bright reference pulse that rides along
        with each signal.  Defaults to zero (no reference pulse).
    """

    mu_s: float
    mu_b: float = 0.0

    def __post_init__(self) -> None:
        for name in ("mu_s", "mu_b"):
            value = _check_finite(name, getattr(self, name))
            if value < 0.0:
                raise ValueError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class ChannelParams:
    """Fiber span between transmitter and receiver.

    Attributes
    ----------
    length_km:
        Span length in kilometres.
    loss_db_per_km:
        Attenuation coefficient.  The default 0.21 dB/km is typical of
        standard telecom fiber at 1550 nm.
    """

    length_km: float
    loss_db_per_km: float = DEFAULT_LOSS_DB_PER_KM

    def __post_init__(self) -> None:
        for name in ("length_km", "loss_db_per_km"):
            value = _check_finite(name, getattr(self, name))
            if value < 0.0:
                raise ValueError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class DetectorParams:
    """Receiver imperfections.

    Attributes
    ----------
    eta_d:
        Detection efficiency of the signal detector.
    y0:
        Dark-click probability per gate.
    e_detector:
        Intrinsic misalignment error: probability that a photon-caused
        click lands in the wrong detector.
    e_0:
        Error weight of a dark click.  A dark count carries no signal
        correlation, so it errs half the time; fixed at 1/2.
    """

    eta_d: float
    y0: float = 0.0
    e_detector: float = 0.0
    e_0: float = 0.5

    def __post_init__(self) -> None:
        for name in ("eta_d", "y0", "e_detector", "e_0"):
            value = _check_finite(name, getattr(self, name))
            _check_probability(name, value)
            object.__setattr__(self, name, value)


# Detector block of the 122 km fiber benchmark experiment.
GYS_DETECTOR = DetectorParams(eta_d=0.045, y0=1.7e-6, e_detector=0.033)

# Noiseless unit-efficiency receiver for limit curves.
IDEAL_DETECTOR = DetectorParams(eta_d=1.0, y0=0.0, e_detector=0.0)
