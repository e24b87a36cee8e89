"""Enum types used across configs, results and the wire format."""

import enum


class NoiseMode(str, enum.Enum):
    """Noise regime the threshold is calibrated for."""

    GAUSSIAN = "gaussian"  # iid Gaussian, W of order log(n)
    DEPENDENT = "dependent"  # weakly dependent / non-Gaussian, W of order sqrt(n)


class Estimator(str, enum.Enum):
    """Noise scale estimator."""

    MAD = "mad"
    DIF = "dif"
    LRV = "lrv"


class Bound(str, enum.Enum):
    """Which of the two extreme-value limit constants to evaluate."""

    LOWER = "lower"  # b_1 = 1/a
    UPPER = "upper"  # b_2 = 1


class Selection(str, enum.Enum):
    """Candidate selection inside the greedy scan."""

    FIRST = "first"
    ARGMAX = "argmax"


class Calibration(str, enum.Enum):
    """Threshold calibration."""

    FWE = "fwe"
    CONSISTENT = "consistent"


class Method(str, enum.Enum):
    """Named presets combining a noise mode and an estimator."""

    DIF1_MAD = "DIF1-MAD"
    DIF2_SD = "DIF2-SD"
    DIF2_LRV = "DIF2-LRV"


class NoiseKind(str, enum.Enum):
    """Noise processes of the simulation harness."""

    N1 = "N1"  # iid Gaussian
    N2 = "N2"  # iid scaled t5
    N3 = "N3"  # Gaussian AR(1)
    N4 = "N4"  # t5 AR(1)


class ArInnovation(str, enum.Enum):
    """Reading of the AR(1) innovation scale for N3/N4."""

    PRINTED = "printed"  # innovation variance sigma^2 / (1 - phi^2)
    STATIONARY = "stationary"  # innovation variance sigma^2 (1 - phi^2)


class SignalKind(str, enum.Enum):
    """Test signal families."""

    NONE = "none"
    BLOCKS = "blocks"
    WAVES = "waves"
    HILLS = "hills"
    CUSTOM = "custom"


class OutputFormat(str, enum.Enum):
    """CLI output format."""

    JSON = "json"
    CSV = "csv"
    HUMAN = "human"
