from enum import Enum, IntEnum
from pathlib import Path

SETTINGS_LOCATION = Path("/etc/fuselab/config.toml")
SETTINGS_OVERRIDE_LOCATION = Path("/etc/fuselab.d/")
ENV_PREFIX = "FUSELAB_"

DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_BLOCK_SIZE = 4096
DEFAULT_TRIALS = 10000
MIN_PUBLISHED_TRIALS = 1000
DEFAULT_PFA_TARGET = 0.1

# statistic values this close to a calibrated threshold share its randomized decision
THRESHOLD_TIE_RTOL = 1e-9
THRESHOLD_TIE_ATOL = 1e-12

# quantile solver
QUANTILE_TOL = 1e-12
QUANTILE_MAX_ITER = 100

# threshold design, window in units of the noise scale
DESIGN_HALF_WIDTH_SCALES = 6.0
DESIGN_GRID_POINTS = 601
DESIGN_MIN_GRID_POINTS = 33
DESIGN_TOL = 1e-9

# ML search, bracket in units of scale / |h|
ML_BRACKET_SCALES = 10.0
ML_BRACKET_DOUBLINGS = 8
ML_TOL = 1e-8
ML_MAX_ITER = 200
ML_CLAMP = 1e-12

# invariant suite
CHECK_MAX_ENUMERATED_SENSORS = 12
CHECK_NORMALIZATION_TOL = 1e-10
CHECK_INFORMATION_TOL = 1e-9
CHECK_SCORE_TOL = 1e-5
CHECK_SCORE_STEP = 1e-6
CHECK_ANALYTIC_TOL = 1e-12
CHECK_DESIGN_GRID_POINTS = 100001
CHECK_DESIGN_TOL = 1e-8

CSV_SIGNIFICANT_DIGITS = 9
ROC_FILE = "roc.csv"
ROC_WEAK_FILE = "roc_weak.csv"
PDK_FILE = "pdk.csv"
ASYMPTOTIC_FILE = "asymptotic.csv"
GTRACE_FILE = "gtrace.csv"
SCENARIO_FILE = "scenario.json"
META_FILE = "meta.json"


class NoiseType(str, Enum):
    """A str Enum to distinguish the supported symmetric noise families

    Attributes
    ----------
    GAUSSIAN: str
        Gaussian noise with standard deviation 'scale'
    LAPLACE: str
        Laplace noise with scale parameter 'scale'
    CAUCHY: str
        Cauchy noise with half width 'scale'
    GENGAUSS: str
        Generalized Gaussian noise with scale 'scale' and shape 'shape'
    """

    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    CAUCHY = "cauchy"
    GENGAUSS = "gengauss"


class StatisticKind(str, Enum):
    """A str Enum to select a fusion statistic

    Attributes
    ----------
    RAO: str
        The general Rao (score) test
    RAO_OPTIMIZED: str
        The Rao test specialized to zero quantizer thresholds
    GLRT: str
        The generalized likelihood ratio test
    HOMOG_GLRT_KL: str
        The homogeneous GLRT written as a scaled KL divergence
    HOMOG_RAO_TVD: str
        The homogeneous Rao test written as a scaled squared total variation distance
    """

    RAO = "rao"
    RAO_OPTIMIZED = "rao-opt"
    GLRT = "glrt"
    HOMOG_GLRT_KL = "homog-kl"
    HOMOG_RAO_TVD = "homog-tvd"


class AsymptoticLaw(str, Enum):
    WEAK_SIGNAL_CHI_SQ = "weak-signal-chi2"
    CLT_NORMAL = "clt-normal"


class HLaw(str, Enum):
    """A str Enum describing how observation gains are assigned from a mean SNR

    Attributes
    ----------
    FIXED: str
        Every sensor gets the gain matching the mean SNR
    UNIFORM: str
        Gains are drawn once per experiment from U(0, a)
    """

    FIXED = "fixed"
    UNIFORM = "uniform"


class Subcommand(str, Enum):
    DESIGN = "design"
    ROC = "roc"
    PDK = "pdk"
    ASYMPTOTIC = "asymptotic"
    GTRACE = "gtrace"
    VALIDATE = "validate"


class StreamPurpose(IntEnum):
    """An IntEnum namespacing the random streams derived from an experiment seed"""

    GAINS = 0
    NULL = 1
    ALTERNATIVE = 2


class ExitCode(IntEnum):
    SUCCESS = 0
    CONFIG_ERROR = 2
    NUMERICAL_ERROR = 3
    USAGE = 64
