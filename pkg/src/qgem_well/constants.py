# Default physical point: m = 1e-17 kg, L = 50 um, d = 1 um
DEFAULT_MASS_KG = 1e-17
DEFAULT_WELL_WIDTH_M = 50e-6
DEFAULT_SEPARATION_M = 1e-6

# Bath defaults give kappa2 ~ 1.0 and kappa1 ~ 0.4 at the default point
DEFAULT_TEMPERATURE_K = 1e-3
DEFAULT_DAMPING_PER_S = 7e-25
DEFAULT_CUTOFF_PER_S = 1e8

# Feasibility defaults
DEFAULT_INITIAL_SEPARATION_M = 50e-6
DEFAULT_APPROACH_VELOCITY_M_PER_S = 1e-6
DEFAULT_INTERACTION_RANGE_M = 100e-9

# Thresholds, interpreted as "much larger" / "much smaller"
ADIABATIC_RATIO_THRESHOLD = 100.0
KB_PRODUCT_THRESHOLD = 0.1
DENSITY_RATIO_THRESHOLD = 10.0
CONVERGENCE_THRESHOLD = 1e-4

# Basis sizes
DESK_NMAX = 60
FULL_SCALE_NMAX = 100
DEFAULT_LEVELS = 6
DESK_SPECTRUM_LEVELS = 200
FULL_SCALE_SPECTRUM_LEVELS = 1000
DEFAULT_NMAX_LADDER = (20, 40, 60, 80, 100)
DEFAULT_DECOHERENCE_TRUNCATION = 8

# Sweep grids
DEFAULT_DELTAS = (2.0, 1.0, 0.5, 0.2, 0.1, 0.05, 0.02)
DEFAULT_MASS_MIN_KG = 1e-18
DEFAULT_MASS_MAX_KG = 2e-17
DEFAULT_WIDTH_MIN_M = 25e-6
DEFAULT_WIDTH_MAX_M = 150e-6
DEFAULT_GRID_POINTS = 24
DEFAULT_MODE_MASSES_KG = (1e-17, 2e-17, 3e-17)

# Quadrature
DEFAULT_QUADRATURE_ACCURACY = 1e-10
MAX_QUADRATURE_ACCURACY = 1e-6
MIN_NODES_PER_HALF_PERIOD = 8
MIN_NODES_PER_PANEL = 12
MAX_NODES_PER_PANEL = 32
MAX_REFINEMENTS = 6
TABLE_ROW_BLOCK = 16
JTABLE_FORMAT_VERSION = "1.0"
JTABLE_CACHE_MAGIC = "QGEMJT"
JTABLE_DELTA_DECIMALS = 12

# Spectral
DENSE_DIMENSION_LIMIT = 6000
RESIDUAL_TOLERANCE = 1e-8
TAIL_WEIGHT_TOLERANCE = 1e-6
TAIL_FRACTION = 0.1
SYMMETRY_TOLERANCE = 1e-10
EIGSH_TOLERANCE = 1e-12
EIGSH_ATTEMPTS = 3

# Entanglement
NORMALIZATION_TOLERANCE = 1e-8
SCHMIDT_CUTOFF = 1e-14
MIN_GRID_RESOLUTION = 16
DEFAULT_GRID_RESOLUTION = 101

# Decoherence
STABILITY_LIMIT = 0.1
TRACE_DRIFT_LIMIT = 1e-6
PURITY_EXCESS_LIMIT = 1e-9
POSITIVITY_FLOOR = -1e-8
MIN_FIT_SAMPLES = 50
MIN_PURITY_DROP = 0.01
DEFAULT_TRANSIENT_FRACTION = 0.1
DEFAULT_TIME_STEP = 1e-3
DEFAULT_STEPS = 2000

# Output
CSV_SCHEMA_VERSION = "1.0"
CSV_LEVELS = "levels.csv"
CSV_SOLVE = "solve.csv"
CSV_DISTANCE = "distance.csv"
CSV_ENTROPY = "entropy.csv"
CSV_GRID = "grid.csv"
CSV_CONVERGE = "converge.csv"
CSV_DECOHERE = "decohere.csv"
CSV_FEASIBILITY = "feasibility.csv"
CSV_WAVEFUNCTION = "wavefunction.csv"
CSV_MODES = "modes.csv"
DEFAULT_OUT_DIR = "out"
DEFAULT_CACHE_DIR = ".qgem_cache"
TIMESTAMP_PREFIX = "# generated_at="
DECOHERENCE_CAVEAT = (
    "valid for a large environment, extremely weak system-bath coupling and a quickly decaying bath memory"
)

# Logging
LOG_FILE_QGEM = "qgem_well.log"
LOGGING_FILE = "logging.ini"

# Exit codes
EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERIC_FAILURE = 2
EXIT_UNEXPECTED_FAILURE = 3
