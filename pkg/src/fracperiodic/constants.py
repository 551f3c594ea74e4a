import math

TWO_PI = 2.0 * math.pi

# Fields
DEFAULT_N_MODES = 128
DEFAULT_N_PTS = 512
ROUND_TRIP_TOL = 1e-12
CONSTANT_FIELD_TOL = 1e-12

# Exponents
BOOTSTRAP_MAX_STEPS = 1000
THRESHOLD_REL_TOL = 1e-12

# Kernel
KERNEL_REL_TOL = 1e-13
KERNEL_MIN_TERMS = 8
KERNEL_MAX_TERMS = 2 ** 20
KERNEL_CACHE_SIZE = 32
HURWITZ_AGREEMENT_TOL = 1e-10

# Operators
QUADRATURE_RESOLUTION = 2048
NYQUIST_FACTOR = 4
CONVEXITY_TOL = 1e-6
CONVEXITY_STEP = 1e-3
CONVEXITY_FIELDS = 20

# Linear
EIGEN_TOL = 1e-3
MAX_PRINCIPLE_TOL = 1e-8

# Variational
MINIMIZE_TOL = 1e-6
MINIMIZE_MAX_ITER = 20000
POLISH_THRESHOLD = 1e-3
RESIDUAL_TOL = 1e-6
MANIFOLD_TOL = 1e-8
ITERATE_BOUND = 1e6
CERTIFICATE_MARGIN = 1e-12
TEST_FIELD_EPS = 0.3
VARIATIONAL_N_MODES = 256
LINKING_N_MODES = 16
LAMBDA0_BISECTION_TOL = 1e-3
LINKING_SAMPLES = 500
LINKING_SUBSPACE_SAMPLES = 100
LINKING_OUTER_SAMPLES = 100
LINKING_SUBSPACE_TOL = 1e-10

# Newton and continuation
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 30
BRANCH_RESIDUAL_TOL = 1e-8
PREDICTOR_AMPLITUDE = 1e-3
STEP_MIN = 1e-4
STEP_MAX = 5e-2
STEP_INITIAL = 1e-2
BRANCH_MAX_STEPS = 400
BRANCH_MAX_AMPLITUDE = 0.3
BRANCH_N_MODES = 64
AUTOCORRELATION_SAMPLES = 1024

# Problems
GLOBAL_RESIDUAL_TOL = 1e-5
N_CHECK_POINTS = 32
RICHARDSON_TOL = 1e-6
PERIOD_SCALING_CHECK = 2.0 * TWO_PI
SOLITON_DOMAIN = 40.0
SOLITON_CHECK_RADIUS = 10.0
LARGE_PERIODS = (4.0 * TWO_PI, 8.0 * TWO_PI, 16.0 * TWO_PI)
MIN_BO_ORDER = 1.0 / 6.0
SMALL_AMPLITUDE_TARGET = 0.05
PERIOD_CLOSENESS = 0.05
SCAN_MAX_AMPLITUDE = 0.9
SIGN_CHANGING_PERIOD = 3.0 * math.pi

# Output
CSV_DELIMITER = ','
JSON_INDENT = 2
HDF5_GROUP_SEPARATOR = '/'
LOCK_TIMEOUT = 20
