# comparisons
ABS_TOL = 1e-10
REL_TOL = 1e-9

# domains
MEMBERSHIP_TOLERANCE = 1e-9
INTERIOR_MARGIN = 1e-8
WEIGHT_SUM_TOLERANCE = 1e-12
JOINT_ROW_TOLERANCE = 1e-12
JOINT_SUM_TOLERANCE = 1e-10
SYMMETRY_TOLERANCE = 1e-10

# generators
GRADIENT_CHECK_TOLERANCE = 1e-6
STRICT_CONVEXITY_SEPARATION = 1e-3

# divergences
DIVERGENCE_NONNEGATIVITY_SLACK = 1e-12

# certifier
DEFAULT_CERTIFY_TOL = 1e-8
DEFAULT_TRIALS = 1000
DEFAULT_N_RANGE = (1, 8)
DEFAULT_SAMPLER_RADIUS = 3.0
PROBE_RADIUS_FACTOR = 0.1
DIAGNOSTIC_POINTS = 8
HOMOGENEITY_SCALARS = (-2.0, -0.5, 0.0, 0.5, 2.5)
ODDNESS_TOLERANCE = 1e-9
HOMOGENEITY_TOLERANCE = 1e-9
LINEARITY_TOLERANCE = 1e-9
AFFINE_FIT_TOLERANCE = 1e-8
H2_CONSISTENCY_TOLERANCE = 1e-8
GRAD_RECOVERY_TOLERANCE = 1e-7
CENTROID_MINIMIZER_SLACK = 1e-12
CENTROID_MINIMIZER_PROBES = 100
COUNTEREXAMPLE_BISECTION_DEPTH = 6

# clustering
DEFAULT_MAX_ITERS = 100
DEFAULT_CLUSTER_REL_TOL = 1e-10
DEFAULT_RESTARTS = 10
DUAL_LOSS_TOLERANCE = 1e-10

# local metric
DEFAULT_METRIC_SCALES = (1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4, 1.5625e-4, 1e-4)

# reports
FLOAT_SIGNIFICANT_DIGITS = 17

# exit codes
EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

# registries
GENERATOR_NAMES = ("sqnorm", "mahalanobis", "negentropy", "negentropy-orthant")
DIVERGENCE_NAMES = (
    "bregman-of-generator",
    "abs-distance",
    "kl",
    "generalized-kl",
    "squared-mahalanobis",
    "scaled-bregman",
    "bregman-plus-quartic",
)
DOMAIN_NAMES = ("full_space", "positive_orthant", "simplex")
