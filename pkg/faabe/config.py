import os
from pathlib import Path

# =========================
# Path & File Settings
# =========================
REPO_ROOT = Path(__file__).resolve().parent.parent

# Benchmark CSVs live here as <name>.csv, manifests under manifests/<name>.manifest
DATA_DIR = Path(os.environ.get("FAABE_DATA_DIR", str(REPO_ROOT / "data")))
MANIFEST_DIR = DATA_DIR / "manifests"

# Root of results/<dataset>/<seed>/... and results/summary.*
RESULTS_DIR = Path(os.environ.get("FAABE_RESULTS_DIR", str(REPO_ROOT / "results")))

# =========================
# Benchmark Datasets
# =========================
DATASETS = [
    "cocomo81",
    "desharnais",
    "china",
    "albrecht",
    "kemerer",
    "maxwell",
]

# Tokens treated as a missing cell (compared case-insensitively, after strip)
MISSING_TOKENS = ["", "?", "na", "n/a", "nan"]

# =========================
# Feature Selection
# =========================
CORR_THRESHOLD = 0.5                   # |Pearson r| with effort needed to keep a numeric/ordinal feature

# =========================
# Analogy-Based Estimation
# =========================
SIMILARITY = "euclidean"               # "euclidean" or "manhattan"; used by single runs
SUITE_SIMILARITIES = ["euclidean", "manhattan"]  # Kinds a suite run reports unless its config says otherwise
SOLUTION = "iwm"                       # "closest", "mean", "median" or "iwm"
K_ANALOGIES = 3                        # Number of analogies pooled by the solution function
DELTA = 0.0001                         # Keeps similarity finite for identical projects

# =========================
# Firefly Algorithm
# =========================
POPULATION = 20                        # N fireflies
MAX_ITERATIONS = 50                    # T
GAMMA = 1.0                            # Light absorption coefficient
ALPHA = 0.2                            # Randomness scale
ALPHA_DECAY = 0.97                     # alpha <- ALPHA_DECAY * alpha after every iteration
BETA0 = 1.0                            # Attractiveness at r = 0
FITNESS_EPSILON = 1e-9                 # brightness = 1 / (MMRE_train + FITNESS_EPSILON)
SEED_ALL_ONES = True                   # Put the unweighted vector into the initial population

# =========================
# Evaluation Protocol
# =========================
TEST_FRACTION = 0.33                   # Share of projects held out for testing (rounded half-up)
BASIC_FRACTION = 0.5                   # Share of the remainder that becomes the basic (case-base) subset
STRICT_BASIC = False                   # True: test projects only see basic projects, not basic + train

# =========================
# Experiment Runs
# =========================
REPEATS = 10                           # Number of seeds per dataset
BASE_SEED = 0                          # Seeds are BASE_SEED, BASE_SEED + 1, ...
JOBS = 1                               # Worker processes for suite runs (results do not depend on it)

# =========================
# Output & Display
# =========================
SIGNIFICANT_FIGURES = 4                # Text tables only; JSON keeps full precision
WRITE_PLOT = False                     # Also write results/summary.png

# =========================
# Debugging & Verbose Options
# =========================
VERBOSE = False                        # DEBUG logging, including one line per FA iteration
LOG_TO_FILE = True                     # Mirror log output into LOG_DIR
LOG_DIR = Path(os.environ.get("FAABE_LOG_DIR", str(REPO_ROOT / "logs")))
