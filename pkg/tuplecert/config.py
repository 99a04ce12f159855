import os
from dotenv import load_dotenv

# Load the environment variables
load_dotenv()

# Where run reports are recorded (HTTP service, or CLI with --record)
DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///./tuplecert.db")

# Rewrite engine: maximum path length explored per derivation
DEFAULT_BUDGET = int(os.getenv("TUPLECERT_BUDGET", "10000"))

# Sampling grid for numeric comparisons and disproofs: every component in 0..GRID_MAX
GRID_MAX = int(os.getenv("TUPLECERT_GRID_MAX", "4"))

# Interpretation search
DEFAULT_KMAX = int(os.getenv("TUPLECERT_KMAX", "2"))
DEFAULT_COEFF_BOUND = int(os.getenv("TUPLECERT_COEFF_BOUND", "3"))
DEFAULT_TIME_BUDGET = float(os.getenv("TUPLECERT_TIME_BUDGET", "60"))

# Max atoms case-split by the polynomial comparison
SPLIT_CAP = int(os.getenv("TUPLECERT_SPLIT_CAP", "4"))

LOG_CONFIG = os.getenv(
    "TUPLECERT_LOG_CONFIG",
    os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "logging.ini"),
)
