# backend/config.py
import os

from dotenv import load_dotenv

load_dotenv()

# Enumeration guardrails
MAX_ENUM_Q = int(os.getenv("CANONIX_MAX_Q", "64"))
CENSUS_MAX_Q = int(os.getenv("CANONIX_CENSUS_MAX_Q", "3"))

# Field construction and extension policy
MAX_EXTENSION_DEGREE = int(os.getenv("CANONIX_MAX_EXTENSION_DEGREE", "12"))
# largest field a caller may name; internal extensions only obey the degree cap
MAX_FIELD_ORDER = int(os.getenv("CANONIX_MAX_FIELD_ORDER", str(2 ** 24)))
EXHAUSTIVE_ROOT_LIMIT = int(os.getenv("CANONIX_EXHAUSTIVE_ROOT_LIMIT", "4096"))

# full census sweeps keep one flag per matrix, q^8 of them
MAX_CENSUS_MATRICES = int(os.getenv("CANONIX_MAX_CENSUS_MATRICES", str(2 ** 24)))

# Randomized suites
DEFAULT_SEED = int(os.getenv("CANONIX_SEED", "1729"))
DEFAULT_SAMPLES = int(os.getenv("CANONIX_SAMPLES", "200"))

WARM_FIELDS = [name.strip() for name in os.getenv("CANONIX_WARM_FIELDS", "2^1,3^1,7^1").split(",") if name.strip()]

IS_PRODUCTION = os.getenv("FLASK_ENV") == "production" or os.getenv("ENVIRONMENT") == "production"
