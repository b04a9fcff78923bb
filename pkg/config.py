import os
import logging

from dotenv import load_dotenv

# Pick up a local .env before reading any setting
load_dotenv()

# Prevent duplicate logging
for handler in logging.root.handlers[:]:
    logging.root.removeHandler(handler)

LOG_LEVEL = os.environ.get("BETAFULL_LOG_LEVEL", "WARNING").upper()

# Configure logging with a single handler (stderr, so stdout stays scriptable)
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.WARNING),
    format='%(asctime)s | %(levelname)s:%(name)s:%(message)s',
    handlers=[logging.StreamHandler()]
)

# Classification
DEFAULT_DEPTH = int(os.environ.get("BETAFULL_DEPTH", "64"))

# Display of exact numbers
DECIMAL_PLACES = int(os.environ.get("BETAFULL_DECIMAL_PLACES", "12"))

# Refinement limits
COMPOSE_STEP_CAP = int(os.environ.get("BETAFULL_COMPOSE_STEP_CAP", "10000"))
REFINE_CAP = int(os.environ.get("BETAFULL_REFINE_CAP", "4096"))

# Cell intervals kept per process across all contexts
CELL_CACHE_SIZE = int(os.environ.get("BETAFULL_CELL_CACHE_SIZE", "4096"))

# Random table generation: lockstep attempts before falling back to a uniform depth
RANDOM_TABLE_ATTEMPTS = int(os.environ.get("BETAFULL_RANDOM_TABLE_ATTEMPTS", "200"))

# Catalog and sample tables
DATA_DIR = os.environ.get(
    "BETAFULL_DATA_DIR",
    os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
)
CATALOG_FILE = os.path.join(DATA_DIR, "contexts.json")
TABLES_DIR = os.path.join(DATA_DIR, "tables")

# Output formats accepted by the CLI
OUTPUT_FORMATS = ["text", "json", "dot"]
