from .base import *

DEBUG = False

# Sweeps on the batch hosts write to a mounted volume
RESULTS_DIR = os.getenv("CSS_RESULTS_DIR", "/data/results")

LOGGING["loggers"]["apps"]["level"] = os.getenv("CSS_LOG_LEVEL", "WARNING")
