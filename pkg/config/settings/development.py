from .base import *

DEBUG = True

# Show sampler diagnostics on the console while developing
LOGGING["handlers"]["console"]["level"] = os.getenv("CSS_CONSOLE_LOG_LEVEL", "INFO")
