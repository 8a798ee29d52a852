"""
Django settings for the wsd project (word sense disambiguation for noun groups).

Settings are read from the environment (and a local .env file) so that the
management commands can be pointed at different taxonomies and IC tables
without editing code.
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv(
    "SECRET_KEY", "wsd-dev-3k#9v!q2m0x@f7c=r1t8z&u5j4n6b*h0p2s9w"
)

DEBUG = os.getenv("DEBUG", "False") == "True"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "taxonomy",
    "corpus",
    "disambiguation",
    "evaluation",
]

# Nothing is persisted to a database; the test runner only uses SimpleTestCase.
DATABASES = {}

TEST_DATA_DIR = os.path.join(BASE_DIR, "testdata")


# WSD configuration - defaults for the management commands
WSD_TAXONOMY = os.getenv("WSD_TAXONOMY", "")
WSD_IC_PATH = os.getenv("WSD_IC_PATH", "")
WSD_LOG_BASE = os.getenv("WSD_LOG_BASE", "e")
WSD_CREDIT_TIES = os.getenv("WSD_CREDIT_TIES", "False") == "True"
WSD_EXTEND_ANCESTORS = os.getenv("WSD_EXTEND_ANCESTORS", "False") == "True"
WSD_SEED = int(os.getenv("WSD_SEED", "0"))
WSD_BASELINE_RUNS = int(os.getenv("WSD_BASELINE_RUNS", "10"))
WSD_MIN_CONFIDENCE = int(os.getenv("WSD_MIN_CONFIDENCE", "2"))

# Optional real resources (WordNet 3.0 dict dir, large English corpus)
WSD_WORDNET_DIR = os.getenv("WSD_WORDNET_DIR", "")
WSD_CORPUS_PATH = os.getenv("WSD_CORPUS_PATH", "")


# Logging

WSD_LOG_LEVEL = os.getenv("WSD_LOG_LEVEL", "WARNING")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        app: {
            "handlers": ["console"],
            "level": WSD_LOG_LEVEL,
            "propagate": False,
        }
        for app in INSTALLED_APPS
    },
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
