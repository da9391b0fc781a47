"""
Django settings for the hypomix project.
"""

import math
import os
from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# The laboratory serves no requests; the key only satisfies Django's checks.
SECRET_KEY = config('SECRET_KEY', default='hypomix-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third party apps
    'rest_framework',

    # Local apps
    'apps.shears',
    'apps.ledger',
    'apps.simulation',
    'apps.experiments',
    'apps.runs',
]

# No models, so no database.
DATABASES = {}


# Internationalization
LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# REST Framework Settings (serializers only, used for config validation)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}


# Laboratory settings
HYPOMIX = {
    'VERSION': '0.1.0',
    'OUT': config('HYPOMIX_OUT', default=str(BASE_DIR / 'runs')),
    'WORKERS': config('HYPOMIX_WORKERS', default=1, cast=int),
    'GUARD_TOL': config('HYPOMIX_GUARD_TOL', default=1e-8, cast=float),
    'PHASE_CAP': config('HYPOMIX_PHASE_CAP', default=math.pi / 4, cast=float),
    'CERTIFY_DENSITY': config('HYPOMIX_CERTIFY_DENSITY', default=1e4, cast=float),
}

LOG_FILE = Path(config('HYPOMIX_LOG_FILE', default=str(BASE_DIR / 'logs' / 'hypomix.log')))

# Logging Configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
        'file': {
            'class': 'logging.FileHandler',
            'filename': LOG_FILE,
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'WARNING',
            'propagate': False,
        },
        'apps': {
            'handlers': ['console', 'file'],
            'level': config('HYPOMIX_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
    },
}

# Create logs directory if it doesn't exist
os.makedirs(LOG_FILE.parent, exist_ok=True)
