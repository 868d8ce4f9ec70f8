"""
Django settings for the dimredcore project.

The project has no web surface and no database: Django provides the
management-command CLI, the settings layer and the test runner for the
`reduction` app.

Every numerical default can be overridden from the environment (or a
`.env` file) so verification runs are reproducible from their report
headers.
"""
from pathlib import Path
import os
from dotenv import load_dotenv

load_dotenv()  # This loads our .env file

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Unused by the commands, but Django refuses to start without one.
SECRET_KEY = os.getenv('SECRET_KEY', 'dimredcore-insecure-local-only')

DEBUG = os.getenv('DEBUG', 'False') == 'True'


# Application definition

INSTALLED_APPS = [
    'reduction',
]

# Pure numerical library: nothing is persisted.
DATABASES = {}


# Numerical policy
# Relative thresholds, see reduction.linalg.Tolerance

RANK_CUTOFF = float(os.getenv('DIMRED_RANK_CUTOFF', '1e-10'))
PSD_CLIP = float(os.getenv('DIMRED_PSD_CLIP', '1e-10'))

# Absolute slack for the inequality oracles
NUMERICAL_SLACK = float(os.getenv('DIMRED_NUMERICAL_SLACK', '1e-9'))

# Nested-projector estimation of c
CONVERGENCE_TOL = float(os.getenv('DIMRED_CONVERGENCE_TOL', '1e-6'))


# Verification suite defaults

DEFAULT_TRIALS = int(os.getenv('DIMRED_DEFAULT_TRIALS', '1000'))
DEFAULT_SEED = int(os.getenv('DIMRED_DEFAULT_SEED', '42'))
DEFAULT_DIMS = [
    int(d) for d in os.getenv('DIMRED_DEFAULT_DIMS', '2,3,4,5,6,7,8').split(',') if d.strip()
]
WORKERS = int(os.getenv('DIMRED_WORKERS', '1'))


# Logging
# https://docs.djangoproject.com/en/5.0/topics/logging/

LOG_LEVEL = os.getenv('DIMRED_LOG_LEVEL', 'DEBUG' if DEBUG else 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'reduction': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Internationalization
# Output formats are locale-independent; these only keep Django quiet.

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True
