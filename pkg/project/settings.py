from pathlib import Path
import os
from decouple import config
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(os.path.join(BASE_DIR, ".env"))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='subval-dev-key-not-for-deployment')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    #####our APPS #######
    'valcore',
    'checks',
    'generator',
    'assignment',
    'speckled',
    'geometry',
    'auction',
    'cli',
]

########## Using REST framework for validating configs and reports
INSTALLED_APPS += ['rest_framework']


# Database
# Nothing is persisted; sqlite only satisfies the test runner.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


##----- Valuation limits ------

SUBVAL_DENSE_LIMIT = config('SUBVAL_DENSE_LIMIT', default=20, cast=int)
SUBVAL_LAZY_LIMIT = config('SUBVAL_LAZY_LIMIT', default=24, cast=int)
SUBVAL_ITERATION_CAP = config('SUBVAL_ITERATION_CAP', default=10**6, cast=int)
SUBVAL_ORACLE_TRIALS = config('SUBVAL_ORACLE_TRIALS', default=200, cast=int)
SUBVAL_LOCAL_CHECK_SAMPLES = config('SUBVAL_LOCAL_CHECK_SAMPLES', default=10**6, cast=int)
SUBVAL_BRUTE_FORCE_LIMIT = config('SUBVAL_BRUTE_FORCE_LIMIT', default=6, cast=int)
SUBVAL_AUCTION_MAX_ROUNDS = config('SUBVAL_AUCTION_MAX_ROUNDS', default=10**5, cast=int)


##----- Celery (batch generation) ------

CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='redis://localhost:6379/0')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='redis://localhost:6379/1')
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'


##----- Logging ------

SUBVAL_LOG_LEVEL = config('SUBVAL_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': SUBVAL_LOG_LEVEL,
            'propagate': False,
        }
        for app in (
            'valcore', 'checks', 'generator', 'assignment',
            'speckled', 'geometry', 'auction', 'cli',
        )
    },
}
