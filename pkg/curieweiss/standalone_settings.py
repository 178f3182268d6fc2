"""
Minimal settings for running the ``curieweiss`` command outside a Django project.
"""

# flake8: noqa

SECRET_KEY = "curieweiss-standalone"
DEBUG = False
USE_TZ = True

INSTALLED_APPS = [
    "curieweiss",
]

DATABASES = {}

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "curieweiss",
    }
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "[%(asctime)s] %(levelname)s [%(name)s:%(lineno)s] %(message)s",
            "datefmt": "%d/%b/%Y %H:%M:%S",
        },
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "curieweiss": {
            "handlers": ["console"],
            "level": "WARNING",
        },
    },
}
