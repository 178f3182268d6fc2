"""
Test settings
"""

# flake8: noqa

########################################################
# local.py settings
# Every setting in base.py can be overloaded by redefining it here.

from .base import *

PACKAGE = "curieweiss"

SECRET_KEY = "curieweiss-test-only-not-secret"
DEBUG = False

# Add any additional apps to this list.
INSTALLED_APPS += [
    PACKAGE,
]

# Quiet under test
LOGGING["loggers"]["curieweiss"]["level"] = "WARNING"

CURIEWEISS_MAX_WORKERS = 2

#######################################
# Add any custom settings below here. #
#######################################
