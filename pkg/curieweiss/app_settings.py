"""App Settings"""

# Django
from django.conf import settings

# Incomplete gamma: series / continued fraction caps
GAMMA_MAX_ITERATIONS = getattr(settings, "CURIEWEISS_GAMMA_MAX_ITERATIONS", 500)
GAMMA_TOLERANCE = getattr(settings, "CURIEWEISS_GAMMA_TOLERANCE", 1e-15)

# Largest n for which a full log-weight table is allocated
MAX_TABLE_SIZE = getattr(settings, "CURIEWEISS_MAX_TABLE_SIZE", 50_000_000)

# 2^n enumeration limit for the brute-force oracle
BRUTE_FORCE_MAX_N = getattr(settings, "CURIEWEISS_BRUTE_FORCE_MAX_N", 20)

# |x| at which F and the tail functionals saturate
SATURATION_PROXY = getattr(settings, "CURIEWEISS_SATURATION_PROXY", 40.0)

# Ratio scans drop points whose denominator falls below this
DEEP_TAIL_FLOOR = getattr(settings, "CURIEWEISS_DEEP_TAIL_FLOOR", 1e-280)

TABLE_CACHE_TTL = getattr(settings, "CURIEWEISS_TABLE_CACHE_TTL", 60 * 60)  # 1 hour

MAX_WORKERS = getattr(settings, "CURIEWEISS_MAX_WORKERS", 4)

# Empirical constants of boundedness checks must stay below this
CONSTANT_CEILING = getattr(settings, "CURIEWEISS_CONSTANT_CEILING", 25.0)
