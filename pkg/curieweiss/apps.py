"""App Configuration"""

# Django
from django.apps import AppConfig

# Curie-Weiss App
from curieweiss import __version__


class CurieWeissConfig(AppConfig):
    """App Config"""

    name = "curieweiss"
    label = "curieweiss"
    verbose_name = f"Curie-Weiss Magnetization v{__version__}"
