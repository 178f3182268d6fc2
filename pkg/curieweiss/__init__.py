"""Initialize the app"""

__version__ = "0.1.0"
__title__ = "Curie-Weiss"
