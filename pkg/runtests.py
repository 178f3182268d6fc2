# pylint: skip-file
# Standard Library
import os
import sys

if __name__ == "__main__":
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "testproject.settings.local")
    try:
        # Django
        from django.core.management import execute_from_command_line
    except ImportError as ex:
        raise ImportError(
            "Couldn't import Django. Install the test requirements "
            "(pip install -e .[test]) before running the suite."
        ) from ex
    execute_from_command_line([sys.argv[0], "test", *sys.argv[1:]])
