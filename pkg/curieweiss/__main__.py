"""``python -m curieweiss ...`` runs the management command without a project"""

# Standard Library
import os
import sys


def main(argv=None):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "curieweiss.standalone_settings")

    # Django
    from django.core.management import execute_from_command_line

    argv = list(sys.argv[1:] if argv is None else argv)
    execute_from_command_line(["curieweiss", "curieweiss", *argv])


if __name__ == "__main__":
    main()
