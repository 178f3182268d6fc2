# Configure Django for plain pytest runs, mirroring tox.ini / runtests.py
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "testproject.settings.local")
django.setup()
