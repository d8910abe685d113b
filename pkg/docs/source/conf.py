# Sphinx configuration for the montest API reference.
import os
import sys

sys.path.insert(0, os.path.abspath("../../"))

project = "montest"
author = "montest developers"
copyright = "2021, montest developers"
release = "0.1.0"

extensions = ["sphinx.ext.autodoc", "numpydoc"]

html_theme = "alabaster"
html_static_path = ["_static"]
