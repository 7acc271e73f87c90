# Sphinx configuration for regret-toolbox.
# Project metadata is read from pyproject.toml so the two never drift apart.
from datetime import datetime
import os
import sys
import tomllib

with open("../../pyproject.toml", "rb") as _f:
    _project = tomllib.load(_f)['project']

project = _project['name']
release = _project['version']
license = _project['license']
author = ', '.join(d['name'] for d in _project['authors'])
copyright = f"{datetime.now().year}, {author}"

sys.path.insert(0, os.path.abspath('../..'))  # Import RegretToolbox from the repository root.

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
    'm2r2',  # README.md is included through mdinclude.
]

autodoc_member_order = 'bysource'
templates_path = ['_templates']
exclude_patterns = []
source_suffix = ['.rst', '.md']

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
