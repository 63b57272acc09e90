"""Sphinx configuration."""

import datetime
from pathlib import Path

import qkgeo


# get the location of the source directory
source_path = Path(__file__).resolve().parent

# configure locations of other configuration files
exclude_patterns = ['_build']

# configure project information
language = 'en'
project = 'qkgeo'
author = 'The qkgeo developers'
copyright = f'{datetime.datetime.now().year}, {author}'
release = version = qkgeo.__version__

# configure build information
nitpicky = False
master_doc = 'index'

# configure extensions
extensions = [
    'sphinx.ext.autosectionlabel',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
]
intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/reference/', None),
    'sympy': ('https://docs.sympy.org/latest/', None),
}
autosummary_generate = True
autosectionlabel_prefix_document = True
napoleon_use_rtype = False

# configure HTML information
html_theme = 'sphinx_rtd_theme'
