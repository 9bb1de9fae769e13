# -*- coding: utf-8 -*-
#
# moment utilities documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.coverage',
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
    'sphinxcontrib.napoleon',
    'releases'
]

releases_github_path = 'moment-utilities/moment-utilities'

templates_path = ['_templates']
source_suffix = '.rst'

# Napoleon settings
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_include_private_with_doc = False
napoleon_include_special_with_doc = True
napoleon_use_admonition_for_examples = False
napoleon_use_admonition_for_notes = True
napoleon_use_admonition_for_references = False
napoleon_use_ivar = False
napoleon_use_param = True
napoleon_use_rtype = True

master_doc = 'index'

project = u'moment utilities'
copyright = u'2026, Moment Utilities Developers'

version = '1.0'
release = '1.0.0'

language = 'en'
exclude_patterns = ['_build']
add_function_parentheses = True
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'
html_short_title = "Moment Utilities Docs"
html_static_path = ['_static']
htmlhelp_basename = 'MomentUtilitiesdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [
    ('index', 'MomentUtilities.tex',
     u'Moment Utilities Documentation',
     u'Moment Utilities Developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'momentutilities', u'Moment Utilities Documentation',
     [u'Moment Utilities Developers'], 1)
]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    ('index', 'MomentUtilities',
     u'Moment Utilities Documentation',
     u'Moment Utilities Developers', 'MomentUtilities',
     'Moment estimators and their asymptotic tests',
     'Miscellaneous'),
]

on_rtd = os.environ.get('READTHEDOCS', None) == 'True'

if not on_rtd:  # only import and set the theme if we're building docs locally
    import sphinx_rtd_theme
    html_theme = 'sphinx_rtd_theme'
    html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
