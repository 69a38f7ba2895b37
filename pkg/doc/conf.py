# -*- coding: utf-8 -*-
#
# Machine Scientist documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import sys
import os

# The package lives one level up.
sys.path.insert(0, os.path.abspath('..'))

from scientist import __version__  # noqa: E402

# -- General configuration -----------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.todo',
    'sphinx.ext.napoleon',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Machine Scientist'
copyright = u'2026, the Machine Scientist authors'

version = '.'.join(__version__.split('.')[:2])
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'default'
htmlhelp_basename = 'MachineScientistdoc'

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index', 'scientist', u'Machine Scientist Documentation',
     [u'the Machine Scientist authors'], 1)
]
