# -*- coding: utf-8 -*-
#
# lutool documentation build configuration file.
#
# Only the settings the build uses are listed; everything else keeps the
# Sphinx default.

import os
import sys

# autodoc imports the package from the source tree
sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
]
autodoc_member_order = 'bysource'

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build']

project = 'lutool'
copyright = '2026, lutool developers'
author = 'lutool developers'
version = '1.0'
release = '1.0.0'

pygments_style = 'sphinx'
html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'lutooldoc'

man_pages = [
    (master_doc, 'lutool',
     'Local unitary equivalence of multipartite pure states',
     [author], 1),
]
