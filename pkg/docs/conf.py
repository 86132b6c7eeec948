# Sphinx configuration for the ToolForge documentation.
# sphinx-doc.org/en/master/usage/configuration.html


from collections.abc import Sequence
from datetime import date
from pathlib import Path
import sys
import tomllib


REPO_ROOT: Path = Path(__file__).parent.parent

# autodoc imports `toolforge` from the checkout, not from an installed wheel
sys.path.insert(0, str(REPO_ROOT))


# Project information
# -------------------

with open(file=REPO_ROOT / 'pyproject.toml', mode='rb') as f:
    pkg_meta: dict = tomllib.load(f)['tool']['poetry']

project: str = 'ToolForge'
author: str = pkg_meta['authors'][0]
copyright: str = f'{date.today().year}, {author}'  # pylint: disable=redefined-builtin
release: str = pkg_meta['version']
version: str = '.'.join(release.split('.')[:2])


# General configuration
# ---------------------

extensions: Sequence[str] = [
    'myst_parser',
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
]

exclude_patterns: Sequence[str] = ['_build', 'Thumbs.db', '.DS_Store']

source_suffix: dict[str, str] = {'.md': 'markdown', '.rst': 'restructuredtext'}

myst_heading_anchors: int = 3


# HTML output
# -----------

html_theme: str = 'press'
html_title: str = f'ToolForge {version}'


# API reference
# -------------

autosummary_generate: bool = True

autodoc_default_options: dict[str, str | bool] = {
    'member-order': 'bysource',
    'undoc-members': False,
    'show-inheritance': True,
    'class-doc-from': 'both',
}

# providers are optional at doc-build time
autodoc_mock_imports: Sequence[str] = ['openai', 'httpx']

autodoc_typehints: str = 'description'

intersphinx_mapping: dict[str, tuple[str, None]] = {
    'python': ('https://docs.python.org/3', None),
    'pydantic': ('https://docs.pydantic.dev/latest', None),
}
