import importlib
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="module")
def generator():
    if ROOT not in sys.path:
        sys.path.insert(0, ROOT)
    return importlib.import_module("docs.generate_docs")


def test_every_page_renders(generator):
    for page in generator.PAGES:
        markdown = generator.render_page(page)
        assert markdown.startswith(("<span", "###"))


def test_docstring_sections_become_lists(generator):
    text = generator.process_docstring(generator.generate.__doc__)
    assert "__Parameters__" in text
    assert "- __sources_dir__: basestring" in text


def test_signatures_use_public_module_names(generator):
    import superbv
    assert generator.get_function_signature(superbv.parse_scalar, method=False) \
        == "superbv.algebra.parse_scalar(text, table)"
    assert generator.get_class_signature(superbv.Chart).startswith("superbv.atlas.Chart(name, table")
    with pytest.raises(ValueError):
        generator.clean_module_name("json.decoder")


def test_package_author_matches_manifest():
    import superbv
    with open(os.path.join(ROOT, "pyproject.toml")) as handle:
        manifest = handle.read()
    assert 'author = "{}"'.format(superbv.__author__) in manifest
    assert "@" not in superbv.__author__
