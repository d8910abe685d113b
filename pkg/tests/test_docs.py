#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from pathlib import Path
import re
import runpy

ROOT = Path(__file__).resolve().parents[1]
SOURCE = ROOT / "docs" / "source"


def test_docs_config_matches_package():
    """Assert the Sphinx config names real paths and the package version."""

    conf = runpy.run_path(str(SOURCE / "conf.py"))
    manifest = (ROOT / "pyproject.toml").read_text(encoding="utf-8")
    version = re.search(r'^version = "([^"]+)"', manifest, re.M).group(1)

    assert conf["project"] == "montest"
    assert conf["release"] == version
    assert conf["extensions"] == ["sphinx.ext.autodoc", "numpydoc"]
    for static in conf["html_static_path"]:
        assert (SOURCE / static).is_dir()


def test_docs_index_names_existing_modules():
    """Assert every automodule in the index resolves to a source file."""

    index = (SOURCE / "index.rst").read_text(encoding="utf-8")
    modules = re.findall(r"^\.\. automodule:: (\S+)$", index, re.M)

    assert modules
    for module in modules:
        path = ROOT.joinpath(*module.split("."))
        assert path.with_suffix(".py").is_file() or path.is_dir(), module
