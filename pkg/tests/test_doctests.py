import doctest
import importlib

import pytest

MODULES = ["clifford", "moebius", "diffops", "specfun", "eisenstein", "fourier", "cli"]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    module = importlib.import_module(f"hypermonogenic.{name}")
    result = doctest.testmod(module, optionflags=doctest.NORMALIZE_WHITESPACE | doctest.ELLIPSIS)
    assert result.failed == 0
