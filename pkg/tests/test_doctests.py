import doctest
import importlib

import pytest

MODULES = ["core", "auc_metrics", "sweep2d", "solver_nd", "oracles", "hemisphere",
           "data_io", "baselines", "experiments", "datasets", "cli"]


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    module = importlib.import_module(f"exactauc.{name}")
    result = doctest.testmod(module, optionflags=doctest.NORMALIZE_WHITESPACE)
    assert result.failed == 0
