# Copyright 2024 The frontlab developers.
# SPDX-License-Identifier: MPL-2.0
import inspect

import pytest

from frontlab import exceptions
from frontlab.exceptions import (
    ConfigSchemaError,
    DemoFailureError,
    FrontlabError,
    InvariantViolationError,
    NonexistenceError,
    NumericalFailureError,
    UnknownKeyError,
)


@pytest.mark.parametrize(
    "error, code",
    [
        (FrontlabError, 1),
        (ConfigSchemaError, 2),
        (UnknownKeyError, 2),
        (NumericalFailureError, 3),
        (NonexistenceError, 3),
        (DemoFailureError, 3),
        (InvariantViolationError, 4),
    ],
)
def test_exit_codes(error, code):
    assert error.exit_code == code
    assert error("message").exit_code == code


def test_diagnostics_are_copied():
    diagnostics = {"c": 0.5}
    error = NonexistenceError("no front", diagnostics=diagnostics)
    diagnostics["c"] = 1.0
    assert error.diagnostics == {"c": 0.5}
    assert str(error) == "no front"
    assert NonexistenceError("no front").diagnostics == {}


def test_every_error_is_documented_and_bears_an_exit_code():
    members = inspect.getmembers(exceptions, inspect.isclass)
    classes = [obj for _, obj in members if obj.__module__ == exceptions.__name__]
    for cls in classes:
        assert cls.__doc__
        if issubclass(cls, FrontlabError) and cls is not FrontlabError:
            assert cls.exit_code in (2, 3, 4)
