import importlib
import inspect

import pytest

MODULES = [
    "pyescher.symcore",
    "pyescher.uio",
    "pyescher.chromo",
    "pyescher.ghom",
    "pyescher.escher",
    "pyescher.report",
    "pyescher.suites",
    "pyescher.sweep",
]


def annotated(module):
    for obj in vars(module).values():
        if getattr(obj, "__module__", None) != module.__name__:
            continue
        if inspect.isfunction(inspect.unwrap(obj)):
            yield inspect.unwrap(obj)
        elif inspect.isclass(obj):
            for member in vars(obj).values():
                member = getattr(member, "__func__", member)
                if inspect.isfunction(member):
                    yield member


@pytest.mark.parametrize("name", MODULES)
def test_generic_annotations_are_not_quoted(name):
    # only bare forward references to classes may stay as strings
    for func in annotated(importlib.import_module(name)):
        for hint in func.__annotations__.values():
            if isinstance(hint, str):
                assert "[" not in hint, f"{func.__qualname__}: {hint!r}"
