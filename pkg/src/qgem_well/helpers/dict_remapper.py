# Standard Library
from collections.abc import Mapping
from functools import reduce
from typing import Any


def _reducer(d, key):
    return d.get(key) if isinstance(d, Mapping) else None


def get_value_from_nested_dictionary(dictionary: Mapping, *keys: str) -> Any:
    return reduce(_reducer, keys, dictionary)


def create_nested_dictionary(dictionary: dict, keys: list[str], value: Any):
    """
        Set value at the nested location named by keys, creating intermediate dicts
    :param dictionary:
        Dictionary updated in place
    :param keys:
        Path of keys, outermost first
    :param value:
        Value stored at the leaf
    """
    for key in keys[:-1]:
        child = dictionary.get(key)
        if not isinstance(child, dict):
            child = {}
            dictionary[key] = child
        dictionary = child
    dictionary[keys[-1]] = value


def flatten_to_dotted_keys(dictionary: Mapping, prefix: str = "") -> dict[str, Any]:
    """
        Flatten nested mappings into a single level keyed by dotted paths,
        {"physical": {"mass": 1}} becomes {"physical.mass": 1}
    """
    flat = {}
    for key, value in dictionary.items():
        dotted = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, Mapping):
            flat.update(flatten_to_dotted_keys(value, dotted))
        else:
            flat[dotted] = value
    return flat


def nest_dotted_keys(flat: Mapping[str, Any]) -> dict:
    nested = {}
    for dotted, value in flat.items():
        create_nested_dictionary(nested, dotted.split("."), value)
    return nested
