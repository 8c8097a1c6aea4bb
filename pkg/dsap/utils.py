from collections.abc import Hashable
from functools import update_wrapper

from jinja2 import Environment, PackageLoader


# inspired from https://wiki.python.org/moin/PythonDecoratorLibrary
def memoized(func):
    _cache = {}

    def _deco(*args, **kwargs):
        if 'clear_cache' in kwargs or 'clear_cache_only' in kwargs:
            _cache.clear()
            if 'clear_cache_only' in kwargs:
                return  # we don't care about the output
            del kwargs['clear_cache']
        if not isinstance(args, Hashable):
            return func(*args, **kwargs)
        if args in _cache:
            return _cache[args]
        else:
            value = func(*args, **kwargs)
            _cache[args] = value
            return value

    return update_wrapper(_deco, func)


@memoized
def jinja_env(package_name='dsap', package_path='templates'):
    return Environment(loader=PackageLoader(package_name, package_path),
                       trim_blocks=True, lstrip_blocks=True,
                       keep_trailing_newline=True)


def split_pairs(values, sep='='):
    """
    Parse a list of "key=value" strings into an ordered dict, used by the
    CLI for --target, --label-map and --rename

    :param values: list[str]
    :param sep: str
    :return: dict[str,str]
    """
    pairs = {}
    for value in values:
        if sep not in value:
            raise ValueError('expected key%svalue, got "%s"' % (sep, value))
        key, val = value.split(sep, 1)
        pairs[key.strip()] = val.strip()
    return pairs


def split_list(value):
    """
    Split a comma separated CLI value, ignoring empty items

    :param value: str|None
    :return: list[str]
    """
    if not value:
        return []
    return [item.strip() for item in value.split(',') if item.strip()]
