"""
Package logging, silent until the CLI (or a library user) turns it on

Computations log what they skip or decide on their own (excluded classes,
majority vote ties, malformed stream events); the same facts are carried in
the results, logs never end up in a payload.
"""

import logging

LOGGING_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
FILE_LOGGING_FORMAT = '%(asctime)s,%(levelname)s,%(name)s,%(message)s'
SILENT = 60

logging.captureWarnings(True)
_nh = logging.NullHandler()

_logger = logging.getLogger('dsap')
_logger.addHandler(_nh)
_logger.setLevel(SILENT)
_logger.propagate = False


def get_logger(name=None, parent=_logger):
    if name:
        return parent.getChild(name)
    return parent


def verbosity_level(count):
    """
    Map the number of -v flags to a level: -v warnings, -vv info, -vvv debug
    """
    return max(logging.DEBUG, logging.ERROR - count * 10)


def set_log_level(lvl):
    # stderr handler, added once
    if _nh in _logger.handlers:
        _logger.removeHandler(_nh)
        _handler = logging.StreamHandler()
        _handler.setFormatter(logging.Formatter(LOGGING_FORMAT))
        _logger.addHandler(_handler)
    _logger.setLevel(lvl)


def set_log_file(filename):
    _logger.removeHandler(_nh)
    _file_handler = logging.FileHandler(filename, encoding='utf-8')
    _file_handler.setFormatter(logging.Formatter(FILE_LOGGING_FORMAT))
    _logger.addHandler(_file_handler)


def reset_logging():
    """
    Close every handler set up by set_log_level/set_log_file and go back to
    the silent default
    """
    for handler in list(_logger.handlers):
        if handler is _nh:
            continue
        _logger.removeHandler(handler)
        handler.close()
    if _nh not in _logger.handlers:
        _logger.addHandler(_nh)
    _logger.setLevel(SILENT)
