"""
Base exceptions, the CLI maps them to exit codes. The concrete errors live in
the module raising them.
"""


class DsapError(RuntimeError):
    exit_code = 1


class InputError(DsapError):
    """
    The input files or arguments are invalid
    """
    exit_code = 2


class UndefinedError(DsapError):
    """
    The requested measure does not exist for this input
    """
    exit_code = 3
