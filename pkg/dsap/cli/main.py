#!/usr/bin/env python
import os

# Import the CLI system
from .helpers import DsapCLI
from ..config import module_path

cmd_help = 'Demographic profiles, similarity, bias and shift of datasets'


def get_cli():
    command_dir = os.path.join(module_path(), 'cli', 'commands')
    return DsapCLI(command_dir, help=cmd_help)


def main():
    """
    This is our main entry point, it is used by setuptools to create
    the dsap wrapper
    """
    cli = get_cli()

    return cli(prog_name='dsap')
