#!/usr/bin/env python

import click
import json
import platform

from importlib import metadata

from dsap import __version__ as dsap_version
from dsap.cli.helpers import Command, CLITable

DEPENDENCIES = ['numpy', 'scipy', 'click', 'jinja2', 'appdirs']


def _package_version(name):
    try:
        return metadata.version(name)
    except metadata.PackageNotFoundError:
        return None


@click.command(cls=Command)
@click.option('--json', 'is_json', is_flag=True)
def cli(is_json):
    """
    See the dsap version information
    """
    versions = {
        'dsap': {'version': dsap_version},
        'python': {'version': platform.python_version()},
    }
    for name in DEPENDENCIES:
        versions[name] = {'version': _package_version(name)}

    if is_json:
        click.echo(json.dumps(versions, sort_keys=True))
    else:
        rows = []
        for name in ['dsap', 'python'] + DEPENDENCIES:
            version = versions[name]['version']
            rows.append({
                'name': name,
                'version': version or click.style('not installed', fg='red'),
            })
        CLITable('name', 'version').echo(rows)


if __name__ == '__main__':
    cli()
