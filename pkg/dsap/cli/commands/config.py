#!/usr/bin/env python

import click
import sys

from dsap.cli.helpers import Command, fatal
from dsap.config import config, DEFAULTS


def _display_option(section, option, value):
    if sys.stdout.isatty():
        click.echo('%s.%s = %s' % (
            click.style(section, fg='blue'),
            click.style(option, fg='blue'),
            click.style(value, fg='green')
        ))
    else:
        # remove spaces when piped so that users can send that
        # to cut/awk/etc...
        click.echo('%s.%s=%s' % (section, option, value))


def _split_option(option):
    section, _, key = option.partition('.')
    if not section or not key:
        fatal('error: options are written section.option, got %s' % option,
              code=2)
    return section, key


def _check_value(section, key, value):
    # only validate the options we know about
    casts = {
        ('defaults', 'threshold'): float,
        ('defaults', 'capacity'): int,
        ('defaults', 'every'): int,
    }
    if (section, key) in casts:
        try:
            casts[(section, key)](value)
        except ValueError:
            fatal('error: invalid value for %s.%s: %s' % (section, key,
                                                           value), code=2)
    if (section, key) == ('output', 'color') and \
            value not in ('true', 'false'):
        fatal('error: output.color must be true or false', code=2)
    if (section, key) == ('output', 'format') and \
            value not in ('json', 'csv', 'svg'):
        fatal('error: output.format must be json, csv or svg', code=2)


@click.command(cls=Command)
@click.option('-a', '--all', 'show_all', is_flag=True,
              help='Show all options')
@click.option('-u', '--unset', is_flag=True, help='Unset an option')
@click.option('--raw', is_flag=True, default=False)
@click.argument('option', default=None, required=False)
@click.argument('value', default=None, required=False)
@click.pass_context
def cli(ctx, show_all, unset, raw, option, value):
    """
    Get and set your dsap defaults
    """
    if show_all:
        for section, values in sorted(config.dump().items()):
            for key, value in sorted(values.items()):
                _display_option(section, key, value)
        return

    if unset:
        if not option:
            click.secho('error: missing option name', fg='red', err=True)
            click.echo(cli.get_help(ctx))
            sys.exit(2)
        section, key = _split_option(option)
        if not config.unset(section, key):
            fatal('error: unknown option %s' % option, code=2)
        config.save()
        return

    if not option:
        click.echo(cli.get_help(ctx))
        return

    section, key = _split_option(option)

    if value is None:
        if not config.has(section, key) and \
                key not in DEFAULTS.get(section, {}):
            fatal('error: unknown option %s' % option, code=2)
        value = config.get(section, key)
        if raw:
            click.echo(value)
        else:
            _display_option(section, key, value)
        return

    _check_value(section, key, value)
    config.set(section, key, value)
    config.save()
    _display_option(section, key, config.get(section, key))


if __name__ == '__main__':
    cli()
