#!/usr/bin/env python

import click

from dsap.cli.helpers import Command, pipeline_options, output_options, \
    emit, render_cli
from dsap.report import to_json, rows_to_csv, profile_payload, \
    profile_rows, PROFILE_CSV_HEADER


@click.command(cls=Command)
@pipeline_options
@output_options('json', 'csv')
def cli(pipeline, fmt, output):
    """
    Build the demographic profile of each dataset
    """
    profiles = pipeline.profiles()

    if fmt == 'csv':
        text = rows_to_csv(PROFILE_CSV_HEADER,
                           profile_rows(profiles.values()))
    else:
        text = to_json({
            'datasets': dict((dataset_id, profile_payload(p))
                             for dataset_id, p in profiles.items()),
        })

    emit(text, output, lambda: render_cli('profile', output=output,
                                          profiles=profiles))


if __name__ == '__main__':
    cli()
