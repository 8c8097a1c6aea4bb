#!/usr/bin/env python

import click

from dsap.cli.helpers import Command, pipeline_options, output_options, \
    emit, render_cli
from dsap.report import to_json, rows_to_csv, shift_payload
from dsap.shift import partition_shift
from dsap.utils import split_list

SHIFT_CSV_HEADER = ['dataset_id', 'axis_id', 'partition_a', 'partition_b',
                    'ds']


def _parse_partitions(ctx, param, value):
    partitions = split_list(value)
    if len(partitions) != 2:
        raise click.BadParameter('expected two partitions, got "%s"' % value,
                                 param_hint='--partitions')
    return partitions


@click.command(cls=Command)
@click.option('--partitions', default='train,test',
              callback=_parse_partitions, metavar='A,B',
              help='Partitions to compare (default: train,test)')
@pipeline_options
@output_options('json', 'csv')
def cli(pipeline, fmt, output, partitions):
    """
    Demographic shift between two partitions of each dataset
    """
    part_a, part_b = partitions
    reports = [partition_shift(records, pipeline.axes, part_a, part_b,
                               dataset_id)
               for dataset_id, records in pipeline.records().items()]

    if fmt == 'csv':
        text = rows_to_csv(SHIFT_CSV_HEADER, [
            (r.dataset_id, axis_id, part_a, part_b, value)
            for r in reports for axis_id, value in r.per_axis.items()])
    else:
        text = to_json({'shifts': dict((r.dataset_id, shift_payload(r))
                                       for r in reports)})

    emit(text, output, lambda: render_cli('shift', output=output,
                                          reports=reports))


if __name__ == '__main__':
    cli()
