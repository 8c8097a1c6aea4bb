#!/usr/bin/env python

import click
import io
import sys

from collections import OrderedDict

from dsap.cli.helpers import Command, pipeline_options, error, info
from dsap.config import default_capacity, default_every
from dsap.errors import InputError
from dsap.ingest import parse_event, IngestError
from dsap.log import get_logger
from dsap.profile import build_dataset_profile, EmptyPopulation
from dsap.report import to_json_line
from dsap.shift import Monitor

logger = get_logger('cli.monitor')


def _references(pipeline, dataset_id, partition):
    records = pipeline.records()
    if dataset_id is None:
        dataset_id = list(records)[0]
    if dataset_id not in records:
        raise click.BadParameter('unknown dataset "%s"' % dataset_id,
                                 param_hint='--reference-dataset')
    selected = records[dataset_id]
    if partition:
        selected = [r for r in selected if r.partition == partition]
        if not selected:
            raise EmptyPopulation('partition "%s" of dataset "%s" is empty' %
                                  (partition, dataset_id))
    profile = build_dataset_profile(dataset_id, selected, pipeline.axes)
    return profile.axis_profiles


def _record(monitor):
    return OrderedDict([
        ('event', monitor.events),
        ('axes', dict((axis_id, {'ds': value, 'warm_up': warm_up})
                      for axis_id, (value, warm_up)
                      in monitor.similarities().items())),
    ])


@click.command(cls=Command)
@click.option('--reference-dataset', default=None,
              help='Dataset giving the reference profile (default: the '
                   'first one)')
@click.option('--reference-partition', default=None,
              help='Only use this partition of the reference dataset')
@click.option('-e', '--events', type=click.File('r'), default='-',
              help='Newline-delimited JSON events (default: stdin)')
@click.option('-c', '--capacity', type=int, default=None,
              help='Rolling window size (default: 1000)')
@click.option('--every', type=int, default=None,
              help='Emit one record every N events (default: 1)')
@click.option('--strict', is_flag=True, default=False,
              help='Abort on the first malformed event')
@click.option('-o', '--output', type=click.Path(dir_okay=False),
              help='Write the records to this file instead of stdout')
@pipeline_options
def cli(pipeline, reference_dataset, reference_partition, events, capacity,
        every, strict, output):
    """
    Rolling demographic similarity of a stream against a reference dataset
    """
    capacity = capacity if capacity is not None else default_capacity()
    every = every if every is not None else default_every()
    if every < 1:
        raise click.BadParameter('must be at least 1', param_hint='--every')

    monitor = Monitor(pipeline.axes,
                      _references(pipeline, reference_dataset,
                                  reference_partition),
                      capacity)

    out = io.open(output, 'w', encoding='utf-8', newline='') if output \
        else sys.stdout
    skipped = 0
    try:
        source = getattr(events, 'name', '<stdin>')
        for lineno, line in enumerate(events, 1):
            if not line.strip():
                continue
            try:
                monitor.push(parse_event(line, lineno, source))
            except InputError as e:
                if not isinstance(e, IngestError):
                    e = IngestError(str(e), source, lineno)
                if strict:
                    raise e
                skipped += 1
                logger.warning('skipping event: %s', e)
                error('error: %s' % e)
                continue
            if monitor.events % every == 0:
                out.write(to_json_line(_record(monitor)))
                out.flush()
        if monitor.events and monitor.events % every:
            out.write(to_json_line(_record(monitor)))
    finally:
        if output:
            out.close()

    if output:
        info('%d events, %d skipped, written to %s' %
             (monitor.events, skipped, output))


if __name__ == '__main__':
    cli()
