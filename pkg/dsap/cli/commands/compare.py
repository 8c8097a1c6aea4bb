#!/usr/bin/env python

import click

from collections import OrderedDict

from dsap.cli.helpers import Command, pipeline_options, output_options, \
    emit, render_cli
from dsap.clustering import pairwise_matrix, complete_linkage, \
    cut_dendrogram, leaf_order
from dsap.config import default_threshold
from dsap.ingest import load_external_profile
from dsap.profile import DatasetProfile
from dsap.report import to_json, matrices_to_csv, matrix_payload, \
    render_svg


def _parse_external(ctx, param, values):
    externals = []
    for value in values:
        name, sep, rest = value.partition(':')
        axis_id, sep2, path = rest.partition('=')
        if not (sep and sep2 and name and axis_id and path):
            raise click.BadParameter('expected NAME:AXIS=PATH, got "%s"' %
                                     value, param_hint='--external')
        externals.append((name, axis_id, path))
    return externals


def _external_profiles(pipeline, externals):
    """
    Published profiles grouped by axis, one DatasetProfile each
    """
    by_axis = OrderedDict()
    for name, axis_id, path in externals:
        axis = pipeline.axis(axis_id)
        if name in pipeline.profiles():
            raise click.BadParameter('"%s" is already a dataset name' % name,
                                     param_hint='--external')
        profile = DatasetProfile(name, OrderedDict(
            [(axis.id, load_external_profile(path, axis))]))
        by_axis.setdefault(axis.id, []).append(profile)
    return by_axis


@click.command(cls=Command)
@click.option('--external', multiple=True, callback=_parse_external,
              metavar='NAME:AXIS=PATH',
              help='Add a published group_id,proportion profile to the '
                   'comparison of one axis')
@click.option('-t', '--threshold', type=float, default=None,
              help='Cut threshold shown on the SVG dendrogram')
@pipeline_options
@output_options('json', 'csv', 'svg')
def cli(pipeline, fmt, output, external, threshold):
    """
    Pairwise demographic similarity between datasets
    """
    if threshold is None:
        threshold = default_threshold()
    if fmt == 'svg' and len(pipeline.axes) != 1:
        raise click.BadParameter('svg output needs a single axis',
                                 param_hint='--axes')

    externals = _external_profiles(pipeline, external)
    matrices = []
    for axis in pipeline.axes:
        profiles = list(pipeline.profiles().values()) + \
            externals.get(axis.id, [])
        matrices.append(pairwise_matrix(profiles, axis.id))

    if fmt == 'svg':
        matrix = matrices[0]
        dendro = complete_linkage(matrix)
        text = render_svg(matrix, dendro, cut_dendrogram(dendro, threshold),
                          leaf_order(dendro))
    elif fmt == 'csv':
        text = matrices_to_csv(matrices)
    else:
        text = to_json({
            'matrices': dict((m.axis_id, matrix_payload(m))
                             for m in matrices),
        })

    emit(text, output, lambda: render_cli('compare', output=output,
                                          matrices=matrices))


if __name__ == '__main__':
    cli()
