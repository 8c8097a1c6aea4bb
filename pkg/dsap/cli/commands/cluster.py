#!/usr/bin/env python

import click

from collections import OrderedDict

from dsap.cli.helpers import Command, pipeline_options, output_options, \
    emit, render_cli
from dsap.clustering import pairwise_matrix, complete_linkage, \
    cut_dendrogram, leaf_order
from dsap.config import default_threshold
from dsap.report import to_json, rows_to_csv, matrix_payload, \
    dendrogram_payload, assignment_payload, render_svg

CLUSTER_CSV_HEADER = ['axis_id', 'threshold', 'dataset_id', 'cluster']


@click.command(cls=Command)
@click.option('-t', '--threshold', 'thresholds', type=float, multiple=True,
              help='Maximum cophenetic distance inside a cluster, can be '
                   'repeated to sweep thresholds (default: 0.6)')
@pipeline_options
@output_options('json', 'csv', 'svg')
def cli(pipeline, fmt, output, thresholds):
    """
    Cluster datasets by complete linkage on 1 - DS
    """
    thresholds = sorted(set(thresholds)) or [default_threshold()]
    if fmt == 'svg' and len(pipeline.axes) != 1:
        raise click.BadParameter('svg output needs a single axis',
                                 param_hint='--axes')

    results = OrderedDict()
    for axis in pipeline.axes:
        matrix = pairwise_matrix(list(pipeline.profiles().values()), axis.id)
        dendro = complete_linkage(matrix)
        results[axis.id] = (matrix, dendro, leaf_order(dendro),
                            [cut_dendrogram(dendro, t) for t in thresholds])

    if fmt == 'svg':
        matrix, dendro, leaves, assignments = list(results.values())[0]
        text = render_svg(matrix, dendro, assignments[0], leaves)
    elif fmt == 'csv':
        rows = []
        for axis_id, (_, _, _, assignments) in results.items():
            for assignment in assignments:
                for dataset_id, label in assignment.labels.items():
                    rows.append((axis_id, assignment.threshold, dataset_id,
                                 label))
        text = rows_to_csv(CLUSTER_CSV_HEADER, rows)
    else:
        text = to_json({'axes': dict(
            (axis_id, {
                'matrix': matrix_payload(matrix),
                'dendrogram': dendrogram_payload(dendro, leaves),
                'assignments': [assignment_payload(a) for a in assignments],
            }) for axis_id, (matrix, dendro, leaves, assignments)
            in results.items())})

    emit(text, output, lambda: render_cli('cluster', output=output,
                                          results=results))


if __name__ == '__main__':
    cli()
