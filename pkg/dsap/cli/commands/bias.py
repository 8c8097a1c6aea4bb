#!/usr/bin/env python

import click

from collections import OrderedDict

from dsap.bias import bias_report, baseline_agreement, combination_target, \
    evenness_target, MEASURES
from dsap.cli.helpers import Command, pipeline_options, output_options, \
    emit, render_cli, fatal
from dsap.ingest import load_target
from dsap.report import to_json, rows_to_csv, bias_rows, BIAS_CSV_HEADER
from dsap.utils import split_list, split_pairs

# needed to compute agreement between measures and baselines
MIN_AGREEMENT_DATASETS = 3


def _parse_targets(ctx, param, values):
    try:
        return split_pairs(values)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint='--target')


def _parse_measures(ctx, param, value):
    measures = split_list(value) or list(MEASURES)
    unknown = [m for m in measures if m not in MEASURES]
    if unknown:
        raise click.BadParameter('unknown measure: %s (expected %s)' %
                                 (', '.join(unknown), ', '.join(MEASURES)),
                                 param_hint='--measures')
    return measures


def _load_targets(pipeline, paths):
    targets = OrderedDict()
    for axis_id, path in sorted(paths.items()):
        if axis_id in pipeline.by_id:
            axis = pipeline.by_id[axis_id]
        else:
            axis = pipeline.axis(axis_id)
        targets[axis_id] = load_target(path, axis)
    return targets


def _axis_target(pipeline, axis, targets):
    if axis.id in targets:
        return targets[axis.id]
    if axis.is_combination() and \
            any(a in targets for a in axis.components):
        return combination_target(axis, pipeline.component_axes(axis),
                                  targets)
    return None


def _filter(data, measures):
    hidden = [m for m in MEASURES if m not in measures]
    if 'ds_s' in hidden:
        hidden += ['ds_s_per_class', 'ds_s_skipped']
    for measure in ('ds_r', 'ds_e'):
        if measure in hidden:
            hidden += ['%s_uniform' % measure, '%s_delta' % measure]
    return OrderedDict((k, v) for k, v in data.items() if k not in hidden)


@click.command(cls=Command)
@click.option('--target', multiple=True, callback=_parse_targets,
              metavar='AXIS=PATH',
              help='Ideal group_id,proportion profile replacing the '
                   'uniform one for an axis')
@click.option('--measures', callback=_parse_measures,
              metavar='MEASURE[,MEASURE]',
              help='Measures to report (default: all of %s)' %
                   ', '.join(MEASURES))
@pipeline_options
@output_options('json', 'csv')
def cli(pipeline, fmt, output, target, measures):
    """
    Representational, evenness and stereotypical bias of each dataset
    """
    targets = _load_targets(pipeline, target)

    reports = []
    for dataset in pipeline.profiles().values():
        for axis in pipeline.axes:
            rep = _axis_target(pipeline, axis, targets)
            even, fallback = None, None
            if rep is not None:
                even, fallback = evenness_target(rep, dataset.axis(axis.id))
            reports.append(bias_report(dataset, axis.id, (rep, even),
                                       even_target_fallback=fallback))

    agreement = OrderedDict()
    if len(pipeline.profiles()) >= MIN_AGREEMENT_DATASETS:
        for axis in pipeline.axes:
            agreement[axis.id] = baseline_agreement(reports, axis.id)

    if fmt == 'csv':
        keep = [i for i, column in enumerate(BIAS_CSV_HEADER)
                if column not in MEASURES or column in measures]
        keep = [i for i in keep
                if not BIAS_CSV_HEADER[i].endswith('_uniform') or
                BIAS_CSV_HEADER[i][:-len('_uniform')] in measures]
        text = rows_to_csv([BIAS_CSV_HEADER[i] for i in keep],
                           ([row[i] for i in keep]
                            for row in bias_rows(reports)))
    else:
        payload = {'reports': [_filter(r.as_dict(), measures)
                               for r in reports]}
        if agreement:
            payload['agreement'] = agreement
        text = to_json(payload)

    emit(text, output, lambda: render_cli('bias', output=output,
                                          reports=reports,
                                          measures=measures))

    if all(r.value(m) is None for r in reports for m in measures):
        fatal('error: every requested measure is undefined', code=3)


if __name__ == '__main__':
    cli()
