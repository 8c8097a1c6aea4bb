"""
Payload serialization. Output must be a pure function of the inputs: floats
are rounded to 12 significant digits and written in their shortest
round-trip form, JSON keys are sorted and nothing time dependent is ever
written.
"""

import csv
import io
import json
import math

from collections import OrderedDict
from enum import Enum

import numpy as np

from .utils import jinja_env

FLOAT_DIGITS = 12


def format_float(value):
    """
    :param value: float|None
    :return: float|None
    """
    if value is None:
        return None
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError('cannot serialize %r' % value)
    value = float('%.*g' % (FLOAT_DIGITS, value))
    # avoid "-0.0" in payloads
    return value + 0.0


def _clean(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, dict):
        return dict((str(k), _clean(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    raise TypeError('cannot serialize %s' % type(obj).__name__)


def to_json(payload):
    return json.dumps(_clean(payload), sort_keys=True, indent=2,
                      allow_nan=False) + '\n'


def to_json_line(payload):
    return json.dumps(_clean(payload), sort_keys=True,
                      separators=(',', ':'), allow_nan=False) + '\n'


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (float, np.floating)):
        return repr(format_float(value))
    return str(value)


def rows_to_csv(header, rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return out.getvalue()


def axis_profile_payload(profile):
    return OrderedDict([
        ('groups', list(profile.axis.groups)),
        ('proportions', profile.as_dict()),
        ('counts', profile.counts_dict()),
        ('total', profile.total),
    ])


def profile_payload(dataset):
    """
    :param dataset: DatasetProfile
    :return: dict
    """
    payload = OrderedDict([
        ('axes', OrderedDict((axis_id, axis_profile_payload(p))
                             for axis_id, p in
                             dataset.axis_profiles.items())),
    ])
    if dataset.labeled():
        classes = OrderedDict()
        for (label, axis_id), p in dataset.class_profiles.items():
            rest = dataset.class_complement_profiles[(label, axis_id)]
            classes.setdefault(axis_id, OrderedDict())[label] = OrderedDict([
                ('class', axis_profile_payload(p)),
                ('rest', axis_profile_payload(rest)),
            ])
        payload['classes'] = classes
        payload['skipped_classes'] = dataset.skipped_classes
    if dataset.ties:
        payload['ties'] = dataset.ties
    return payload


def profile_rows(datasets):
    for dataset in datasets:
        for axis_id, p in dataset.axis_profiles.items():
            for group in p.axis.groups:
                yield (dataset.dataset_id, axis_id, group, p.count(group),
                       p.proportion(group))


PROFILE_CSV_HEADER = ['dataset_id', 'axis_id', 'group_id', 'count',
                      'proportion']


def matrix_payload(matrix):
    return OrderedDict([
        ('dataset_ids', list(matrix.dataset_ids)),
        ('values', matrix.values.tolist()),
    ])


def matrices_to_csv(matrices):
    """
    Every matrix in one table, one row per axis and dataset. Columns are the
    union of the dataset ids, cells left empty where a dataset is not part
    of the matrix of that axis.

    :param matrices: list[SimilarityMatrix]
    :return: str
    """
    columns = []
    for matrix in matrices:
        columns.extend(d for d in matrix.dataset_ids if d not in columns)
    rows = []
    for matrix in matrices:
        index = dict((d, i) for i, d in enumerate(matrix.dataset_ids))
        for i, dataset_id in enumerate(matrix.dataset_ids):
            rows.append([matrix.axis_id, dataset_id] +
                        [matrix.values[i, index[c]] if c in index else None
                         for c in columns])
    return rows_to_csv(['axis_id', 'dataset_id'] + columns, rows)


def dendrogram_payload(dendro, leaves):
    return OrderedDict([
        ('dataset_ids', list(dendro.dataset_ids)),
        ('merges', [OrderedDict([('left', m.left), ('right', m.right),
                                 ('height', m.height), ('size', m.size)])
                    for m in dendro.merges]),
        ('leaf_order', [dendro.dataset_ids[i] for i in leaves]),
    ])


def assignment_payload(assignment):
    return OrderedDict([
        ('threshold', assignment.threshold),
        ('labels', assignment.labels),
        ('clusters', assignment.clusters()),
    ])


BIAS_CSV_HEADER = ['dataset_id', 'axis_id', 'ds_r', 'ds_e', 'ds_s', 'ens',
                   'sei', 'richness', 'cramers_v', 'target_kind',
                   'even_target_kind', 'ds_r_uniform', 'ds_e_uniform']


def bias_rows(reports):
    for r in reports:
        yield (r.dataset_id, r.axis_id, r.ds_r, r.ds_e, r.ds_s, r.ens, r.sei,
               r.richness, r.cramers_v, r.target_kind, r.even_target_kind,
               r.ds_r_uniform, r.ds_e_uniform)


def shift_payload(report):
    return OrderedDict([
        ('dataset_id', report.dataset_id),
        ('partitions', list(report.partitions)),
        ('per_axis', report.per_axis),
    ])


def _shade(value):
    """
    White for 0 to dark blue for 1
    """
    low, high = (255, 255, 255), (8, 48, 107)
    rgb = [int(round(a + (b - a) * value)) for a, b in zip(low, high)]
    return '#%02x%02x%02x' % tuple(rgb)


def render_svg(matrix, dendro, assignment, leaves, cell=28, tree_width=160):
    """
    Heatmap of a similarity matrix, rows and columns in dendrogram leaf
    order, with the dendrogram on the left and the cluster labels between
    both

    :param matrix: SimilarityMatrix
    :param dendro: Dendrogram
    :param assignment: ClusterAssignment
    :param leaves: list[int] display order
    :return: str
    """
    n = len(matrix.dataset_ids)
    label_width = 8 * max(len(d) for d in matrix.dataset_ids) + 12
    top = label_width
    tree_left = 10
    cluster_x = tree_left + tree_width + 8
    grid_left = cluster_x + 24
    max_height = max([m.height for m in dendro.merges] +
                     [assignment.threshold, 1e-9])

    def x_of(height):
        return tree_left + tree_width * (1.0 - height / max_height)

    position = dict((leaf, i) for i, leaf in enumerate(leaves))
    nodes = {}
    for leaf in range(n):
        nodes[leaf] = (x_of(0.0), top + (position[leaf] + 0.5) * cell)
    links = []
    for i, merge in enumerate(dendro.merges):
        (xl, yl), (xr, yr) = nodes[merge.left], nodes[merge.right]
        xm = x_of(merge.height)
        links.append('M%.2f %.2f H%.2f V%.2f H%.2f' % (xl, yl, xm, yr, xr))
        nodes[n + i] = (xm, (yl + yr) / 2.0)

    rows = []
    for i, leaf in enumerate(leaves):
        dataset_id = matrix.dataset_ids[leaf]
        cells = []
        for j, other in enumerate(leaves):
            value = float(matrix.values[leaf, other])
            cells.append({'x': grid_left + j * cell, 'value': value,
                          'fill': _shade(value),
                          'ink': '#ffffff' if value > 0.55 else '#000000'})
        rows.append({'y': top + i * cell, 'dataset_id': dataset_id,
                     'label': assignment.labels[dataset_id], 'cells': cells})

    template = jinja_env('dsap', 'templates').get_template('heatmap.svg.j2')
    return template.render(
        axis_id=matrix.axis_id,
        width=grid_left + n * cell + label_width,
        height=top + n * cell + 30,
        cell=cell, top=top, grid_left=grid_left, cluster_x=cluster_x,
        rows=rows, links=links,
        threshold_x=x_of(assignment.threshold),
        threshold=assignment.threshold,
        columns=[{'x': grid_left + (j + 0.5) * cell,
                  'dataset_id': matrix.dataset_ids[leaf]}
                 for j, leaf in enumerate(leaves)])
