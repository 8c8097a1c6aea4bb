"""
Readers for the CSV inputs: axis schema, per-sample predictions, published
profiles and target distributions; plus the newline-delimited JSON events
read by the monitor. Every failure is reported with the file, the line and,
when relevant, the column.
"""

import csv
import io
import json

from collections import OrderedDict

from .bias import TargetDistribution, TargetKind
from .errors import InputError
from .log import get_logger
from .profile import AxisProfile, DemographicAxis, SampleRecord, SEPARATOR, \
    PROPORTION_TOLERANCE, InvalidProportions
from .report import format_float, rows_to_csv

logger = get_logger('ingest')

AXIS_COLUMNS = ['axis_id', 'group_id']
PREDICTION_COLUMNS = ['dataset_id', 'sample_id', 'subject_id',
                      'class_label', 'partition']
PROPORTION_COLUMNS = ['group_id', 'proportion']

# axis id reserved for the combination axis on the command line
COMBINATION = 'combination'

# FairFace per-image output mapped onto the prediction table
FAIRFACE_RENAMES = OrderedDict([
    ('face_name_align', 'sample_id'),
])


class IngestError(InputError):
    def __init__(self, message, path=None, line=None, field=None):
        self.message = message
        self.path = path
        self.line = line
        self.field = field
        super(IngestError, self).__init__(self._format())

    def _format(self):
        where = [str(part) for part in (self.path, self.line) if part]
        text = self.message
        if self.field:
            text = 'column "%s": %s' % (self.field, text)
        if where:
            text = '%s: %s' % (':'.join(where), text)
        return text


class SchemaError(IngestError):
    pass


class NormalizationError(IngestError):
    pass


class RangeError(IngestError):
    pass


def _open(path):
    try:
        with io.open(path, encoding='utf-8', newline='') as f:
            return f.read()
    except (IOError, OSError) as e:
        raise IngestError('cannot read file: %s' % e.strerror, path)
    except UnicodeDecodeError:
        raise IngestError('file is not valid UTF-8', path)


def _rows(path, header, error=IngestError, renames=None):
    """
    Iterate over (line number, row) after checking the header, blank lines
    are skipped
    """
    reader = csv.reader(io.StringIO(_open(path)))
    try:
        found = next(reader, None)
        if found is None:
            raise error('file is empty', path, 1)
        found = [renames.get(col.strip(), col.strip()) if renames
                 else col.strip() for col in found]
        header(found, reader.line_num)
        for row in reader:
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(found):
                raise error('expected %d fields, got %d' %
                            (len(found), len(row)), path, reader.line_num)
            yield reader.line_num, found, [cell.strip() for cell in row]
    except csv.Error as e:
        raise error('malformed CSV: %s' % e, path, reader.line_num)


def _expect_header(path, expected, error):
    def _check(found, line):
        if found != expected:
            raise error('expected header "%s", got "%s"' %
                        (','.join(expected), ','.join(found)), path, line)
    return _check


def load_axes(path):
    """
    Read an axis schema, one "axis_id,group_id" row per group, the rows of
    an axis contiguous and in group order

    :param path: str
    :return: list[DemographicAxis]
    """
    axes = OrderedDict()
    current = None
    for line, _, (axis_id, group_id) in _rows(
            path, _expect_header(path, AXIS_COLUMNS, SchemaError),
            SchemaError):
        if not axis_id:
            raise SchemaError('empty axis id', path, line, 'axis_id')
        if not group_id:
            raise SchemaError('empty group id', path, line, 'group_id')
        if axis_id == COMBINATION:
            raise SchemaError('"%s" is reserved for the combination axis' %
                              COMBINATION, path, line, 'axis_id')
        if axis_id in PREDICTION_COLUMNS:
            raise SchemaError('axis id "%s" clashes with a prediction column'
                              % axis_id, path, line, 'axis_id')
        if SEPARATOR in group_id:
            raise SchemaError('group "%s" contains the "%s" separator' %
                              (group_id, SEPARATOR), path, line, 'group_id')
        if axis_id != current:
            if axis_id in axes:
                raise SchemaError('duplicate axis "%s"' % axis_id,
                                  path, line, 'axis_id')
            axes[axis_id] = []
            current = axis_id
        if group_id in axes[axis_id]:
            raise SchemaError('duplicate group "%s" on axis "%s"' %
                              (group_id, axis_id), path, line, 'group_id')
        axes[axis_id].append(group_id)

    if not axes:
        raise SchemaError('no axis declared', path)
    logger.info('loaded %d axes from %s', len(axes), path)
    return [DemographicAxis(axis_id, tuple(groups))
            for axis_id, groups in axes.items()]


def load_predictions(path, axes, renames=None):
    """
    Read the per-sample prediction table. The header is the five fixed
    columns followed by one column per declared axis, in any order.

    :param path: str
    :param axes: list[DemographicAxis]
    :param renames: dict[str,str] column renames applied to the header
    :return: OrderedDict[str,list[SampleRecord]] records per dataset, in
             file order
    """
    by_id = OrderedDict((axis.id, axis) for axis in axes)

    def _check(found, line):
        if found[:len(PREDICTION_COLUMNS)] != PREDICTION_COLUMNS:
            raise IngestError('header must start with "%s"' %
                              ','.join(PREDICTION_COLUMNS), path, line)
        axis_columns = found[len(PREDICTION_COLUMNS):]
        for column in axis_columns:
            if column not in by_id:
                raise IngestError('undeclared axis column', path, line,
                                  column)
        if len(set(axis_columns)) != len(axis_columns):
            raise IngestError('duplicate axis column', path, line)
        missing = [a for a in by_id if a not in axis_columns]
        if missing:
            raise IngestError('missing axis columns: %s' % ', '.join(missing),
                              path, line)

    datasets = OrderedDict()
    seen = set()
    for line, header, row in _rows(path, _check, renames=renames):
        values = dict(zip(header, row))
        dataset_id = values['dataset_id']
        sample_id = values['sample_id']
        if not dataset_id:
            raise IngestError('empty dataset id', path, line, 'dataset_id')
        if not sample_id:
            raise IngestError('empty sample id', path, line, 'sample_id')
        if (dataset_id, sample_id) in seen:
            raise IngestError('duplicate sample "%s" in dataset "%s"' %
                              (sample_id, dataset_id), path, line,
                              'sample_id')
        seen.add((dataset_id, sample_id))

        assignments = {}
        for axis_id, axis in by_id.items():
            group = values[axis_id]
            if group not in axis:
                raise IngestError('"%s" is not a group of axis "%s"' %
                                  (group, axis_id), path, line, axis_id)
            assignments[axis_id] = group

        record = SampleRecord(sample_id=sample_id,
                              assignments=assignments,
                              subject_id=values['subject_id'] or None,
                              class_label=values['class_label'] or None,
                              partition=values['partition'] or None)
        datasets.setdefault(dataset_id, []).append(record)

    logger.info('loaded %d samples in %d datasets from %s', len(seen),
                len(datasets), path)
    return datasets


def _read_proportions(path, axis):
    shares = OrderedDict()
    for line, _, (group_id, value) in _rows(
            path, _expect_header(path, PROPORTION_COLUMNS, IngestError)):
        if group_id not in axis:
            raise IngestError('"%s" is not a group of axis "%s"' %
                              (group_id, axis.id), path, line, 'group_id')
        if group_id in shares:
            raise IngestError('duplicate group "%s"' % group_id, path, line,
                              'group_id')
        try:
            share = float(value)
        except ValueError:
            raise IngestError('"%s" is not a number' % value, path, line,
                              'proportion')
        if not 0.0 <= share <= 1.0:
            raise RangeError('proportion %s outside [0, 1]' % value, path,
                             line, 'proportion')
        shares[group_id] = share

    total = sum(shares.values())
    if abs(total - 1.0) > PROPORTION_TOLERANCE:
        raise NormalizationError('proportions sum to %.12g, expected 1' %
                                 total, path)
    return OrderedDict((g, shares.get(g, 0.0)) for g in axis.groups)


def load_external_profile(path, axis):
    """
    Read a published "group_id,proportion" profile, groups left out are
    taken as zero

    :param path: str
    :param axis: DemographicAxis
    :return: AxisProfile without counts
    """
    shares = _read_proportions(path, axis)
    try:
        return AxisProfile.from_proportions(axis, shares)
    except InvalidProportions as e:
        raise NormalizationError(str(e), path)


def load_target(path, axis):
    """
    :param path: str
    :param axis: DemographicAxis
    :return: TargetDistribution
    """
    return TargetDistribution(axis.id, _read_proportions(path, axis),
                              TargetKind.CUSTOM)


def parse_event(line, lineno, source='<stdin>'):
    """
    One monitor event: a JSON object mapping axis ids to groups, with an
    optional "sample_id"

    :param line: str
    :param lineno: int
    :param source: str
    :return: dict[str,str]
    """
    try:
        event = json.loads(line)
    except ValueError as e:
        raise IngestError('invalid JSON: %s' % e, source, lineno)
    if not isinstance(event, dict):
        raise IngestError('event must be a JSON object', source, lineno)
    event.pop('sample_id', None)
    for key, value in event.items():
        if not isinstance(value, str):
            raise IngestError('group must be a string', source, lineno, key)
    return event


def dump_profile_csv(profile):
    """
    Canonical "group_id,proportion" text of a profile, in axis order

    :param profile: AxisProfile
    :return: str
    """
    return rows_to_csv(PROPORTION_COLUMNS,
                       [(g, format_float(p)) for g, p in
                        zip(profile.axis.groups, profile.proportions)])


def dump_target_csv(target, axis):
    return dump_profile_csv(target.profile(axis))
