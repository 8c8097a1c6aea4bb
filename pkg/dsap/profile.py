"""
Demographic profiles: axes, per-sample records and the relative populations
built from them.

A profile is always stored as a numpy vector aligned on the group order of
its axis, the order fixed when the axis was declared.
"""

import itertools

from collections import Counter, OrderedDict
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InputError
from .log import get_logger

logger = get_logger('profile')

SEPARATOR = '+'
PROPORTION_TOLERANCE = 1e-9


class EmptyPopulation(InputError):
    pass


class UnknownGroup(InputError):
    def __init__(self, axis_id, group):
        msg = 'group "%s" is not declared on axis "%s"' % (group, axis_id)
        super(UnknownGroup, self).__init__(msg)
        self.axis_id = axis_id
        self.group = group


class InvalidArity(InputError):
    pass


class MissingAssignment(InputError):
    pass


class MissingLabel(InputError):
    pass


class AxisMismatch(InputError):
    pass


class InvalidProportions(InputError):
    pass


@dataclass(frozen=True)
class DemographicAxis(object):
    """
    A protected attribute split into an ordered list of groups. Axes built
    by combination_axis remember the ids of the axes they were built from.
    """
    id: str
    groups: tuple
    components: tuple = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        groups = tuple(self.groups)
        if not groups:
            raise InputError('axis "%s" has no groups' % self.id)
        if len(set(groups)) != len(groups):
            dupes = sorted(g for g, n in Counter(groups).items() if n > 1)
            raise InputError('axis "%s" has duplicate groups: %s' %
                             (self.id, ', '.join(dupes)))
        object.__setattr__(self, 'groups', groups)
        object.__setattr__(self, 'components', tuple(self.components))
        object.__setattr__(self, '_index',
                           dict((g, i) for i, g in enumerate(groups)))

    def __len__(self):
        return len(self.groups)

    def __contains__(self, group):
        return group in self._index

    def index(self, group):
        """
        Position of a group in the axis

        :param group: str
        :return: int
        """
        try:
            return self._index[group]
        except KeyError:
            raise UnknownGroup(self.id, group)

    def is_combination(self):
        return bool(self.components)


@dataclass(frozen=True)
class SampleRecord(object):
    """
    One prediction row. `tied_axes` lists the axes where a subject majority
    vote had to be broken by group name.
    """
    sample_id: str
    assignments: dict
    subject_id: str = None
    class_label: str = None
    partition: str = None
    tied_axes: tuple = ()

    def group(self, axis_id):
        try:
            return self.assignments[axis_id]
        except KeyError:
            raise MissingAssignment('sample "%s" has no assignment on axis '
                                    '"%s"' % (self.sample_id, axis_id))

    def with_assignment(self, axis_id, group):
        assignments = dict(self.assignments)
        assignments[axis_id] = group
        return replace(self, assignments=assignments)


class AxisProfile(object):
    """
    Relative population of every group of an axis. Built either from counts
    (the usual case) or directly from proportions, for published profiles
    and targets, in which case `counts` and `total` are None.

    :param axis: DemographicAxis
    :param proportions: numpy.ndarray
    :param counts: numpy.ndarray|None
    """

    def __init__(self, axis, proportions, counts=None):
        self.axis = axis
        proportions = np.asarray(proportions, dtype=np.float64)
        proportions.setflags(write=False)
        self.proportions = proportions
        if counts is not None:
            counts = np.asarray(counts, dtype=np.int64)
            counts.setflags(write=False)
        self.counts = counts

    @classmethod
    def from_counts(cls, axis, counts):
        """
        :param axis: DemographicAxis
        :param counts: numpy.ndarray|dict[str,int] aligned on axis.groups
        :return: AxisProfile
        """
        if isinstance(counts, dict):
            vector = np.zeros(len(axis), dtype=np.int64)
            for group, n in counts.items():
                vector[axis.index(group)] = n
            counts = vector
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (len(axis),):
            raise AxisMismatch('expected %d counts for axis "%s", got %d' %
                               (len(axis), axis.id, counts.size))
        if (counts < 0).any():
            raise InvalidProportions('negative count on axis "%s"' % axis.id)
        total = int(counts.sum())
        if total < 1:
            raise EmptyPopulation('no samples on axis "%s"' % axis.id)
        return cls(axis, counts / total, counts)

    @classmethod
    def from_proportions(cls, axis, proportions):
        """
        Build a proportion-only profile, groups missing from a dict are
        taken as zero. Input outside the 1e-9 tolerance is rejected, never
        renormalized.

        :param axis: DemographicAxis
        :param proportions: numpy.ndarray|dict[str,float]
        :return: AxisProfile
        """
        if isinstance(proportions, dict):
            vector = np.zeros(len(axis))
            for group, value in proportions.items():
                vector[axis.index(group)] = value
            proportions = vector
        proportions = np.asarray(proportions, dtype=np.float64)
        if proportions.shape != (len(axis),):
            raise AxisMismatch('expected %d proportions for axis "%s", got '
                               '%d' % (len(axis), axis.id, proportions.size))
        check_simplex(proportions, 'axis "%s"' % axis.id)
        return cls(axis, proportions)

    @property
    def total(self):
        if self.counts is None:
            return None
        return int(self.counts.sum())

    def has_counts(self):
        return self.counts is not None

    def proportion(self, group):
        return float(self.proportions[self.axis.index(group)])

    def count(self, group):
        if self.counts is None:
            return None
        return int(self.counts[self.axis.index(group)])

    def support(self):
        """
        Boolean mask of the represented groups
        """
        return self.proportions > 0

    def as_dict(self):
        return OrderedDict((g, float(p)) for g, p in
                           zip(self.axis.groups, self.proportions))

    def counts_dict(self):
        if self.counts is None:
            return None
        return OrderedDict((g, int(n)) for g, n in
                           zip(self.axis.groups, self.counts))

    def __repr__(self):
        return 'AxisProfile(%s, %s)' % (self.axis.id, dict(self.as_dict()))


@dataclass
class DatasetProfile(object):
    """
    Every axis profile of a dataset, plus for labeled data the profile of
    each class (X_y) and of the rest of the dataset (X_ŷ), keyed by
    (class_label, axis_id). `skipped_classes` keeps, per axis, the classes
    left out because one side of the split was empty.
    """
    dataset_id: str
    axis_profiles: dict
    class_profiles: dict = None
    class_complement_profiles: dict = None
    skipped_classes: dict = field(default_factory=dict)
    ties: dict = field(default_factory=dict)

    def axis(self, axis_id):
        try:
            return self.axis_profiles[axis_id]
        except KeyError:
            raise AxisMismatch('dataset "%s" has no profile on axis "%s"' %
                               (self.dataset_id, axis_id))

    def labeled(self):
        return self.class_profiles is not None

    def classes(self, axis_id):
        """
        Admissible classes for an axis, in label order

        :return: list[str]
        """
        if not self.class_complement_profiles:
            return []
        return sorted(label for label, a_id in self.class_complement_profiles
                      if a_id == axis_id)

    def class_pair(self, label, axis_id):
        return (self.class_profiles[(label, axis_id)],
                self.class_complement_profiles[(label, axis_id)])

    def joint(self, axis_id):
        """
        Joint (class, group) counts over the admissible classes

        :return: dict[(str,str),int]
        """
        joint = OrderedDict()
        for label in self.classes(axis_id):
            profile = self.class_profiles[(label, axis_id)]
            for group, n in profile.counts_dict().items():
                joint[(label, group)] = n
        return joint


def check_simplex(values, what):
    """
    Validate a probability vector against the shared tolerance

    :param values: numpy.ndarray
    :param what: str used in the error message
    """
    if (values < 0).any() or (values > 1 + PROPORTION_TOLERANCE).any():
        raise InvalidProportions('%s: proportions must lie in [0, 1]' % what)
    total = float(values.sum())
    if abs(total - 1.0) > PROPORTION_TOLERANCE:
        raise InvalidProportions('%s: proportions sum to %.12g, expected 1'
                                 % (what, total))


def build_axis_profile(records, axis):
    """
    Tally the assignments of the records on one axis

    :param records: list[SampleRecord]
    :param axis: DemographicAxis
    :return: AxisProfile
    """
    if not records:
        raise EmptyPopulation('cannot build a profile on axis "%s" from an '
                              'empty population' % axis.id)
    indices = [axis.index(record.group(axis.id)) for record in records]
    counts = np.bincount(indices, minlength=len(axis))
    return AxisProfile.from_counts(axis, counts)


def _vote(members, axes, sample_id):
    """
    Collapse the samples of one subject into a single record by majority
    vote per axis, ties go to the smallest group id
    """
    first = members[0]
    if len(members) == 1:
        return replace(first, sample_id=sample_id)
    assignments = {}
    tied = set()
    for axis in axes:
        votes = Counter(m.assignments[axis.id] for m in members
                        if axis.id in m.assignments)
        if not votes:
            continue
        best = max(votes.values())
        winners = sorted(g for g, n in votes.items() if n == best)
        assignments[axis.id] = winners[0]
        if len(winners) > 1:
            tied.add(axis.id)
            logger.warning('subject %s: tie on axis %s between %s, using %s',
                        first.subject_id, axis.id, ', '.join(winners),
                        winners[0])

    return SampleRecord(sample_id=sample_id,
                        assignments=assignments,
                        subject_id=first.subject_id,
                        class_label=first.class_label,
                        partition=first.partition,
                        tied_axes=tuple(sorted(tied)))


def _aggregate_id(key, taken):
    base = '/'.join(part for part in key if part)
    sample_id, n = base, 1
    while sample_id in taken:
        n += 1
        sample_id = '%s#%d' % (base, n)
    return sample_id


def aggregate_by_subject(records, axes):
    """
    Replace the samples of each subject by one record per (subject, class,
    partition), records without a subject pass through untouched. The
    output keeps the input order, an aggregated record sits where its first
    sample was.

    Every aggregated record, single sample subjects included, is named
    subject/class/partition (empty parts left out). A name already taken by
    another record of the dataset gets a "#2", "#3"... suffix.

    :param records: list[SampleRecord]
    :param axes: list[DemographicAxis]
    :return: list[SampleRecord]
    """
    if not records:
        raise EmptyPopulation('no records to aggregate')

    members = OrderedDict()
    slots = []
    for record in records:
        if not record.subject_id:
            slots.append((None, record))
            continue
        key = (record.subject_id, record.class_label, record.partition)
        if key not in members:
            members[key] = []
            slots.append((key, None))
        members[key].append(record)

    taken = set(record.sample_id for key, record in slots if key is None)
    aggregated = []
    for key, record in slots:
        if key is None:
            aggregated.append(record)
            continue
        sample_id = _aggregate_id(key, taken)
        taken.add(sample_id)
        aggregated.append(_vote(members[key], axes, sample_id))
    return aggregated


def combination_axis(axes, axis_id=None):
    """
    Cartesian product of several axes, each combined group is named by
    joining its constituent groups with "+" in the given axis order

    :param axes: list[DemographicAxis]
    :param axis_id: str defaults to the joined axis ids
    :return: DemographicAxis
    """
    if len(axes) < 2:
        raise InvalidArity('a combination axis needs at least 2 axes, got %d'
                           % len(axes))
    groups = [SEPARATOR.join(combo) for combo in
              itertools.product(*[axis.groups for axis in axes])]
    components = tuple(axis.id for axis in axes)
    return DemographicAxis(id=axis_id or SEPARATOR.join(components),
                           groups=tuple(groups),
                           components=components)


def project_record_to_combination(record, combo):
    """
    :param record: SampleRecord
    :param combo: DemographicAxis built by combination_axis
    :return: SampleRecord with an assignment on combo
    """
    if not combo.is_combination():
        raise InvalidArity('axis "%s" is not a combination axis' % combo.id)
    group = SEPARATOR.join(record.group(axis_id)
                           for axis_id in combo.components)
    if group not in combo:
        raise UnknownGroup(combo.id, group)
    return record.with_assignment(combo.id, group)


def split_classes(records, axis):
    """
    Count matrix per class, returns the admissible (X_y, X_ŷ) pairs and the
    classes skipped because the rest of the dataset is empty

    :return: (OrderedDict[str,(AxisProfile,AxisProfile)], list[str])
    """
    if not records:
        raise EmptyPopulation('no records to split by class')
    labels = []
    for record in records:
        if not record.class_label:
            raise MissingLabel('sample "%s" has no class label' %
                               record.sample_id)
        labels.append(record.class_label)

    classes = sorted(set(labels))
    class_index = dict((label, i) for i, label in enumerate(classes))
    table = np.zeros((len(classes), len(axis)), dtype=np.int64)
    for label, record in zip(labels, records):
        table[class_index[label], axis.index(record.group(axis.id))] += 1
    full = table.sum(axis=0)

    pairs = OrderedDict()
    skipped = []
    for label in classes:
        row = table[class_index[label]]
        rest = full - row
        if rest.sum() == 0:
            logger.warning('class "%s" covers the whole dataset on axis %s, '
                           'skipping it', label, axis.id)
            skipped.append(label)
            continue
        pairs[label] = (AxisProfile.from_counts(axis, row),
                        AxisProfile.from_counts(axis, rest))
    return pairs, skipped


def class_subprofiles(records, axis):
    """
    Profile of each class and of the rest of the dataset

    :param records: list[SampleRecord]
    :param axis: DemographicAxis
    :return: OrderedDict[str,(AxisProfile,AxisProfile)]
    """
    return split_classes(records, axis)[0]


def homogenize_labels(records, keep=None, mapping=None):
    """
    Rename class labels, then keep only the records whose label is in
    `keep` when given

    :param records: list[SampleRecord]
    :param keep: list[str]|None
    :param mapping: dict[str,str]|None
    :return: list[SampleRecord]
    """
    mapping = mapping or {}
    keep = set(keep) if keep else None
    result = []
    for record in records:
        label = mapping.get(record.class_label, record.class_label)
        if keep is not None and label not in keep:
            continue
        if label != record.class_label:
            record = replace(record, class_label=label)
        result.append(record)
    return result


def build_dataset_profile(dataset_id, records, axes):
    """
    Profiles of a dataset on every axis; class profiles are built when the
    records carry labels. Combination axes get their assignments projected
    from their components first.

    :param dataset_id: str
    :param records: list[SampleRecord]
    :param axes: list[DemographicAxis]
    :return: DatasetProfile
    """
    if not records:
        raise EmptyPopulation('dataset "%s" has no samples' % dataset_id)

    for axis in axes:
        if axis.is_combination():
            records = [project_record_to_combination(r, axis)
                       for r in records]

    labeled = [r for r in records if r.class_label]
    if labeled and len(labeled) != len(records):
        raise MissingLabel('dataset "%s" mixes labeled and unlabeled samples'
                           % dataset_id)

    profile = DatasetProfile(
        dataset_id=dataset_id,
        axis_profiles=OrderedDict((axis.id, build_axis_profile(records, axis))
                                  for axis in axes))

    ties = dict((axis.id, sorted(r.subject_id for r in records
                                 if axis.id in r.tied_axes))
                for axis in axes)
    profile.ties = dict((k, v) for k, v in ties.items() if v)

    if labeled:
        profile.class_profiles = OrderedDict()
        profile.class_complement_profiles = OrderedDict()
        for axis in axes:
            pairs, skipped = split_classes(records, axis)
            for label, (inside, rest) in pairs.items():
                profile.class_profiles[(label, axis.id)] = inside
                profile.class_complement_profiles[(label, axis.id)] = rest
            if skipped:
                profile.skipped_classes[axis.id] = skipped
    return profile
