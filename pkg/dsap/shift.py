"""
Demographic dataset shift, between fixed partitions or over a stream of
samples through rolling windows.
"""

from collections import OrderedDict, deque
from dataclasses import dataclass

import numpy as np

from .errors import InputError, UndefinedError
from .log import get_logger
from .profile import AxisMismatch, AxisProfile, build_axis_profile, \
    project_record_to_combination, MissingAssignment, SEPARATOR
from .similarity import ds_value

logger = get_logger('shift')

DEFAULT_CAPACITY = 1000


class EmptyPartition(InputError):
    pass


class EmptyWindow(UndefinedError):
    pass


@dataclass(frozen=True)
class ShiftReport(object):
    dataset_id: str
    per_axis: OrderedDict
    partitions: tuple


def partition_shift(records, axes, part_a, part_b, dataset_id=None):
    """
    DS between the profiles of two partitions on every axis, 1 meaning no
    shift at all

    :param records: list[SampleRecord]
    :param axes: list[DemographicAxis]
    :param part_a: str
    :param part_b: str
    :param dataset_id: str
    :return: ShiftReport
    """
    for axis in axes:
        if axis.is_combination():
            records = [project_record_to_combination(r, axis)
                       for r in records]

    sides = []
    for name in (part_a, part_b):
        side = [r for r in records if r.partition == name]
        if not side:
            raise EmptyPartition('partition "%s" of dataset "%s" is empty'
                                 % (name, dataset_id or ''))
        sides.append(side)

    per_axis = OrderedDict(
        (axis.id, ds_value(build_axis_profile(sides[0], axis),
                           build_axis_profile(sides[1], axis)))
        for axis in axes)
    return ShiftReport(dataset_id, per_axis, (part_a, part_b))


class RollingWindow(object):
    """
    The last `capacity` group assignments seen on one axis, compared with a
    reference profile fixed at creation. Pushes must come from a single
    writer.

    :param axis: DemographicAxis
    :param capacity: int
    :param reference: AxisProfile
    """

    def __init__(self, axis, capacity, reference):
        if capacity < 1:
            raise InputError('window capacity must be positive, got %r' %
                             capacity)
        if reference.axis.id != axis.id:
            raise AxisMismatch('reference profile is on axis "%s", window on '
                               '"%s"' % (reference.axis.id, axis.id))
        self.axis = axis
        self.capacity = capacity
        self.reference = reference
        self.buffer = deque()
        self._counts = np.zeros(len(axis), dtype=np.int64)

    def __len__(self):
        return len(self.buffer)

    def push(self, group):
        index = self.axis.index(group)
        if len(self.buffer) == self.capacity:
            oldest = self.buffer.popleft()
            self._counts[self.axis.index(oldest)] -= 1
        self.buffer.append(group)
        self._counts[index] += 1
        return self

    def warm_up(self):
        return len(self.buffer) < self.capacity

    def profile(self):
        if not self.buffer:
            raise EmptyWindow('window on axis "%s" is empty' % self.axis.id)
        counts = self._counts.copy()
        return AxisProfile(self.axis, counts / float(len(self.buffer)),
                           counts)

    def similarity(self):
        """
        :return: (float, bool) DS against the reference and the warm up flag
        """
        return ds_value(self.profile(), self.reference), self.warm_up()


def window_push(w, group):
    """
    :param w: RollingWindow
    :param group: str
    :return: RollingWindow
    """
    return w.push(group)


def window_similarity(w):
    """
    :param w: RollingWindow
    :return: (float, bool)
    """
    return w.similarity()


class Monitor(object):
    """
    One rolling window per axis, all fed by the same events. Combination
    axes get their group from the components when an event does not carry
    it directly.

    :param axes: list[DemographicAxis]
    :param references: dict[str,AxisProfile]
    :param capacity: int
    """

    def __init__(self, axes, references, capacity=DEFAULT_CAPACITY):
        self.axes = list(axes)
        self.windows = OrderedDict()
        for axis in self.axes:
            if axis.id not in references:
                raise AxisMismatch('no reference profile for axis "%s"' %
                                   axis.id)
            self.windows[axis.id] = RollingWindow(axis, capacity,
                                                  references[axis.id])
        self.events = 0

    def _groups(self, assignments):
        groups = OrderedDict()
        for axis in self.axes:
            group = assignments.get(axis.id)
            if group is None and axis.is_combination():
                missing = [a for a in axis.components if a not in assignments]
                if missing:
                    raise MissingAssignment('event has no assignment on %s' %
                                            ', '.join(missing))
                group = SEPARATOR.join(assignments[a]
                                       for a in axis.components)
            if group is None:
                raise MissingAssignment('event has no assignment on axis "%s"'
                                        % axis.id)
            axis.index(group)
            groups[axis.id] = group
        return groups

    def push(self, assignments):
        """
        Validate the whole event first so a bad event leaves every window
        untouched

        :param assignments: dict[str,str]
        """
        for axis_id, group in self._groups(assignments).items():
            self.windows[axis_id].push(group)
        self.events += 1

    def similarities(self):
        """
        :return: OrderedDict[str,(float,bool)]
        """
        return OrderedDict((axis_id, window.similarity())
                           for axis_id, window in self.windows.items())
