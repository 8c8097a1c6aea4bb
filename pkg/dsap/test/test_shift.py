import numpy as np

from .test_base import TestBase, make_axis, make_profile, make_records
from ..profile import AxisMismatch, AxisProfile, MissingAssignment, \
    SampleRecord, UnknownGroup, combination_axis
from ..shift import EmptyPartition, EmptyWindow, Monitor, RollingWindow, \
    partition_shift, window_push, window_similarity
from ..similarity import ds_value


class TestPartitionShift(TestBase):
    def setUp(self):
        super(TestPartitionShift, self).setUp()
        self.gender = make_axis('gender', 'Male', 'Female')

    def _partition(self, name, male, female):
        return make_records('gender', ['Male'] * male + ['Female'] * female,
                            partition=name)

    def test_sfew_proportions(self):
        records = self._partition('train', 53, 47) + \
            self._partition('test', 69, 31)
        report = partition_shift(records, [self.gender], 'train', 'test',
                                 'sfew')
        assert abs(report.per_axis['gender'] - 0.84) <= 1e-12
        assert report.partitions == ('train', 'test')
        assert report.dataset_id == 'sfew'

    def test_symmetric(self):
        records = self._partition('train', 3, 1) + \
            self._partition('test', 1, 4)
        a = partition_shift(records, [self.gender], 'train', 'test')
        b = partition_shift(records, [self.gender], 'test', 'train')
        assert a.per_axis == b.per_axis

    def test_copy(self):
        records = self._partition('train', 3, 2) + \
            self._partition('test', 3, 2)
        report = partition_shift(records, [self.gender], 'train', 'test')
        assert report.per_axis['gender'] == 1.0

    def test_disjoint(self):
        records = self._partition('train', 3, 0) + \
            self._partition('test', 0, 2)
        report = partition_shift(records, [self.gender], 'train', 'test')
        assert report.per_axis['gender'] == 0.0

    def test_missing_partition(self):
        with self.assertRaises(EmptyPartition):
            partition_shift(self._partition('train', 1, 1), [self.gender],
                            'train', 'test')

    def test_combination_axis(self):
        age = make_axis('age', 'young', 'old')
        combo = combination_axis([self.gender, age])
        records = [SampleRecord('s%d' % i, {'gender': g, 'age': a},
                                partition=part)
                   for i, (g, a, part) in enumerate([
                       ('Male', 'young', 'train'),
                       ('Female', 'old', 'train'),
                       ('Male', 'young', 'test'),
                       ('Male', 'old', 'test')])]
        report = partition_shift(records, [self.gender, age, combo],
                                 'train', 'test')
        assert report.per_axis['gender'] == 0.5
        assert report.per_axis['age'] == 1.0
        assert report.per_axis[combo.id] == 0.5


class TestRollingWindow(TestBase):
    def setUp(self):
        super(TestRollingWindow, self).setUp()
        self.axis = make_axis('a', 'A', 'B', 'C', 'D')
        self.reference = make_profile(self.axis, [1, 1, 1, 1])

    def test_fifo(self):
        w = RollingWindow(self.axis, 3, self.reference)
        for group in 'ABC':
            window_push(w, group)
        window_push(w, 'D')
        assert list(w.buffer) == ['B', 'C', 'D']
        assert w.profile().counts_dict() == {'A': 0, 'B': 1, 'C': 1, 'D': 1}

    def test_warm_up(self):
        w = RollingWindow(self.axis, 2, self.reference)
        window_push(w, 'A')
        assert list(w.buffer) == ['A']
        assert window_similarity(w) == (0.25, True)
        window_push(w, 'B')
        assert window_similarity(w)[1] is False
        window_push(w, 'C')
        assert window_similarity(w)[1] is False

    def test_empty(self):
        w = RollingWindow(self.axis, 2, self.reference)
        with self.assertRaises(EmptyWindow):
            window_similarity(w)

    def test_unknown_group(self):
        w = RollingWindow(self.axis, 2, self.reference)
        with self.assertRaises(UnknownGroup):
            window_push(w, 'E')
        assert len(w) == 0

    def test_point_mass_against_reference(self):
        reference = AxisProfile.from_proportions(self.axis,
                                                 [0.1, 0.2, 0.3, 0.4])
        w = RollingWindow(self.axis, 5, reference)
        for _ in range(5):
            w.push('C')
        assert abs(w.similarity()[0] - 0.3) <= 1e-12

    def test_order_invariance(self):
        a = RollingWindow(self.axis, 4, self.reference)
        b = RollingWindow(self.axis, 4, self.reference)
        for group in 'AABC':
            a.push(group)
        for group in 'CBAA':
            b.push(group)
        assert a.similarity() == b.similarity()

    def test_histogram_matches_distribution(self):
        rng = np.random.RandomState(17)
        p = np.array([0.1, 0.2, 0.3, 0.4])
        w = RollingWindow(self.axis, 10000, self.reference)
        for index in rng.choice(4, size=10000, p=p):
            w.push(self.axis.groups[index])
        observed = w.profile().proportions
        sigma = np.sqrt(p * (1 - p) / 10000)
        assert (np.abs(observed - p) <= 4 * sigma).all()

    def test_hard_cutoff(self):
        w = RollingWindow(self.axis, 1000, self.reference)
        for _ in range(1000):
            w.push('A')
        rng = np.random.RandomState(4)
        post = [self.axis.groups[i] for i in rng.choice(4, size=1000)]
        for group in post:
            w.push(group)
        clean = RollingWindow(self.axis, 1000, self.reference)
        for group in post:
            clean.push(group)
        assert w.similarity() == clean.similarity()

    def test_switch_converges(self):
        q = np.array([0.7, 0.1, 0.1, 0.1])
        reference = AxisProfile.from_proportions(self.axis,
                                                 [0.25, 0.25, 0.25, 0.25])
        expected = ds_value(AxisProfile.from_proportions(self.axis, q),
                            reference)
        rng = np.random.RandomState(21)
        values = []
        for _ in range(50):
            w = RollingWindow(self.axis, 1000, reference)
            for index in rng.choice(4, size=1000):
                w.push(self.axis.groups[index])
            for index in rng.choice(4, size=1000, p=q):
                w.push(self.axis.groups[index])
            values.append(w.similarity()[0])
        # against the uniform reference ds only moves with the share of "A"
        sigma = np.sqrt(q[0] * (1 - q[0]) / 1000)
        assert abs(np.mean(values) - expected) <= 3 * sigma / np.sqrt(50)
        assert all(abs(v - expected) <= 5 * sigma for v in values)


class TestMonitor(TestBase):
    def setUp(self):
        super(TestMonitor, self).setUp()
        self.gender = make_axis('gender', 'Male', 'Female')
        self.age = make_axis('age', 'young', 'old')
        self.combo = combination_axis([self.gender, self.age], 'combination')
        axes = [self.gender, self.age, self.combo]
        references = {
            'gender': make_profile(self.gender, [1, 1]),
            'age': make_profile(self.age, [1, 1]),
            'combination': make_profile(self.combo, [1, 1, 1, 1]),
        }
        self.monitor = Monitor(axes, references, capacity=2)

    def test_push(self):
        self.monitor.push({'gender': 'Male', 'age': 'old'})
        sims = self.monitor.similarities()
        assert sims['gender'] == (0.5, True)
        assert sims['combination'] == (0.25, True)
        assert list(self.monitor.windows['combination'].buffer) == \
            ['Male+old']
        assert self.monitor.events == 1

    def test_bad_event_leaves_windows_untouched(self):
        self.monitor.push({'gender': 'Male', 'age': 'old'})
        with self.assertRaises(UnknownGroup):
            self.monitor.push({'gender': 'Female', 'age': 'ancient'})
        with self.assertRaises(MissingAssignment):
            self.monitor.push({'gender': 'Female'})
        assert [len(w) for w in self.monitor.windows.values()] == [1, 1, 1]
        assert self.monitor.events == 1

    def test_missing_reference(self):
        with self.assertRaises(AxisMismatch):
            Monitor([self.gender], {}, 2)
