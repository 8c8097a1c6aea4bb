import os
import shutil
import tempfile

from unittest import TestCase

from ..config import config
from ..profile import AxisProfile, DemographicAxis, SampleRecord

FIXTURE_PATH = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture(name):
    return os.path.join(FIXTURE_PATH, name)


def make_axis(axis_id, *groups):
    return DemographicAxis(axis_id, tuple(groups))


def make_profile(axis, counts):
    return AxisProfile.from_counts(axis, counts)


def make_records(axis_id, groups, **kwargs):
    """
    One record per group, sample ids numbered in order
    """
    return [SampleRecord(sample_id='s%d' % i, assignments={axis_id: group},
                         **kwargs)
            for i, group in enumerate(groups)]


class TestBase(TestCase):
    @classmethod
    def setUpClass(cls):
        # point the config to our fixture
        cls._original_path = config._path
        config._path = fixture('config.ini')
        config.load()

    @classmethod
    def tearDownClass(cls):
        # restore it on teardown
        config._path = cls._original_path
        config.load()

    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix='dsap-test-')

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def write(self, name, text):
        path = os.path.join(self.tmp, name)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        return path
