import io
import json
import os

from unittest import mock

from click.testing import CliRunner

from .test_base import TestBase, fixture
from ..cli.main import get_cli
from ..config import config
from ..log import reset_logging, verbosity_level

DATA = ['-s', fixture('axes.csv'), '-i', fixture('predictions.csv')]


class CLITestBase(TestBase):
    def setUp(self):
        super(CLITestBase, self).setUp()
        self.runner = CliRunner()

    def run_cli(self, *args, **kwargs):
        return self.runner.invoke(get_cli(), list(args), **kwargs)

    def run_to_file(self, *args):
        """
        Run a command writing its payload to a file, returns (result, text)
        """
        path = os.path.join(self.tmp, 'out')
        result = self.run_cli(*(list(args) + ['-o', path]))
        text = None
        if os.path.exists(path):
            with io.open(path, encoding='utf-8', newline='') as f:
                text = f.read()
        return result, text


class TestProfileCommand(CLITestBase):
    def test_json(self):
        result = self.run_cli('profile', *DATA)
        assert result.exit_code == 0, result.output
        data = json.loads(result.output)['datasets']
        assert list(data) == ['alpha', 'beta', 'gamma']
        alpha = data['alpha']['axes']['gender']
        assert alpha['counts'] == {'Male': 2, 'Female': 3}
        assert alpha['total'] == 5
        assert data['alpha']['ties'] == {'age': ['s1']}
        assert data['alpha']['classes']['gender']['happy']['rest'][
            'counts'] == {'Male': 1, 'Female': 1}
        assert 'classes' not in data['beta']

    def test_no_aggregate(self):
        result = self.run_cli('profile', '--no-aggregate', '--axes', 'gender',
                              *DATA)
        assert result.exit_code == 0, result.output
        alpha = json.loads(result.output)['datasets']['alpha']
        assert alpha['axes']['gender']['total'] == 6
        assert list(alpha['axes']) == ['gender']

    def test_fairface_combination(self):
        result = self.run_cli('profile', '--fairface',
                              '-s', fixture('fairface_axes.csv'),
                              '-i', fixture('fairface_outputs.csv'),
                              '--axes', 'age,gender,race,combination')
        assert result.exit_code == 0, result.output
        axes = json.loads(result.output)['datasets']['utk']['axes']
        combination = axes['combination']
        assert len(combination['groups']) == 126
        assert abs(sum(combination['proportions'].values()) - 1) <= 1e-9
        assert combination['counts']['20-29+Male+White'] == 1

    def test_bare_combination(self):
        result = self.run_cli('profile', '--axes', 'combination', *DATA)
        assert result.exit_code == 0, result.output
        axes = json.loads(result.output)['datasets']['alpha']['axes']
        assert list(axes) == ['combination']
        assert len(axes['combination']['groups']) == 6
        assert 'Male+young' in axes['combination']['groups']
        assert axes['combination']['total'] == 5

    def test_csv_with_summary(self):
        result, text = self.run_to_file('profile', '-f', 'csv', '-d', 'beta',
                                        *DATA)
        assert result.exit_code == 0, result.output
        assert 'beta' in result.output
        assert text.splitlines()[0] == \
            'dataset_id,axis_id,group_id,count,proportion'
        assert 'beta,gender,Male,3,0.75' in text.splitlines()

    def test_empty_dataset(self):
        path = self.write('empty.csv', 'dataset_id,sample_id,subject_id,'
                                       'class_label,partition,gender,age\n')
        result = self.run_cli('profile', '-s', fixture('axes.csv'),
                              '-i', path)
        assert result.exit_code == 2
        assert 'no samples' in result.output

    def test_unknown_group(self):
        path = self.write('bad.csv', 'dataset_id,sample_id,subject_id,'
                                     'class_label,partition,gender,age\n'
                                     'd,1,,,,Other,young\n')
        result = self.run_cli('profile', '-s', fixture('axes.csv'),
                              '-i', path)
        assert result.exit_code == 2
        assert ':2: column "gender"' in result.output

    def test_unknown_axis(self):
        result = self.run_cli('profile', '--axes', 'height', *DATA)
        assert result.exit_code == 2

    def test_unknown_dataset(self):
        result = self.run_cli('profile', '-d', 'delta', *DATA)
        assert result.exit_code == 2

    def test_label_homogenization(self):
        result = self.run_cli('profile', '--label-map', 'sad=unhappy',
                              '--keep-classes', 'unhappy', '-d', 'alpha',
                              *DATA)
        assert result.exit_code == 0, result.output
        alpha = json.loads(result.output)['datasets']['alpha']
        assert alpha['axes']['gender']['total'] == 2
        assert alpha['skipped_classes'] == {'age': ['unhappy'],
                                            'gender': ['unhappy']}


class TestCompareCommand(CLITestBase):
    def test_json(self):
        result = self.run_cli('compare', '--axes', 'gender', *DATA)
        assert result.exit_code == 0, result.output
        matrix = json.loads(result.output)['matrices']['gender']
        assert matrix['dataset_ids'] == ['alpha', 'beta', 'gamma']
        assert matrix['values'] == [[1.0, 0.65, 0.6],
                                    [0.65, 1.0, 0.25],
                                    [0.6, 0.25, 1.0]]

    def test_identical_datasets(self):
        path = self.write('same.csv', 'dataset_id,sample_id,subject_id,'
                                      'class_label,partition,gender,age\n'
                                      'a,1,,,,Male,young\n'
                                      'b,1,,,,Male,young\n')
        result = self.run_cli('compare', '-s', fixture('axes.csv'),
                              '-i', path)
        assert result.exit_code == 0, result.output
        for matrix in json.loads(result.output)['matrices'].values():
            assert matrix['values'] == [[1.0, 1.0], [1.0, 1.0]]

    def test_external(self):
        result = self.run_cli('compare', '--axes', 'gender', '--external',
                              'census:gender=%s' %
                              fixture('gender_published.csv'), *DATA)
        assert result.exit_code == 0, result.output
        matrix = json.loads(result.output)['matrices']['gender']
        assert matrix['dataset_ids'][-1] == 'census'
        # beta is 75% male, census 25%
        assert matrix['values'][1][3] == 0.5

    def test_external_malformed(self):
        result = self.run_cli('compare', '--external', 'census', *DATA)
        assert result.exit_code == 2

    def test_svg(self):
        result, text = self.run_to_file('compare', '--axes', 'gender',
                                        '-f', 'svg', *DATA)
        assert result.exit_code == 0, result.output
        assert text.startswith('<?xml')
        assert '<svg' in text
        assert 'alpha' in result.output

    def test_svg_needs_one_axis(self):
        result = self.run_cli('compare', '-f', 'svg', *DATA)
        assert result.exit_code == 2

    def test_csv(self):
        result = self.run_cli('compare', '--axes', 'gender', '-f', 'csv',
                              *DATA)
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[:2] == [
            'axis_id,dataset_id,alpha,beta,gamma',
            'gender,alpha,1.0,0.65,0.6']

    def test_single_dataset(self):
        result = self.run_cli('compare', '-d', 'alpha', *DATA)
        assert result.exit_code == 2


class TestBiasCommand(CLITestBase):
    def _reports(self, output):
        data = json.loads(output)
        return dict(((r['dataset_id'], r['axis_id']), r)
                    for r in data['reports']), data

    def test_json(self):
        result = self.run_cli('bias', *DATA)
        assert result.exit_code == 0, result.output
        reports, data = self._reports(result.output)
        gamma = reports[('gamma', 'gender')]
        assert gamma['sei'] is None
        assert gamma['ds_e'] == 1.0
        assert gamma['ds_r'] == 0.5
        assert 'ds_s' not in gamma
        alpha = reports[('alpha', 'gender')]
        assert alpha['target_kind'] == 'uniform'
        assert sorted(alpha['ds_s_per_class']) == ['happy', 'sad']
        assert 'gender' in data['agreement']

    def test_target(self):
        result = self.run_cli('bias', '--axes', 'gender,age,combination',
                              '--target', 'age=%s' %
                              fixture('age_target.csv'), *DATA)
        assert result.exit_code == 0, result.output
        reports, _ = self._reports(result.output)
        assert reports[('beta', 'age')]['target_kind'] == 'custom'
        assert reports[('beta', 'gender')]['target_kind'] == 'uniform'
        assert reports[('beta', 'combination')]['target_kind'] == 'custom'
        assert 'ds_r_delta' in reports[('beta', 'age')]

    def test_target_without_share_for_present_group(self):
        path = self.write('t.csv', 'group_id,proportion\n'
                                      'young,0.5\nadult,0.5\nsenior,0\n')
        result = self.run_cli('bias', '--axes', 'gender,age,combination',
                              '--target', 'age=%s' % path, *DATA)
        assert result.exit_code == 0, result.output
        reports, _ = self._reports(result.output)
        alpha = reports[('alpha', 'age')]
        assert alpha['target_kind'] == 'custom'
        assert alpha['even_target_kind'] == 'uniform'
        assert 'senior' in alpha['even_target_fallback']
        assert reports[('gamma', 'age')]['ds_r'] == 0.0
        beta = reports[('beta', 'age')]
        assert beta['even_target_kind'] == 'custom'
        assert 'even_target_fallback' not in beta
        combination = reports[('alpha', 'combination')]
        assert combination['even_target_kind'] == 'uniform'

    def test_invalid_target(self):
        path = self.write('t.csv', 'group_id,proportion\nyoung,0.7\n')
        result = self.run_cli('bias', '--target', 'age=%s' % path, *DATA)
        assert result.exit_code == 2
        assert 'sum to' in result.output

    def test_measures(self):
        result = self.run_cli('bias', '--measures', 'ds_r', '--axes',
                              'gender', *DATA)
        assert result.exit_code == 0, result.output
        reports, _ = self._reports(result.output)
        assert 'ens' not in reports[('alpha', 'gender')]
        assert 'ds_r' in reports[('alpha', 'gender')]

    def test_unknown_measure(self):
        result = self.run_cli('bias', '--measures', 'gini', *DATA)
        assert result.exit_code == 2

    def test_all_undefined(self):
        result = self.run_cli('bias', '--measures', 'sei,cramers_v',
                              '-d', 'gamma', *DATA)
        assert result.exit_code == 3

    def test_csv(self):
        result = self.run_cli('bias', '-f', 'csv', '--axes', 'gender',
                              '-d', 'gamma', *DATA)
        assert result.exit_code == 0, result.output
        header, row = result.output.splitlines()
        assert header.startswith('dataset_id,axis_id,ds_r,ds_e,ds_s,ens')
        assert row.startswith('gamma,gender,0.5,1.0,,1.0,,1,')


class TestClusterCommand(CLITestBase):
    def test_thresholds(self):
        result = self.run_cli('cluster', '--axes', 'gender', '-t', '0.7',
                              '-t', '0.3', *DATA)
        assert result.exit_code == 0, result.output
        gender = json.loads(result.output)['axes']['gender']
        low, high = gender['assignments']
        assert low['threshold'] == 0.3
        assert low['labels'] == {'alpha': 'A', 'beta': 'B', 'gamma': 'C'}
        assert high['clusters'] == {'A': ['alpha', 'beta'], 'B': ['gamma']}
        assert [m['height'] for m in gender['dendrogram']['merges']] == \
            [0.35, 0.75]

    def test_default_threshold(self):
        result = self.run_cli('cluster', '--axes', 'gender', *DATA)
        assert result.exit_code == 0, result.output
        gender = json.loads(result.output)['axes']['gender']
        assert [a['threshold'] for a in gender['assignments']] == [0.6]

    def test_csv(self):
        result, text = self.run_to_file('cluster', '--axes', 'gender',
                                        '-f', 'csv', *DATA)
        assert result.exit_code == 0, result.output
        assert text.splitlines() == ['axis_id,threshold,dataset_id,cluster',
                                     'gender,0.6,alpha,A',
                                     'gender,0.6,beta,A',
                                     'gender,0.6,gamma,B']
        assert 'clusters written to' in result.output


class TestShiftCommand(CLITestBase):
    def test_json(self):
        result = self.run_cli('shift', '--axes', 'gender', '-d', 'alpha',
                              '-d', 'beta', *DATA)
        assert result.exit_code == 0, result.output
        shifts = json.loads(result.output)['shifts']
        assert shifts['alpha']['per_axis']['gender'] == 0.833333333333
        assert shifts['beta']['per_axis']['gender'] == 0.5
        assert shifts['beta']['partitions'] == ['train', 'test']

    def test_missing_partition(self):
        result = self.run_cli('shift', *DATA)
        assert result.exit_code == 2
        assert 'gamma' in result.output

    def test_bad_partitions(self):
        result = self.run_cli('shift', '--partitions', 'train', *DATA)
        assert result.exit_code == 2


class TestMonitorCommand(CLITestBase):
    def test_events(self):
        result, text = self.run_to_file('monitor', '--axes', 'gender',
                                        '--reference-dataset', 'alpha',
                                        '-e', fixture('events.jsonl'), *DATA)
        assert result.exit_code == 0, result.output
        lines = [json.loads(line) for line in text.splitlines()]
        assert [r['event'] for r in lines] == [1, 2, 3, 4, 5]
        assert lines[0]['axes']['gender'] == {'ds': 0.4, 'warm_up': True}
        # the fixture config sets a capacity of 4
        assert lines[3]['axes']['gender']['warm_up'] is False
        assert lines[4]['axes']['gender']['warm_up'] is False

    def test_stdin_and_every(self):
        with io.open(fixture('events.jsonl'), encoding='utf-8') as f:
            events = f.read()
        result = self.run_cli('monitor', '--every', '2', '--capacity', '10',
                              '-o', os.path.join(self.tmp, 'out'),
                              *DATA, input=events)
        assert result.exit_code == 0, result.output
        with io.open(os.path.join(self.tmp, 'out'), encoding='utf-8') as f:
            lines = [json.loads(line) for line in f]
        assert [r['event'] for r in lines] == [2, 4, 5]
        assert set(lines[0]['axes']) == {'gender', 'age'}

    def test_combination(self):
        result, text = self.run_to_file('monitor', '--axes',
                                        'gender,age,combination',
                                        '-e', fixture('events.jsonl'), *DATA)
        assert result.exit_code == 0, result.output
        first = json.loads(text.splitlines()[0])
        assert 'combination' in first['axes']

    def test_malformed(self):
        path = self.write('events.jsonl', ''.join([
            '{"gender": "Male", "age": "young"}\n',
            'oops\n',
            '{"gender": "Nope", "age": "young"}\n',
            '{"gender": "Female", "age": "senior"}\n',
            '{"gender": "Female", "age": "adult"}\n']))
        result, text = self.run_to_file('monitor', '-e', path, *DATA)
        assert result.exit_code == 0, result.output
        assert ':2: invalid JSON' in result.output
        assert ':3:' in result.output
        assert [json.loads(line)['event'] for line in text.splitlines()] == \
            [1, 2, 3]

        result = self.run_cli('monitor', '--strict', '-e', path, *DATA)
        assert result.exit_code == 2
        assert ':2: invalid JSON' in result.output


class TestMiscCommands(CLITestBase):
    def test_version(self):
        result = self.run_cli('version', '--json')
        assert result.exit_code == 0, result.output
        versions = json.loads(result.output)
        assert 'dsap' in versions
        assert 'scipy' in versions

    def test_version_text(self):
        result = self.run_cli('version')
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0].split() == ['NAME', 'VERSION']
        assert lines[1].split()[0] == 'dsap'

    def test_config(self):
        result = self.run_cli('config', '--raw', 'defaults.threshold')
        assert result.exit_code == 0, result.output
        assert result.output == '0.6\n'

        path = os.path.join(self.tmp, 'config.ini')
        with mock.patch.object(config, '_path', path):
            config.load()
            result = self.run_cli('config', 'defaults.capacity', '50')
            assert result.exit_code == 0, result.output
            assert config.get('defaults', 'capacity') == '50'
            result = self.run_cli('config', 'defaults.capacity', 'many')
            assert result.exit_code == 2
            result = self.run_cli('config', '--unset', 'defaults.capacity')
            assert result.exit_code == 0, result.output
        config.load()

    def test_help(self):
        result = self.run_cli('--help')
        assert result.exit_code == 0
        for command in ('bias', 'cluster', 'compare', 'monitor', 'profile',
                        'shift'):
            assert command in result.output

    def test_verbose(self):
        path = os.path.join(self.tmp, 'dsap.log')
        self.addCleanup(reset_logging)
        result = self.run_cli('-vvv', '--log-file', path, 'profile', *DATA)
        assert result.exit_code == 0, result.output
        with io.open(path, encoding='utf-8') as f:
            assert 'dsap.ingest' in f.read()

    def test_verbosity_level(self):
        assert [verbosity_level(n) for n in (1, 2, 3, 5)] == [30, 20, 10, 10]


class TestDeterminism(CLITestBase):
    def test_byte_identical(self):
        commands = [
            ['profile'], ['profile', '-f', 'csv'],
            ['compare'], ['compare', '-f', 'csv'],
            ['compare', '--axes', 'gender', '-f', 'svg'],
            ['bias'], ['bias', '-f', 'csv'],
            ['cluster', '-t', '0.3', '-t', '0.6'],
            ['cluster', '--axes', 'age', '-f', 'svg'],
            ['shift', '-d', 'alpha', '-d', 'beta'],
            ['monitor', '-e', fixture('events.jsonl')],
        ]
        for args in commands:
            first = self.run_to_file(*(args + DATA))[1]
            second = self.run_to_file(*(args + DATA))[1]
            assert first is not None, args
            assert first == second, args
