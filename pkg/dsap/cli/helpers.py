import click
import io
import os
import sys

from click import unstyle
from collections import OrderedDict
from functools import update_wrapper

from ..config import use_color, default_format
from ..errors import DsapError
from ..ingest import load_axes, load_predictions, FAIRFACE_RENAMES, \
    COMBINATION
from ..log import set_log_level, set_log_file, get_logger, \
    verbosity_level
from ..profile import aggregate_by_subject, build_dataset_profile, \
    combination_axis, homogenize_labels, EmptyPopulation
from ..utils import jinja_env, memoized, split_list, split_pairs

logger = get_logger('cli.helpers')


# Have both -h and --help
class Command(click.Command):
    def __init__(self, *args, **kwargs):
        cs = dict(help_option_names=['-h', '--help'])
        super(Command, self).__init__(context_settings=cs,
                                      *args, **kwargs)


# Automatically load commands from the commands folder
class DsapCLI(click.Group):
    def __init__(self, command_dir, *args, **kwargs):
        cs = dict(help_option_names=['-h', '--help'])
        params = [
            click.Option(
                param_decls=['-v', '--verbose'],
                count=True,
                help='Make commands verbose, use '
                     'multiple time for higher verbosity'
            ),
            click.Option(
                param_decls=['--log-file'],
                help='When using the verbose flag, redirects '
                     'output to this file'
            )
        ]
        super(DsapCLI, self).__init__(context_settings=cs, params=params,
                                      *args, **kwargs)
        self.command_dir = command_dir

    def list_commands(self, ctx):
        rv = [filename[:-3].replace('_', '-') for filename in
              os.listdir(self.command_dir)
              if filename.endswith('.py') and
              not filename.startswith('__')]
        rv.sort()
        return rv

    def get_command(self, ctx, name):
        ns = {}
        fn = os.path.join(self.command_dir, name.replace('-', '_') + '.py')

        if not os.path.exists(fn):
            return None

        with open(fn) as f:
            code = compile(f.read(), fn, 'exec')
            eval(code, ns, ns)
        return ns['cli']

    def invoke(self, ctx):  # noqa
        # setup logging
        if ctx.params.get('verbose'):
            set_log_level(verbosity_level(ctx.params['verbose']))
        if ctx.params.get('log_file'):
            set_log_file(ctx.params['log_file'])

        # try running the command
        try:
            return super(DsapCLI, self).invoke(ctx)
        except (SystemExit, click.exceptions.Exit, click.Abort):
            raise
        except click.UsageError as e:
            error('error: %s' % e.format_message())
            if e.ctx is not None:
                click.echo(e.ctx.command.get_help(e.ctx), err=True)
            sys.exit(e.exit_code)
        except click.ClickException:
            raise
        except DsapError as e:
            logger.debug('%s failed', ctx.invoked_subcommand,
                         exc_info=sys.exc_info())
            fatal('error: %s' % e, code=e.exit_code)
        except KeyboardInterrupt:
            logger.error('keyboard interrupt while running subcommand "%s"',
                         ctx.invoked_subcommand, exc_info=sys.exc_info())
            warning('\nwarning: ctrl+c pressed, aborting')
            sys.exit(130)
        except Exception:
            logger.error('uncaught exception while running subcommand "%s"',
                         ctx.invoked_subcommand, exc_info=sys.exc_info())
            fatal('error: an internal exception caused "%s" '
                  'to exit unexpectedly' % ctx.invoked_subcommand)


class Pipeline(object):
    """
    Everything the commands share: the schema, the selected axes and the
    prepared records of each dataset

    :param schema: str path to the axis schema
    :param predictions: str path to the prediction table
    """

    def __init__(self, schema, predictions, axes=None, combination=None,
                 datasets=None, aggregate=True, keep_classes=None,
                 label_map=None, renames=None):
        self.schema_axes = load_axes(schema)
        self.by_id = OrderedDict((a.id, a) for a in self.schema_axes)
        self.axes = self._select(axes, combination)
        self._predictions = predictions
        self._datasets = datasets
        self._aggregate = aggregate
        self._keep_classes = keep_classes
        self._label_map = label_map
        self._renames = renames

    def _axis(self, axis_id, option):
        if axis_id not in self.by_id:
            raise click.BadParameter('unknown axis "%s"' % axis_id,
                                     param_hint=option)
        return self.by_id[axis_id]

    def _select(self, axes, combination):
        names = axes or list(self.by_id)
        selected = [self._axis(a, '--axes') for a in names
                    if a != COMBINATION]
        if COMBINATION in names or combination:
            # a bare "combination" crosses every schema axis
            components = [self._axis(a, '--combination')
                          for a in (combination or
                                    [a.id for a in selected] or
                                    list(self.by_id))]
            try:
                selected.append(combination_axis(components, COMBINATION))
            except DsapError as e:
                raise click.BadParameter(str(e), param_hint='--combination')
        return selected

    def component_axes(self, combo):
        return [self.by_id[a] for a in combo.components]

    def axis(self, axis_id):
        for axis in self.axes:
            if axis.id == axis_id:
                return axis
        raise click.BadParameter('axis "%s" is not selected' % axis_id)

    @memoized
    def records(self):
        """
        :return: OrderedDict[str,list[SampleRecord]]
        """
        loaded = load_predictions(self._predictions, self.schema_axes,
                                  self._renames)
        if self._datasets:
            unknown = [d for d in self._datasets if d not in loaded]
            if unknown:
                raise click.BadParameter('unknown dataset: %s' %
                                         ', '.join(unknown),
                                         param_hint='--dataset')
            loaded = OrderedDict((d, loaded[d]) for d in self._datasets)
        if not loaded:
            raise EmptyPopulation('no samples in %s' % self._predictions)

        prepared = OrderedDict()
        for dataset_id, records in loaded.items():
            if self._keep_classes or self._label_map:
                records = homogenize_labels(records, self._keep_classes,
                                            self._label_map)
            if not records:
                raise EmptyPopulation('dataset "%s" has no samples left '
                                      'after label filtering' % dataset_id)
            if self._aggregate and any(r.subject_id for r in records):
                before = len(records)
                records = aggregate_by_subject(records, self.schema_axes)
                logger.info('dataset %s: %d samples aggregated into %d '
                            'records', dataset_id, before, len(records))
            prepared[dataset_id] = records
        return prepared

    @memoized
    def profiles(self):
        """
        :return: OrderedDict[str,DatasetProfile]
        """
        return OrderedDict(
            (dataset_id, build_dataset_profile(dataset_id, records,
                                               self.axes))
            for dataset_id, records in self.records().items())


def _wraps(wrapper, func):
    # keep the click options of both the wrapper and the wrapped command
    params = getattr(wrapper, '__click_params__', [])
    update_wrapper(wrapper, func)
    wrapper.__click_params__ = getattr(func, '__click_params__', []) + \
        params
    return wrapper


def _pairs(option):
    def _callback(ctx, param, values):
        try:
            return split_pairs(values)
        except ValueError as e:
            raise click.BadParameter(str(e), param_hint=option)
    return _callback


def _list(ctx, param, value):
    return split_list(value)


# resolve the schema and predictions into a Pipeline
def pipeline_options(func):
    @click.option('-s', '--schema', required=True,
                  type=click.Path(exists=True, dir_okay=False),
                  help='Axis schema CSV (axis_id,group_id)')
    @click.option('-i', '--predictions', required=True,
                  type=click.Path(exists=True, dir_okay=False),
                  help='Per-sample prediction CSV')
    @click.option('--axes', callback=_list, metavar='AXIS[,AXIS]',
                  help='Axes to use, "combination" adds the combination '
                       'axis, defaults to every declared axis')
    @click.option('--combination', callback=_list, metavar='AXIS,AXIS',
                  help='Axes forming the combination axis, defaults to '
                       'the selected axes')
    @click.option('-d', '--dataset', 'datasets', multiple=True,
                  help='Only use this dataset, can be repeated')
    @click.option('--no-aggregate', is_flag=True, default=False,
                  help='Keep every sample instead of one per subject')
    @click.option('--keep-classes', callback=_list, metavar='LABEL[,LABEL]',
                  help='Only keep samples with these class labels')
    @click.option('--label-map', multiple=True, callback=_pairs('--label-map'),
                  metavar='OLD=NEW', help='Rename a class label')
    @click.option('--rename', multiple=True, callback=_pairs('--rename'),
                  metavar='OLD=NEW', help='Rename a prediction column')
    @click.option('--fairface', is_flag=True, default=False,
                  help='Apply the FairFace column renames')
    @click.pass_context
    def _deco(ctx, schema, predictions, axes, combination, datasets,
              no_aggregate, keep_classes, label_map, rename, fairface,
              *args, **kwargs):
        renames = OrderedDict(FAIRFACE_RENAMES) if fairface else \
            OrderedDict()
        renames.update(rename)
        pipeline = Pipeline(schema, predictions,
                            axes=axes,
                            combination=combination,
                            datasets=list(datasets),
                            aggregate=not no_aggregate,
                            keep_classes=keep_classes,
                            label_map=label_map,
                            renames=renames)
        return ctx.invoke(func, pipeline=pipeline, *args, **kwargs)

    return _wraps(_deco, func)


def output_options(*formats):
    """
    Add --format and --output, the first format is the default unless the
    configured default format is supported
    """
    def _wrap(func):
        @click.option('-f', '--format', 'fmt', type=click.Choice(formats),
                      default=None,
                      help='Output format (default: %s)' % formats[0])
        @click.option('-o', '--output', type=click.Path(dir_okay=False),
                      help='Write the report to this file instead of stdout')
        @click.pass_context
        def _deco(ctx, fmt, output, *args, **kwargs):
            if fmt is None:
                fmt = default_format()
                if fmt not in formats:
                    fmt = formats[0]
            return ctx.invoke(func, fmt=fmt, output=output, *args, **kwargs)
        return _wraps(_deco, func)
    return _wrap


def emit(text, output, summary=None):
    """
    Write a payload to the output file and show the summary, or write the
    payload to stdout when no file is given

    :param text: str
    :param output: str|None
    :param summary: callable returning the summary text
    """
    if not output:
        click.echo(text, nl=False)
        return
    with io.open(output, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    if summary is not None:
        echo(summary(), nl=False)


# small cli helpers
def echo(text, **kwargs):
    click.echo(text, color=use_color(), **kwargs)


def info(text, **kwargs):
    click.secho(text, fg='cyan', color=use_color(), **kwargs)


def warning(text, **kwargs):
    click.secho(text, fg='yellow', err=True, color=use_color(), **kwargs)


def error(text, **kwargs):
    click.secho(text, fg='red', err=True, color=use_color(), **kwargs)


def fatal(text, code=1, **kwargs):
    error(text, **kwargs)
    sys.exit(code)


def score(value, fmt='%.3f'):
    """
    Colored score for summaries, None is shown as "undefined"
    """
    if value is None:
        return click.style('undefined', fg='yellow')
    color = 'green' if value >= 0.8 else 'yellow' if value >= 0.5 else 'red'
    return click.style(fmt % value, fg=color)


class CLITable(object):
    """
    Helps displaying a dynamically sized table a la docker ps
    """
    COL_PADDING = 2

    def __init__(self, *cols):
        self._cols = cols

    def _str(self, data, size):
        str_real_len = len(unstyle(data))
        return data + (' ' * (size - str_real_len))

    def _compute_col_sizes(self, data):
        sizes = {}
        # prepend data with header
        data = [dict(zip(self._cols, self._cols))] + data
        for row in data:
            for name, row_data in row.items():
                real_len = len(unstyle(row_data))
                if name not in sizes or real_len > sizes[name]:
                    sizes[name] = real_len
        # filter unknown values
        self._sizes = dict([
            (key, length + self.COL_PADDING)
            for key, length in sizes.items()
            if key in self._cols
        ])

    def render(self, data):
        if not isinstance(data, list):
            data = [data]

        self._compute_col_sizes(data)

        lines = [''.join(self._str(name.upper(), self._sizes[name])
                         for name in self._cols).rstrip()]
        for row in data:
            lines.append(''.join(self._str(row.get(name, ''),
                                           self._sizes[name])
                                 for name in self._cols).rstrip())
        return '\n'.join(lines)

    def echo(self, data):
        echo(self.render(data))


class JinjaColors(object):
    def __getattr__(self, item):
        return click.style('', fg=item, reset=False)


def render_cli(template, **kwargs):
    env = jinja_env('dsap.cli', 'templates')
    template = env.get_template(template + '.j2')
    kwargs['fg'] = JinjaColors()
    kwargs['bold'] = click.style('', bold=True, reset=False)
    kwargs['reset'] = click.style('')
    kwargs['score'] = score
    return template.render(**kwargs)
