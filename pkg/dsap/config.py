import configparser
import os

from appdirs import user_config_dir

from .utils import memoized

DEFAULTS = {
    'defaults': {
        'threshold': '0.6',
        'capacity': '1000',
        'every': '1',
    },
    'output': {
        'format': 'json',
        'color': 'true',
    }
}


@memoized
def module_path():
    return os.path.dirname(__file__)


class Config(object):
    """
    Wrapper around ConfigParser that provides a way to check for existence
    as well as a default kwargs for get that provides a default value
    """

    def __init__(self, path=None):
        self._path = path
        self._config = configparser.ConfigParser()
        self.load()

    def path(self):
        return self._path or config_ini_path()

    def load(self):
        self._config = configparser.ConfigParser()

        if os.path.exists(self.path()):
            self._config.read(self.path())

    def has(self, section, option):
        """
        Checks if the given section and option exists

        :param section: str
        :param option: str
        :return: bool
        """
        if not self._config.has_section(section):
            return False
        return self._config.has_option(section, option)

    def get(self, section, option, **kwargs):
        """
        Get an option from the configuration, if the option does not exists
        the builtin default is used, then the default kwarg, otherwise
        raises a configparser.Error

        :param section: str
        :param option: str
        :param default: any
        :return: str
        """
        if not self.has(section, option):
            if 'default' in kwargs:
                return kwargs['default']
            if option in DEFAULTS.get(section, {}):
                return DEFAULTS[section][option]
        kwargs.pop('default', None)
        return self._config.get(section, option, **kwargs)

    def set(self, section, option, value):
        """
        Set an option in the configuration, does not save the config

        :param section: str
        :param option: str
        :param value: any
        :return:
        """
        if not self._config.has_section(section):
            self._config.add_section(section)
        self._config.set(section, option, str(value))

    def unset(self, section, option):
        """
        Unset an option in the configuration, does not save the config

        :param section: str
        :param option: str
        :return: bool
        """
        if not self._config.has_section(section):
            return False
        if not self._config.has_option(section, option):
            return False
        self._config.remove_option(section, option)
        return True

    def save(self):
        """
        Save the config file, creating its folder when needed

        :return: bool
        """
        folder = os.path.dirname(self.path())
        if folder and not os.path.isdir(folder):
            os.makedirs(folder)
        with open(self.path(), 'w') as f:
            self._config.write(f)
            return True

    def dump(self):
        items = {}
        for section, values in DEFAULTS.items():
            items[section] = dict(values)
        for section in self._config.sections():
            items.setdefault(section, {})
            for key, value in self._config.items(section):
                items[section][key] = value
        return items


def config_dir():
    return user_config_dir(app_name)


def config_ini_path():
    if os.environ.get('DSAP_CONFIG'):
        return os.environ['DSAP_CONFIG']
    return os.path.join(config_dir(), 'config.ini')


def default_threshold():
    return float(config.get('defaults', 'threshold'))


def default_capacity():
    return int(config.get('defaults', 'capacity'))


def default_every():
    return int(config.get('defaults', 'every'))


def default_format():
    return config.get('output', 'format')


def use_color():
    if os.environ.get('DSAP_NO_COLOR'):
        return False
    return config.get('output', 'color') == 'true'


app_name = 'dsap'

config = Config()
