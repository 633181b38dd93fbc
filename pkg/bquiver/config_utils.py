import configparser
import os

DEFAULTS = {
    'max_n': '10',
    'threads': '1',
    'j_correction': 'yes',
    'report_dir': 'reports',
}

ENVIRONMENT = {
    'max_n': 'BQUIVER_MAX_N',
    'threads': 'BQUIVER_THREADS',
    'j_correction': 'BQUIVER_J_CORRECTION',
    'report_dir': 'BQUIVER_REPORT_DIR',
}

_TRUE = {'1', 'yes', 'true', 'on'}
_FALSE = {'0', 'no', 'false', 'off'}


class BquiverConfig:
    """
    Settings of the verification runs.

    Parameters
    ----------
    config_file : str, optional
        Path of the configuration file. Defaults to the `BQUIVER_CONFIG`
        environmental variable, then to "config.ini" in the working directory.
    **overrides
        Explicit values for any of the keys; they take precedence.

    Attributes
    ----------
    max_n : int
        Largest n that verify_conjecture accepts.
    threads : int
        Number of worker processes.
    j_correction : bool
        Whether the lift of the (J) families applies the recursive correction.
    report_dir : str
        Directory for saved reports.

    Notes
    -----
    Class Name: BquiverConfig
    Every key is resolved from the explicit override, then the environmental
    variable (BQUIVER_MAX_N, BQUIVER_THREADS, BQUIVER_J_CORRECTION,
    BQUIVER_REPORT_DIR), then the [DEFAULT] section of the configuration
    file, then the built-in default. An invalid value raises a `ValueError`
    naming the key.

    Examples
    --------
    >>> BquiverConfig(max_n=8).max_n
    8
    """

    def __init__(self, config_file=None, **overrides):
        unknown = set(overrides) - set(DEFAULTS)
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(sorted(unknown))}")
        self.config_file = config_file or os.environ.get('BQUIVER_CONFIG', 'config.ini')
        parser = configparser.ConfigParser()
        parser.read(self.config_file)
        raw = {}
        for key, default in DEFAULTS.items():
            if overrides.get(key) is not None:
                raw[key] = str(overrides[key])
            elif os.environ.get(ENVIRONMENT[key]):
                raw[key] = os.environ[ENVIRONMENT[key]]
            else:
                raw[key] = parser.get('DEFAULT', key, fallback=default)
        self.max_n = _positive_int('max_n', raw['max_n'])
        self.threads = _positive_int('threads', raw['threads'])
        self.j_correction = _flag('j_correction', raw['j_correction'])
        self.report_dir = raw['report_dir']

    def as_dict(self):
        return {'max_n': self.max_n, 'threads': self.threads,
                'j_correction': self.j_correction, 'report_dir': self.report_dir}

    def __repr__(self):
        return f'BquiverConfig({self.as_dict()})'


def _positive_int(key, text):
    try:
        value = int(str(text).strip())
    except ValueError:
        raise ValueError(f"Invalid value for {key}: {text!r} is not an integer") from None
    if value < 1:
        raise ValueError(f"Invalid value for {key}: {value} is not positive")
    return value


def _flag(key, text):
    text = str(text).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError(f"Invalid value for {key}: {text!r} is not yes/no")


def load_config(config_file=None, **overrides):
    '''Resolve the settings, see BquiverConfig'''
    return BquiverConfig(config_file, **overrides)
