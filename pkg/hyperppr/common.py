#!env python
"""
    I hold the helpers shared by the command line tools: logging levels,
    file loading, configuration files and table output.
"""


# python libraries
import json
import logging
import textwrap


import yaml
from tabulate import tabulate
from termcolor import colored


LOG = logging.getLogger(__name__)
QUIET_LOGGERS = ['cvxpy', 'halo']


def set_level(verbosity: int) -> None:
    """Sets the logging level based on command line provided verbosity.

    By default `cvxpy` and `halo` are quiet and only show logging statements
    at the `ERROR` level.  They follow the package level when verbosity is
    greater than 1 (-vv, -vvv, etc).

    Args:
        verbosity
            0-based level of verbosity provide on CLI

    Returns:
        None
    """
    level = logging.WARNING - 10 * min(verbosity, 2)
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.ERROR)
        if verbosity > 1:
            logging.getLogger(name).setLevel(logging.DEBUG)
    logging.getLogger('hyperppr').setLevel(level)


def load_file(filename: str) -> str:
    """
        I return the content of the file.

        Args
            filename: string of the file to load

        Returns
            string of the file contents
    """
    with open(filename, encoding='utf8') as file_handler:
        return file_handler.read()


def load_config(filename: str) -> dict:
    """I load run defaults from a json or yaml file

    Args:
        filename (str): the file to load defaults from

    Returns:
        dict: of the defaults, keys use the long flag names
            {
                'alpha': 0.1,
                'total-time': 30
            }
    """
    file_data = load_file(filename)
    if filename.lower().endswith('yaml') or filename.lower().endswith('yml'):
        dict_data = yaml.safe_load(file_data)
    elif filename.lower().endswith('json'):
        dict_data = json.loads(file_data)
    else:
        raise ValueError('unable to load config file, use .json, .yaml or .yml')
    if dict_data is None:
        return {}
    if not isinstance(dict_data, dict):
        raise ValueError('config file must hold a mapping')
    LOG.debug(json.dumps(dict_data, indent=2, default=str))
    return {str(key).replace('-', '_'): value for key, value in dict_data.items()}


def dump_json(data) -> str:
    """
        I return data as stable json text, sorted keys and two space indent.
    """
    return json.dumps(data, indent=2, sort_keys=True, default=str) + '\n'


def _cell(value) -> str:
    if value is True:
        return colored('True', 'green')
    if value is False:
        return colored('False', 'red')
    if isinstance(value, float):
        value = f'{value:.6g}'
    value = str(value)
    if len(value) > 50:
        value = textwrap.fill(value, 50)
    return value


def display_table(records: list, title: str = 'Results') -> str:
    """
        I render a list of dicts as a grid table, verdicts coloured.

        Args:
            records: rows, every row with the same keys
            title: line printed above the table

        Returns:
            str: the title and the table
    """
    headers = []
    result = []
    for record in records:
        if not headers:
            headers = list(record.keys())
        result += [[_cell(value) for value in record.values()]]
    LOG.debug(json.dumps(records, indent=2, default=str))
    return f'{title}\n' + tabulate(result, headers, tablefmt='grid') + '\n'
