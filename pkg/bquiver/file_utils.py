import glob
import json
import os
import pickle
from datetime import datetime


def add_timestamp(file_name):
    """
    Add timestamp to a file name.

    Parameters
    ----------
    file_name : str
        The name of the file to which the timestamp should be added.

    Returns
    -------
    str
        The new file name with the added timestamp.

    Notes
    -----
    Function Name: add_timestamp
    The timestamp has the format YYYYMMDD_HHMMSS and is inserted before the
    file extension.

    Examples
    --------
    >>> add_timestamp("verify_Q7.json")
    "verify_Q7_20260706_121510.json"
    """
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    root, extension = os.path.splitext(file_name)
    return root + '_' + timestamp + extension


def get_latest_file(file_pattern, verbose=False):
    """
    Get the latest file from a given file pattern.

    Parameters
    ----------
    file_pattern : str
        The pattern to match the files (e.g., "reports/verify_Q7_*.json").
    verbose : bool, optional
        Print the file that was found.

    Returns
    -------
    str or None
        The file name with the latest timestamp, including the file path.
        If no files carry a timestamp, None is returned.

    Notes
    -----
    Function Name: get_latest_file
    The timestamp is read from the last two underscore separated fields of
    the file name, as written by add_timestamp. Files without a timestamp
    are ignored.

    Examples
    --------
    >>> get_latest_file("reports/verify_Q7_*.json")
    "reports/verify_Q7_20260706_121510.json"
    """
    stamped = []
    for path in glob.glob(file_pattern):
        stem = os.path.splitext(os.path.basename(path))[0]
        try:
            stamp = datetime.strptime('_'.join(stem.split('_')[-2:]), "%Y%m%d_%H%M%S")
        except ValueError:
            continue
        stamped.append((stamp, path))
    if not stamped:
        if verbose:
            print('No files found')
        return None
    latest_file = max(stamped)[1]
    if verbose:
        print(f'Latest file: {latest_file}')
    return latest_file


def save_pickle(data, filename):
    """
    Save data as a pickle file.

    Parameters
    ----------
    data : object
        The data to be saved, e.g. a kernel basis.
    filename : str
        The name of the file to which the data will be saved.
    """
    with open(filename, 'wb') as f:
        pickle.dump(data, f)


def load_pickle(filename, verbose=False):
    """
    Load data from a pickle file.

    Parameters
    ----------
    filename : str
        The name of the pickle file from which the data will be loaded.
    verbose : bool, optional
        Print a message once the file is loaded.

    Returns
    -------
    object
        The loaded data.
    """
    with open(filename, 'rb') as f:
        data = pickle.load(f)
    if verbose:
        print(f'loaded {filename} successfully')
    return data


def save_report(report, directory, name=None):
    """
    Write a verification report as JSON under a timestamped name.

    Parameters
    ----------
    report : dict
        The report of verify_conjecture.
    directory : str
        Created when missing.
    name : str, optional
        Base file name; "verify_Q<n>.json" by default.

    Returns
    -------
    str
        The path of the written file.
    """
    os.makedirs(directory, exist_ok=True)
    name = name or f"verify_Q{report['n']}.json"
    path = os.path.join(directory, add_timestamp(name))
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(report, f, indent=2, ensure_ascii=False)
    return path


def load_report(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def save_dataframe(df, path):
    '''Write a DataFrame as CSV without the index'''
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    df.to_csv(path, index=False)
    return path
