import json
import logging
import os
from pathlib import Path

from .algebra import AtlasError, VarTable, format_scalar, parse_scalar
from .atlas import Atlas, Chart, TransitionMap

log = logging.getLogger(__file__)


def atlas_to_dict(atlas):
    """
        JSON-ready description of an atlas: its dimension, the charts with their coordinate names and every
        stored transition with the images written in the textual scalar syntax.
    """
    return {
        'name': atlas.name,
        'dims': list(atlas.dims),
        'charts': [{'name': chart.name, 'even': list(chart.table.even), 'odd': list(chart.table.odd)}
                   for chart in atlas.charts],
        'transitions': [{'from': source, 'to': target,
                         'images': {name: format_scalar(image)
                                    for name, image in atlas.transition(source, target).images.items()}}
                        for source, target in atlas.pairs()],
    }


def atlas_from_dict(data):
    """
        Builds an `Atlas` from the output of `atlas_to_dict`.

        # Parameters
            data: dict
                with keys `charts`, `transitions` and optionally `name` and `dims`.

        # Returns
            The `Atlas`; structural problems raise `AtlasError`.
    """
    try:
        charts = [Chart(entry['name'], VarTable(even=entry.get('even', ()), odd=entry.get('odd', ())))
                  for entry in data['charts']]
    except (KeyError, TypeError) as error:
        raise AtlasError('Malformed chart list: {}.'.format(error))
    by_name = {chart.name: chart for chart in charts}
    transitions = []
    for entry in data.get('transitions', []):
        try:
            source, target = by_name[entry['from']], by_name[entry['to']]
            images = {name: parse_scalar(text, source.table) for name, text in entry['images'].items()}
        except KeyError as error:
            raise AtlasError('Transition {} refers to unknown data {}.'.format(entry, error))
        transitions.append(TransitionMap(source, target, images))
    atlas = Atlas(charts, transitions, name=data.get('name', 'atlas'))
    if 'dims' in data and tuple(data['dims']) != atlas.dims:
        raise AtlasError('Declared dimension {} does not match the charts of dimension {}|{}.'.format(
            data['dims'], *atlas.dims))
    log.debug('read {}'.format(atlas))
    return atlas


def load_atlas(filename, **kwargs):
    """
        Loads an atlas from a json file.

        # Parameters
            filename: basestring
                name of the file which is going to be loaded.
            kwargs: dict
                dictionary of additional arguments passed to `json.load`.

        # Returns
            The loaded `Atlas`.

        # Example
        ```python
        import superbv
        atlas = superbv.load_atlas("./tests/data/v1/conic.json")
        ```
    """
    if not os.path.exists(filename):
        raise FileNotFoundError('Did not find file {}.'.format(filename))
    suffixes = Path(filename).suffixes
    ext = suffixes[-1][1:] if suffixes else ''
    if ext != 'json':
        raise ValueError('"{}" does not end on a valid extension.\n'
                         'Please, provide a json atlas description.\n'.format(filename))
    with open(filename) as handle:
        try:
            data = json.load(handle, **kwargs)
        except json.JSONDecodeError as error:
            raise ValueError('{} is not valid json: {}'.format(filename, error))
    return atlas_from_dict(data)


def dump_atlas(atlas, filename):
    """
        Writes `atlas_to_dict(atlas)` to `filename`, creating the directory when needed.
    """
    directory = os.path.dirname(filename)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(filename, 'w') as handle:
        json.dump(atlas_to_dict(atlas), handle, indent=2)
    log.info('wrote {} to {}'.format(atlas.name, filename))
