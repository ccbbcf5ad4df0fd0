# -*- coding: utf-8 -*-
"""Renders the API pages listed in `docs/structure.py` into `docs/sources` for MkDocs."""
import inspect
import logging
import os
import re
import shutil
from pathlib import Path

import superbv

from docs.structure import PAGES

log = logging.getLogger(__file__)

superbv_dir = Path(__file__).resolve().parents[1]
SOURCE_URL = '../'


def clean_module_name(name):
    if not name.startswith('superbv.'):
        raise ValueError('Invalid module name: {}'.format(name))
    # private implementation modules are documented under their package
    return '.'.join(part for part in name.split('.') if not part.startswith('_'))


def get_function_signature(function, method=True):
    signature = inspect.signature(function)
    parameters = list(signature.parameters.values())
    if method and parameters and parameters[0].name in ('self', 'cls'):
        parameters = parameters[1:]
    text = str(signature.replace(parameters=parameters))
    return '{}.{}{}'.format(clean_module_name(function.__module__), function.__name__, text)


def get_class_signature(cls):
    if '__init__' in cls.__dict__ or hasattr(cls, '__dataclass_fields__'):
        return get_function_signature(cls.__init__).replace('__init__', cls.__name__)
    return '{}.{}()'.format(clean_module_name(cls.__module__), cls.__name__)


def class_to_source_link(cls):
    path = cls.__module__.replace('.', '/') + '.py'
    line = inspect.getsourcelines(cls)[-1]
    return '[[source]]({}{}#L{})'.format(SOURCE_URL, path, line)


def code_snippet(snippet):
    return '```python\n{}\n```\n'.format(snippet)


def count_leading_spaces(s):
    ws = re.search(r'\S', s)
    return ws.start() if ws else 0


def process_list_block(docstring, starting_point, section_end, leading_spaces, marker):
    ending_point = docstring.find('\n\n', starting_point)
    block = docstring[starting_point:(ending_point - 1 if ending_point > -1 else section_end)]
    # Place marker for later reinjection.
    docstring_slice = docstring[starting_point:section_end].replace(block, marker)
    docstring = docstring[:starting_point] + docstring_slice + docstring[section_end:]
    lines = [re.sub('^' + ' ' * leading_spaces, '', line) for line in block.split('\n')]
    # `name: type` roots become bold list items, everything else loses one indent level
    lines = [re.sub(r'^    ([^\s\\\(]+):(.*)', r'- __\1__:\2', line) for line in lines]
    lines = [re.sub(r'^    ', '', line) for line in lines]
    indent = 0
    text_block = False
    for i, line in enumerate(lines):
        spaces = re.search(r'\S', line)
        if not spaces:
            text_block = False
            indent = 0
        elif line[spaces.start()] == '-':
            indent = spaces.start() + 1
            if text_block:
                text_block = False
                lines[i] = '\n' + line
        elif spaces.start() < indent:
            text_block = True
            indent = spaces.start()
            lines[i] = '\n' + line
    return docstring, '\n'.join(lines)


def _extract_code_blocks(docstring):
    code_blocks = []
    tmp = docstring[:]
    while '```' in tmp:
        tmp = tmp[tmp.find('```'):]
        index = tmp[3:].find('```') + 6
        snippet = tmp[:index]
        docstring = docstring.replace(snippet, '$CODE_BLOCK_{}'.format(len(code_blocks)))
        lines = snippet.split('\n')
        fence_indent = lines[-1].find('`')
        lines = [lines[0]] + [line[fence_indent:] for line in lines[1:]]
        inner = [count_leading_spaces(line) for line in lines[1:-1] if line.strip()]
        shift = min(inner) if inner else 0
        if shift:
            lines = [lines[0]] + [line[shift:] for line in lines[1:-1]] + [lines[-1]]
        code_blocks.append('\n'.join(lines))
        tmp = tmp[index:]
    return docstring, code_blocks


def process_docstring(docstring):
    docstring, code_blocks = _extract_code_blocks(docstring)

    section_regex = r'\n( +)# (.*)\n'
    section_idx = re.search(section_regex, docstring)
    shift = 0
    sections = {}
    while section_idx and section_idx.group(2):
        anchor = section_idx.group(2)
        leading_spaces = len(section_idx.group(1))
        shift += section_idx.end()
        next_section_idx = re.search(section_regex, docstring[shift:])
        section_end = -1 if next_section_idx is None else shift + next_section_idx.start()
        marker = '$' + anchor.replace(' ', '_') + '$'
        docstring, content = process_list_block(docstring, shift, section_end, leading_spaces, marker)
        sections[marker] = content
        section_idx = re.search(section_regex, docstring[shift:])

    docstring = re.sub(r'\n(\s+)# (.*)\n', r'\n\1__\2__\n\n', docstring)
    docstring = '\n'.join(line.lstrip(' ') for line in docstring.split('\n'))
    for marker, content in sections.items():
        docstring = docstring.replace(marker, content)
    for i, code_block in enumerate(code_blocks):
        docstring = docstring.replace('$CODE_BLOCK_{}'.format(i), code_block)
    return docstring


def render_function(function, method=True):
    signature = get_function_signature(function, method=method)
    if method:
        signature = signature.replace(clean_module_name(function.__module__) + '.', '')
    blocks = ['### ' + function.__name__ + '\n', code_snippet(signature)]
    if function.__doc__:
        blocks.append(process_docstring(function.__doc__))
    return '\n\n'.join(blocks)


def render_class(cls):
    blocks = ['<span style="float:right;">' + class_to_source_link(cls) + '</span>',
              '### ' + cls.__name__ + '\n',
              code_snippet(get_class_signature(cls))]
    if cls.__doc__:
        blocks.append(process_docstring(cls.__doc__))
    return '\n'.join(blocks)


def read_page_data(page_data, kind):
    if kind not in ('classes', 'functions'):
        raise ValueError('Unknown page entry kind {}.'.format(kind))
    data = list(page_data.get(kind, []))
    for module in page_data.get('all_module_{}'.format(kind), []):
        found = []
        for name in dir(module):
            if name.startswith('_'):
                continue
            member = getattr(module, name)
            wanted = inspect.isclass(member) if kind == 'classes' else inspect.isfunction(member)
            if wanted and member.__module__.startswith(module.__name__) and member not in found + data:
                found.append(member)
        found.sort(key=lambda member: inspect.getsourcelines(member)[-1])
        data += found
    return data


def render_page(page_data):
    blocks = [render_class(cls) for cls in read_page_data(page_data, 'classes')]
    blocks += [render_function(function, method=False) for function in read_page_data(page_data, 'functions')]
    if not blocks:
        raise RuntimeError('Found no content for page {}'.format(page_data['page']))
    return '\n----\n\n'.join(blocks)


def generate(sources_dir):
    """
        Generates the markdown files for the documentation.

        # Parameters
            sources_dir: basestring
                where to put the markdown files.
    """
    template_dir = os.path.join(str(superbv_dir), 'docs', 'templates')
    if os.path.exists(sources_dir):
        log.info('cleaning up {}'.format(sources_dir))
        shutil.rmtree(sources_dir)
    shutil.copytree(template_dir, sources_dir)

    log.info('generating docs for superbv {}'.format(superbv.__version__))
    for page_data in PAGES:
        markdown = render_page(page_data)
        path = os.path.join(sources_dir, page_data['page'])
        if os.path.exists(path):
            template = Path(path).read_text()
            if '{{autogenerated}}' not in template:
                raise RuntimeError('Template found for {} but missing {{{{autogenerated}}}} tag.'.format(path))
            markdown = template.replace('{{autogenerated}}', markdown)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        Path(path).write_text(markdown)
        log.info('wrote {}'.format(path))


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO)
    generate(os.path.join(str(superbv_dir), 'docs', 'sources'))
