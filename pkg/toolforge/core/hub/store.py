"""
=============
HUB DIRECTORY
=============

A hub directory holds one JSON tool document per tool plus a `hub.json` manifest:

    {
        "categories": {"Data": ["data/entreapi_faker.json", ...], ...},
        "collections": {"Faker Tools": ["EntreAPI Faker", ...], ...}
    }

Collections listed in the manifest are merged into the tools' own `collections` tags.
"""


from __future__ import annotations

import json
from pathlib import Path
import re

from loguru import logger

from toolforge.core.util.errors import DecodeError

from .doc import Hub, ToolDoc, parse_tool_doc, serialize_tool_doc
from .errors import HubInvariantError


MANIFEST_FILE_NAME: str = 'hub.json'


def _slug(name: str) -> str:
    return re.sub(r'[^a-z0-9]+', '_', name.lower()).strip('_') or 'tool'


def load_hub(hub_dir: Path | str) -> Hub:
    """Load Hub from a hub directory."""
    hub_dir: Path = Path(hub_dir)
    manifest_path: Path = hub_dir / MANIFEST_FILE_NAME

    if not manifest_path.is_file():
        raise FileNotFoundError(f'hub: not found ({manifest_path})')

    try:
        manifest: dict = json.loads(manifest_path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as err:
        raise DecodeError(f'invalid hub manifest: {err.msg}', position=f'{manifest_path}:{err.lineno}') from err

    tools: list[ToolDoc] = []
    for category, rel_paths in manifest.get('categories', {}).items():
        for rel_path in rel_paths:
            tool_path: Path = hub_dir / rel_path
            try:
                tool: ToolDoc = parse_tool_doc(tool_path.read_text(encoding='utf-8'))
            except json.JSONDecodeError as err:
                raise DecodeError(f'invalid tool document: {err.msg}', position=f'{tool_path}:{err.lineno}') from err

            if tool.category != category:
                raise HubInvariantError(f'*** {tool_path} DECLARES CATEGORY "{tool.category}" '
                                        f'BUT IS LISTED UNDER "{category}" ***')
            tools.append(tool)

    for collection, members in manifest.get('collections', {}).items():
        for tool in tools:
            if tool.tool_name in members:
                tool.collections.add(collection)

    hub: Hub = Hub.from_tools(tools, categories=set(manifest.get('categories', {})))
    logger.info(f'loaded hub from {hub_dir}: {len(hub.tools)} tools, {hub.n_apis} APIs, '
                f'{len(hub.categories)} categories, {len(hub.collections)} collections')
    return hub


def dump_hub(hub: Hub, hub_dir: Path | str):
    """Write Hub to a hub directory (tool documents + manifest)."""
    hub_dir: Path = Path(hub_dir)
    categories: dict[str, list[str]] = {category: [] for category in sorted(hub.categories)}

    for tool in hub.tools:
        rel_path: str = f'{_slug(tool.category)}/{_slug(tool.tool_name)}.json'
        (hub_dir / rel_path).parent.mkdir(parents=True, exist_ok=True)
        (hub_dir / rel_path).write_text(json.dumps(serialize_tool_doc(tool), ensure_ascii=False, indent=4) + '\n',
                                        encoding='utf-8')
        categories[tool.category].append(rel_path)

    manifest: dict = {'categories': categories,
                      'collections': {name: sorted(members) for name, members in sorted(hub.collections.items())}}
    (hub_dir / MANIFEST_FILE_NAME).write_text(json.dumps(manifest, ensure_ascii=False, indent=4) + '\n',
                                              encoding='utf-8')
