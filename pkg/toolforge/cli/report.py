"""Report rendering: aligned text tables for stdout, line-delimited records and the run manifest on disk."""


from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
import hashlib
import json
from pathlib import Path
from typing import Any, TYPE_CHECKING

from loguru import logger

from toolforge.core.util.misc import dumps_canonical, write_jsonl

if TYPE_CHECKING:
    from .config import RunConfig


MANIFEST_FILE_NAME: str = 'manifest.json'


def format_rate(rate: Fraction | float) -> str:
    return f'{float(rate):.3f}'


def rate_record(rate: Fraction) -> dict[str, Any]:
    """Rate as a float plus its exact `numerator/denominator` form."""
    return {'value': float(rate), 'exact': f'{rate.numerator}/{rate.denominator}'}


def format_table(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Aligned text table; numeric cells are right-aligned."""
    cells: list[list[str]] = [[str(cell) for cell in row] for row in rows]
    numeric: list[bool] = [all(_is_number(row[i]) for row in cells) and bool(cells) for i in range(len(headers))]
    widths: list[int] = [max([len(header)] + [len(row[i]) for row in cells]) for i, header in enumerate(headers)]

    def line(values: Sequence[str]) -> str:
        return '  '.join(value.rjust(width) if is_number else value.ljust(width)
                         for value, width, is_number in zip(values, widths, numeric)).rstrip()

    return '\n'.join([line(headers), line(['-' * width for width in widths]), *map(line, cells)])


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def emit_table(title: str, headers: Sequence[str], rows: Iterable[Sequence[Any]]):
    print(f'{title}\n{format_table(headers, rows)}\n')


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunWriter:
    """Single writer of a command's output directory; records every file for the manifest."""

    def __init__(self, output_dir: Path | str):
        self.output_dir: Path = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.files: dict[str, Path] = {}

    def path(self, name: str) -> Path:
        path: Path = self.output_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def jsonl(self, name: str, records: Iterable[Any]) -> Path:
        n: int = write_jsonl(path := self.path(name), records)
        self.files[name] = path
        logger.info(f'wrote {n} records to {path}')
        return path

    def json(self, name: str, document: Any) -> Path:
        (path := self.path(name)).write_text(dumps_canonical(document) + '\n', encoding='utf-8')
        self.files[name] = path
        return path

    def tree(self, name: str, files: Iterable[Path]):
        """Record files written by another component under directory `name`."""
        for file in files:
            self.files[f'{name}/{file.relative_to(self.path(name)).as_posix()}'] = file

    def manifest(self, command: str, config: RunConfig, extras: Mapping[str, Any] | None = None) -> Path:
        """Write `manifest.json`: command, resolved config, seeds, config hash and output digests."""
        document: dict[str, Any] = {'command': command,
                                    'config': config.manifest_dict(),
                                    'seeds': list(config.seeds),
                                    'config_hash': config.config_hash(),
                                    'outputs': {name: file_digest(path) for name, path in sorted(self.files.items())}}
        if extras:
            document['extras'] = dict(extras)

        path: Path = self.path(MANIFEST_FILE_NAME)
        path.write_text(json.dumps(document, ensure_ascii=False, indent=4) + '\n', encoding='utf-8')
        return path
