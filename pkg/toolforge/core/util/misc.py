from __future__ import annotations

from collections.abc import Iterable, Iterator
import hashlib
import json
from pathlib import Path
from typing import Any

from .errors import DecodeError


# (tool name, API name)
type ApiKey = tuple[str, str]


def api_key(tool_name: str, api_name: str) -> ApiKey:
    return (tool_name, api_name)


def format_api_key(key: ApiKey) -> str:
    return f'{key[0]}/{key[1]}'


def derive_seed(base_seed: int, *parts: int | str) -> int:
    """Derive a stable child seed (independent of PYTHONHASHSEED)."""
    digest: bytes = hashlib.sha256('|'.join(map(str, (base_seed, *parts))).encode('utf-8')).digest()
    return int.from_bytes(digest[:8], byteorder='big')


def dumps_canonical(obj: Any) -> str:
    """JSON text with stable key order and no ASCII escaping, for diffable artifacts."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=False, separators=(', ', ': '))


def config_hash(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, ensure_ascii=False, default=str).encode('utf-8')).hexdigest()


def write_jsonl(path: Path | str, records: Iterable[Any]) -> int:
    """Write records as line-delimited JSON and return the number of lines written."""
    n: int = 0
    with open(file=path, mode='w', encoding='utf-8', newline='\n') as f:
        for record in records:
            f.write(dumps_canonical(record) + '\n')
            n += 1
    return n


def iter_jsonl(path: Path | str) -> Iterator[tuple[int, Any]]:
    """Yield `(line number, record)` pairs, raising `DecodeError` located at `file:line`."""
    with open(file=path, mode='r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as err:
                raise DecodeError(f'invalid JSON: {err.msg}', position=f'{path}:{line_no}') from err


def read_jsonl(path: Path | str) -> list[Any]:
    return [record for _, record in iter_jsonl(path)]
