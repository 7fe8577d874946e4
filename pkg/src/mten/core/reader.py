"""
Read and write tensor files

Line oriented text format, versioned header:

    mten 1
    order 3
    dim 2
    dense | coo
    payload...

- dense payload: exactly dim**order whitespace separated values, row-major
- coo payload: one entry per line, `i1 ... im value` with 1-based indices;
  unlisted entries are 0, repeated indices are an error
- `#` starts a comment, blank lines are ignored
"""

import sys
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Iterator, List, NamedTuple, Optional

import numpy as np
from typer import echo

from mten import SpectralWarning, logger

from .tensor import DenseTensor

MAGIC = "mten"
VERSION = 1
ERROR_EXIT = 3


class UnableToRead(Exception):
    pass


class Storage(str, Enum):
    dense = "dense"
    coo = "coo"

    def __str__(self) -> str:
        return self.value


class TensorFile(NamedTuple):
    """parsed tensor file"""

    version: int
    order: int
    dim: int
    storage: Storage
    tensor: DenseTensor


def _header_value(words: List[str], key: str) -> int:
    if len(words) != 2 or words[0] != key:
        raise UnableToRead(f"expected '{key} <int>', got '{' '.join(words)}'")
    try:
        return int(words[1])
    except ValueError:
        raise UnableToRead(f"{key} must be an integer, got '{words[1]}'") from None


def _float(word: str) -> float:
    try:
        return float(word)
    except ValueError:
        raise UnableToRead(f"not a number: '{word}'") from None


def _dense(order: int, dim: int, body: List[List[str]]) -> np.ndarray:
    values = [_float(word) for words in body for word in words]
    if len(values) != dim**order:
        raise UnableToRead(f"dense payload has {len(values)} values, expected {dim**order}")
    return np.array(values)


def _coo(order: int, dim: int, body: List[List[str]]) -> np.ndarray:
    entries = np.zeros(dim**order)
    seen = set()
    for words in body:
        if len(words) != order + 1:
            raise UnableToRead(f"coo line needs {order} indices and a value: '{' '.join(words)}'")
        try:
            idx = tuple(int(word) for word in words[:-1])
        except ValueError:
            raise UnableToRead(f"coo indices must be integers: '{' '.join(words)}'") from None
        if any(not 1 <= i <= dim for i in idx):
            raise UnableToRead(f"coo index {idx} out of range [1, {dim}]")
        if idx in seen:
            raise UnableToRead(f"duplicate coo index {idx}")
        seen.add(idx)
        entries[np.ravel_multi_index(tuple(i - 1 for i in idx), (dim,) * order)] = _float(
            words[-1]
        )
    return entries


def parse_tensor(text: str) -> TensorFile:
    lines = [line.split("#", 1)[0].split() for line in text.splitlines()]
    lines = [words for words in lines if words]
    if len(lines) < 4:
        raise UnableToRead("incomplete header")

    magic = lines[0]
    if len(magic) != 2 or magic[0] != MAGIC:
        raise UnableToRead(f"not a {MAGIC} file, header '{' '.join(magic)}'")
    version = _header_value(magic, MAGIC)
    if version != VERSION:
        raise UnableToRead(f"unsupported version {version}")

    order = _header_value(lines[1], "order")
    dim = _header_value(lines[2], "dim")
    if order < 2 or dim < 1:
        raise UnableToRead(f"order must be >= 2 and dim >= 1, got order {order}, dim {dim}")
    try:
        storage = Storage(" ".join(lines[3]))
    except ValueError:
        raise UnableToRead(f"unknown storage mode '{' '.join(lines[3])}'") from None

    body = lines[4:]
    entries = _dense(order, dim, body) if storage == Storage.dense else _coo(order, dim, body)
    return TensorFile(version, order, dim, storage, DenseTensor(order, dim, entries))


def format_tensor(tensor: DenseTensor, storage: Storage = Storage.dense) -> str:
    """file contents, values written with full round-trip precision"""
    lines = [f"{MAGIC} {VERSION}", f"order {tensor.order}", f"dim {tensor.dim}", f"{storage}"]
    if storage == Storage.dense:
        lines.extend(repr(float(v)) for v in tensor.entries)
    else:
        for offset in np.flatnonzero(tensor.entries):
            idx = np.unravel_index(offset, tensor.shape)
            index = " ".join(str(i + 1) for i in idx)
            lines.append(f"{index} {float(tensor.entries[offset])!r}")
    return "\n".join(lines) + "\n"


def read_tensor(path: Path) -> DenseTensor:
    logger.debug(f"read {path}")
    return parse_tensor(path.read_text()).tensor


def write_tensor(path: Path, tensor: DenseTensor, storage: Storage = Storage.dense) -> None:
    logger.debug(f"write {tensor} to {path} on {storage} mode")
    path.write_text(format_tensor(tensor, storage))


@contextmanager
def exit_on_fail(path: Optional[Path] = None) -> Iterator[Optional[DenseTensor]]:
    """yield the tensor on path (if any), exit with ERROR_EXIT on bad input"""
    try:
        yield None if path is None else read_tensor(path)
    except (UnableToRead, ValueError, OSError, SpectralWarning) as e:
        logger.error(e)
        echo(f"error: {e}", err=True)
        sys.exit(ERROR_EXIT)
