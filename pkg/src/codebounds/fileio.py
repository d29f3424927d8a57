"""Atomic file output, bundled data access, and class-list persistence."""
from __future__ import annotations

import json
import os
import tempfile
from importlib import resources
from pathlib import Path

from . import __version__
from .codes import Code, CodeParams, emit_code, parse_code

__all__ = [
    "atomic_write_text",
    "packaged_text",
    "write_class_files",
    "read_class_files",
]


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    half-written file."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def packaged_text(name: str) -> str:
    """Contents of a bundled data file."""
    return (resources.files("codebounds") / "data" / name).read_text()


def write_class_files(directory: str | os.PathLike, codes, task_desc: dict) -> Path:
    """Persist a classification: one code file per class plus an index.

    The index is written last, so its presence marks a complete run.
    Returns the index path.
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, code in enumerate(codes):
        name = f"class_{i:03d}.code"
        atomic_write_text(out / name, emit_code(code))
        names.append(name)
    index = {
        "count": len(names),
        "classes": names,
        "generator_version": __version__,
        **task_desc,
    }
    atomic_write_text(out / "index.json", json.dumps(index, indent=2, sort_keys=True) + "\n")
    return out / "index.json"


def read_class_files(directory: str | os.PathLike) -> tuple[Code, ...]:
    """Load a persisted classification back, in index order.

    The code format carries no design distance, so the declared d is
    restored from the index; it must not exceed each file's actual
    minimum distance.
    """
    out = Path(directory)
    index = json.loads((out / "index.json").read_text())
    declared = index.get("d")
    codes = []
    for name in index["classes"]:
        code = parse_code((out / name).read_text())
        if declared is not None and declared != code.params.d:
            code = Code.from_words(
                code.words, code.params.q, code.params.n, d=declared
            )
        codes.append(code)
    return tuple(codes)
