"""Binary and JSON containers for embedding sequences.

Binary layout (".f2ce", all little-endian): magic "F2CE", version u32 (=1),
N u32, D u32, fps f32, src_height u32, src_width u32, has_query u8,
label_len u16 + UTF-8 label, then D float32 query values if present, then
N*D float32 frame embeddings row-major.  A JSON mirror of the same fields
is accepted under the ".f2ce.json" extension.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .model import DimMismatch, EmbeddingSequence, QueryEmbedding

MAGIC = b"F2CE"
VERSION = 1

_HEAD = struct.Struct("<4sIIIfIIBH")


class ContainerError(Exception):
    """Base class for container parse failures."""


class BadMagic(ContainerError):
    """The file does not start with the container magic bytes."""


class UnsupportedVersion(ContainerError):
    """The container version is not one this reader understands."""


class TruncatedFile(ContainerError):
    """The file ends before the declared payload."""


def _is_json_path(path) -> bool:
    return str(path).endswith(".f2ce.json")


def write_container(seq: EmbeddingSequence, query: QueryEmbedding | None,
                    path: str | Path) -> None:
    """Write a sequence (and optional query) to ``path``.

    The format is chosen from the extension; read_container inverts this
    bit-exactly on all fields.
    """
    if query is not None and query.d != seq.d:
        raise DimMismatch(f"query dimension {query.d} != sequence dimension {seq.d}")
    path = Path(path)
    if _is_json_path(path):
        doc = {
            "version": VERSION,
            "fps": seq.fps,
            "src_height": seq.src_height,
            "src_width": seq.src_width,
            "label": seq.label,
            "query": None if query is None else [float(x) for x in query.vector],
            "frames": [[float(x) for x in row] for row in seq.frames],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        return
    label = seq.label.encode("utf-8")
    if len(label) > 0xFFFF:
        raise ValueError("label exceeds 65535 UTF-8 bytes")
    head = _HEAD.pack(MAGIC, VERSION, seq.n, seq.d, seq.fps,
                      seq.src_height, seq.src_width,
                      0 if query is None else 1, len(label))
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(label)
        if query is not None:
            fh.write(query.vector.astype("<f4", copy=False).tobytes())
        fh.write(seq.frames.astype("<f4", copy=False).tobytes())


def read_container(path: str | Path) -> tuple[EmbeddingSequence, QueryEmbedding | None]:
    """Read a container written by write_container."""
    path = Path(path)
    if _is_json_path(path):
        return _read_json(path)
    data = path.read_bytes()
    if len(data) < 4:
        raise TruncatedFile(f"{path}: file shorter than magic")
    if data[:4] != MAGIC:
        raise BadMagic(f"{path}: bad magic {data[:4]!r}")
    if len(data) < _HEAD.size:
        raise TruncatedFile(f"{path}: truncated header")
    _, version, n, d, fps, src_h, src_w, has_query, label_len = _HEAD.unpack_from(data)
    if version != VERSION:
        raise UnsupportedVersion(f"{path}: version {version}, expected {VERSION}")
    off = _HEAD.size
    if len(data) < off + label_len:
        raise TruncatedFile(f"{path}: truncated label")
    label = data[off:off + label_len].decode("utf-8")
    off += label_len
    query = None
    if has_query:
        if len(data) < off + 4 * d:
            raise TruncatedFile(f"{path}: truncated query payload")
        qvec = np.frombuffer(data, dtype="<f4", count=d, offset=off)
        query = QueryEmbedding(qvec)
        off += 4 * d
    need = 4 * n * d
    if len(data) < off + need:
        raise TruncatedFile(f"{path}: expected {need} frame bytes, "
                            f"found {len(data) - off}")
    frames = np.frombuffer(data, dtype="<f4", count=n * d, offset=off).reshape(n, d)
    seq = EmbeddingSequence(frames=frames, fps=fps, src_height=src_h,
                            src_width=src_w, label=label)
    return seq, query


def _read_json(path: Path) -> tuple[EmbeddingSequence, QueryEmbedding | None]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BadMagic(f"{path}: not valid container JSON: {exc}") from exc
    if not isinstance(doc, dict) or "frames" not in doc:
        raise BadMagic(f"{path}: missing container fields")
    version = doc.get("version")
    if version != VERSION:
        raise UnsupportedVersion(f"{path}: version {version}, expected {VERSION}")
    frames = np.asarray(doc["frames"], dtype=np.float32)
    seq = EmbeddingSequence(frames=frames, fps=doc["fps"],
                            src_height=doc["src_height"],
                            src_width=doc["src_width"],
                            label=doc.get("label", ""))
    query = None
    if doc.get("query") is not None:
        query = QueryEmbedding(np.asarray(doc["query"], dtype=np.float32))
    return seq, query
