"""Binary checkpoint files.

Layout (all integers little-endian)::

    bytes 0-7    magic  b"PLORACKP"
    bytes 8-11   uint32 format version (currently 1)
    bytes 12-19  uint64 length H of the JSON header
    H bytes      UTF-8 JSON: {"kind": str, "meta": {...},
                              "tensors": [{"name", "shape", "offset"}, ...]}
    rest         float64 little-endian tensor data; ``offset`` counts
                 float64 elements from the start of this block

``kind`` is ``"encoder"`` (pretrained base), ``"model"`` (base + adapters +
heads) or ``"adapter"`` (LoRA matrices only).
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"PLORACKP"
VERSION = 1


class CheckpointError(ValueError):
    pass


def save_checkpoint(path, tensors: dict[str, np.ndarray], kind: str, meta: dict | None = None) -> None:
    entries = []
    blobs = []
    offset = 0
    for name in sorted(tensors):
        arr = np.asarray(tensors[name], dtype="<f8", order="C")
        entries.append({"name": name, "shape": list(arr.shape), "offset": offset})
        blobs.append(arr.tobytes())
        offset += arr.size
    header = json.dumps({"kind": kind, "meta": meta or {}, "tensors": entries}, sort_keys=True).encode()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", VERSION, len(header)))
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path) -> tuple[str, dict, dict[str, np.ndarray]]:
    """Returns ``(kind, meta, tensors)``."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CheckpointError(f"{path}: cannot read checkpoint ({exc.strerror})") from None
    if len(raw) < 20 or raw[:8] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint (bad magic)")
    version, hlen = struct.unpack("<IQ", raw[8:20])
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    try:
        header = json.loads(raw[20:20 + hlen].decode())
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise CheckpointError(f"{path}: corrupt checkpoint header") from None
    data = np.frombuffer(raw[20 + hlen:], dtype="<f8")
    tensors = {}
    for e in header["tensors"]:
        n = int(np.prod(e["shape"], dtype=np.int64))
        if e["offset"] + n > data.size:
            raise CheckpointError(f"{path}: tensor {e['name']} runs past end of file")
        tensors[e["name"]] = data[e["offset"]:e["offset"] + n].reshape(e["shape"]).astype(np.float64)
    return header["kind"], header["meta"], tensors


def hash_tensors(tensors: dict[str, np.ndarray]) -> str:
    h = hashlib.sha256()
    for name in sorted(tensors):
        arr = np.asarray(tensors[name], dtype="<f8", order="C")
        h.update(name.encode())
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()
