"""
Model file format.

    b"SCMN" | u32 version | u32 header_length | JSON header | f32 LE parameter blob

The header lists parameters in blob order with their shapes; the blob is the
concatenation of every parameter, row-major, little-endian float32.
"""

import json
import struct
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from semcont.errors import CorruptFileError, VersionError
from semcont.nn.network import PARAM_ORDER, ModelSnapshot
from semcont.schemas.model_file import ModelHeader, ParamEntry
from semcont.utils.files import atomic_write_bytes, sha256_bytes

MAGIC = b"SCMN"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sII")


def model_to_bytes(model: ModelSnapshot) -> bytes:
    """Serialize a snapshot; identical snapshots give identical bytes."""
    header = ModelHeader(
        arch=dict(model.arch),
        params=[ParamEntry(name=name, shape=list(model.params[name].shape)) for name in PARAM_ORDER],
        input_size=tuple(model.input_size),
        class_names=tuple(model.class_names),
        seed=model.seed,
    )
    header_bytes = json.dumps(header.model_dump(mode="json"), sort_keys=True, separators=(",", ":")).encode("utf-8")
    blob = b"".join(model.params[name].astype("<f4").tobytes(order="C") for name in PARAM_ORDER)
    return _PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes)) + header_bytes + blob


def model_from_bytes(data: bytes) -> ModelSnapshot:
    """
    Parse bytes produced by model_to_bytes.

    Raises:
        VersionError: wrong magic bytes or unsupported version
        CorruptFileError: truncated data or malformed header
    """
    if len(data) < 4 or data[:4] != MAGIC:
        raise VersionError("not a semcont model file (bad magic bytes)")
    if len(data) < _PREFIX.size:
        raise CorruptFileError("model file truncated inside the prefix")
    _, version, header_length = _PREFIX.unpack_from(data)
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported model format version {version} (expected {FORMAT_VERSION})")
    header_end = _PREFIX.size + header_length
    if len(data) < header_end:
        raise CorruptFileError("model file truncated inside the header")
    try:
        header = ModelHeader.model_validate(json.loads(data[_PREFIX.size:header_end].decode("utf-8")))
    except (UnicodeDecodeError, json.JSONDecodeError, ValidationError) as exc:
        raise CorruptFileError(f"malformed model header: {exc}") from exc

    params = {}
    offset = header_end
    for entry in header.params:
        count = int(np.prod(entry.shape)) if entry.shape else 1
        size = 4 * count
        if len(data) < offset + size:
            raise CorruptFileError(f"model file truncated inside parameter {entry.name}")
        values = np.frombuffer(data, dtype="<f4", count=count, offset=offset)
        params[entry.name] = values.reshape(entry.shape).astype(np.float32)
        offset += size
    if offset != len(data):
        raise CorruptFileError(f"{len(data) - offset} trailing bytes after the parameter blob")

    return ModelSnapshot(
        params=params,
        input_size=tuple(header.input_size),
        class_names=tuple(header.class_names),
        seed=header.seed,
        arch=header.arch,
    )


def save_model(model: ModelSnapshot, path: str | Path) -> Path:
    """Write a snapshot atomically and return its path."""
    return atomic_write_bytes(path, model_to_bytes(model))


def load_model(path: str | Path) -> ModelSnapshot:
    """Read a snapshot written by save_model."""
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError as exc:
        raise CorruptFileError(f"model file not found: {path}") from exc
    return model_from_bytes(data)


def model_hash(model: ModelSnapshot) -> str:
    """SHA-256 of the serialized snapshot."""
    return sha256_bytes(model_to_bytes(model))
