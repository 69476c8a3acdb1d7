"""Checkpoint container: one JSON header line, then raw little-endian float32.

Tensors are stored C-order in header order; the header records name, shape,
dtype, and byte offsets so a reader can validate before touching the data.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import CheckpointError
from ..model.config import ModelConfig
from ..model.params import Params, tensor_shapes

FORMAT = "formlink-checkpoint-v1"


def save_checkpoint(params: Params, config: ModelConfig, path: str | Path) -> None:
    entries = []
    blobs = []
    offset = 0
    for name, tensor in params.items():
        data = np.ascontiguousarray(tensor, dtype="<f4").tobytes()
        entries.append(
            {
                "name": name,
                "shape": list(tensor.shape),
                "dtype": "float32",
                "offset": offset,
                "nbytes": len(data),
            }
        )
        blobs.append(data)
        offset += len(data)
    header = {"format": FORMAT, "config": config.to_dict(), "tensors": entries}
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8") + b"\n")
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path: str | Path, expect_config: ModelConfig | None = None) -> tuple[Params, ModelConfig]:
    """Load a checkpoint; raise CheckpointError naming the offending field on
    any mismatch between header, data, or the expected configuration."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        data = fh.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: unreadable header: {exc}") from exc
    if header.get("format") != FORMAT:
        raise CheckpointError(f"{path}: unknown checkpoint format {header.get('format')!r}")
    try:
        config = ModelConfig.from_dict(header["config"])
        entries = header["tensors"]
    except (KeyError, TypeError) as exc:
        raise CheckpointError(f"{path}: malformed header: {exc}") from exc

    expected_shapes = tensor_shapes(config)
    tensors: dict[str, np.ndarray] = {}
    for entry in entries:
        name = entry["name"]
        shape = tuple(entry["shape"])
        if name not in expected_shapes:
            raise CheckpointError(f"{path}: unexpected tensor {name}")
        if shape != expected_shapes[name]:
            raise CheckpointError(
                f"{path}: tensor {name} has shape {shape}, config implies {expected_shapes[name]}"
            )
        start, nbytes = entry["offset"], entry["nbytes"]
        if start + nbytes > len(data):
            raise CheckpointError(f"{path}: tensor {name} is truncated")
        tensors[name] = (
            np.frombuffer(data[start : start + nbytes], dtype="<f4").reshape(shape).copy()
        )
    missing = set(expected_shapes) - set(tensors)
    if missing:
        raise CheckpointError(f"{path}: missing tensors {sorted(missing)[:3]}")

    if expect_config is not None:
        want = tensor_shapes(expect_config)
        for name, shape in want.items():
            if name not in tensors:
                raise CheckpointError(f"{path}: tensor {name} absent for requested config")
            if tensors[name].shape != shape:
                raise CheckpointError(
                    f"{path}: tensor {name} has shape {tensors[name].shape}, requested config needs {shape}"
                )
    return Params(tensors), config
