"""Named-tensor parameter store and seeded initialization."""

from __future__ import annotations

import numpy as np

from ..errors import NumericError
from .config import ModelConfig


def tensor_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Parameter names and shapes in a fixed, documented order."""
    d = config.d_model
    shapes: dict[str, tuple[int, ...]] = {
        "embed.token": (config.vocab_size, d),
        "embed.position": (config.max_seq_len, d),
        "embed.segment": (2, d),
        "embed.x1": (config.layout_buckets, d),
        "embed.y1": (config.layout_buckets, d),
        "embed.x2": (config.layout_buckets, d),
        "embed.y2": (config.layout_buckets, d),
    }
    for i in range(config.n_layers):
        prefix = f"layer{i}."
        shapes[prefix + "ln1.gain"] = (d,)
        shapes[prefix + "ln1.bias"] = (d,)
        shapes[prefix + "attn.wq"] = (d, d)
        shapes[prefix + "attn.bq"] = (d,)
        shapes[prefix + "attn.wk"] = (d, d)
        shapes[prefix + "attn.bk"] = (d,)
        shapes[prefix + "attn.wv"] = (d, d)
        shapes[prefix + "attn.bv"] = (d,)
        shapes[prefix + "attn.wo"] = (d, d)
        shapes[prefix + "attn.bo"] = (d,)
        shapes[prefix + "ln2.gain"] = (d,)
        shapes[prefix + "ln2.bias"] = (d,)
        shapes[prefix + "ffn.w1"] = (d, 4 * d)
        shapes[prefix + "ffn.b1"] = (4 * d,)
        shapes[prefix + "ffn.w2"] = (4 * d, d)
        shapes[prefix + "ffn.b2"] = (d,)
    width = config.n_link_types * config.d_head_score
    shapes["scorer.wa"] = (d, width)
    shapes["scorer.ba"] = (width,)
    shapes["scorer.wb"] = (d, width)
    shapes["scorer.bb"] = (width,)
    return shapes


class Params:
    """Mapping of tensor name to array; shapes fixed by the model config."""

    def __init__(self, tensors: dict[str, np.ndarray]):
        self.tensors = tensors

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def items(self):
        return self.tensors.items()

    def names(self) -> list[str]:
        return list(self.tensors)

    @property
    def dtype(self) -> np.dtype:
        return next(iter(self.tensors.values())).dtype

    def zeros_like(self) -> dict[str, np.ndarray]:
        return {name: np.zeros_like(t) for name, t in self.tensors.items()}

    def copy(self) -> "Params":
        return Params({name: t.copy() for name, t in self.tensors.items()})

    def astype(self, dtype) -> "Params":
        return Params({name: t.astype(dtype) for name, t in self.tensors.items()})

    def check_finite(self) -> None:
        for name, t in self.tensors.items():
            if not np.all(np.isfinite(t)):
                raise NumericError(f"non-finite values in parameter {name}")


def init_params(config: ModelConfig, seed: int = 0, dtype=np.float32) -> Params:
    """Embeddings ~ N(0, 0.02); weights ~ U(+-1/sqrt(fan_in)); biases and gains fixed."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 401))))
    tensors: dict[str, np.ndarray] = {}
    for name, shape in tensor_shapes(config).items():
        leaf = name.rsplit(".", 1)[-1]
        if name.startswith("embed."):
            t = rng.normal(0.0, 0.02, size=shape)
        elif leaf == "gain":
            t = np.ones(shape)
        elif leaf.startswith("b") or leaf == "bias":
            t = np.zeros(shape)
        else:
            bound = 1.0 / np.sqrt(shape[0])
            t = rng.uniform(-bound, bound, size=shape)
        tensors[name] = t.astype(dtype)
    return Params(tensors)
