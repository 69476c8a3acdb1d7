"""Model configuration."""

from __future__ import annotations

from dataclasses import dataclass, asdict

from ..errors import ConfigError
from ..linking.link_types import N_LINK_TYPES, N_VALUE_ONLY_TYPES
from ..linking.masks import IsolationFlags


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    d_model: int = 64
    n_layers: int = 2
    n_heads: int = 4
    d_head_score: int = 32
    max_seq_len: int = 512
    layout_buckets: int = 1001
    dropout: float = 0.1
    use_sinusoidal: bool = True
    use_key_channels: bool = True
    use_qci: bool = True
    use_qhi: bool = True
    use_qti: bool = True

    def __post_init__(self) -> None:
        if self.vocab_size < 1:
            raise ConfigError("vocab_size must be positive")
        if self.d_model % self.n_heads != 0:
            raise ConfigError(f"d_model {self.d_model} not divisible by n_heads {self.n_heads}")
        if self.d_head_score % 2 != 0:
            raise ConfigError("d_head_score must be even for the rotary transform")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError("dropout must lie in [0, 1)")

    @property
    def n_link_types(self) -> int:
        return N_LINK_TYPES if self.use_key_channels else N_VALUE_ONLY_TYPES

    @property
    def isolation_flags(self) -> IsolationFlags:
        return IsolationFlags(qci=self.use_qci, qhi=self.use_qhi, qti=self.use_qti)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(**data)
