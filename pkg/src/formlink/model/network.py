"""Encoder and per-link-type bilinear scorer, with hand-written backward passes.

Forward layout: summed embeddings -> pre-norm transformer layers -> two linear
projections reshaped per link type, optionally rotated by position (rotary
sinusoidal transform), contracted into the [n_link_types, L, L] score tensor.
Every *_backward mirrors its forward exactly; the finite-difference check in
``gradcheck`` is the authority on their agreement.
"""

from __future__ import annotations

import numpy as np

from ..errors import InputError
from ..serialize.vocab import PAD_ID
from ..serialize.windows import InputSample
from .config import ModelConfig
from .params import Params

_LN_EPS = 1e-5
_GELU_C = float(np.sqrt(2.0 / np.pi))
_GELU_A = 0.044715


def neg_sentinel(dtype) -> float:
    """Finite stand-in for -inf: half the most negative representable value."""
    return float(np.finfo(np.dtype(dtype)).min / 2)


def attention_mask(sample: InputSample, n_visual: int = 0) -> np.ndarray:
    """Boolean [L+V, L+V] attention permission matrix.

    Tokens of different questions do not attend to each other; everything else
    (specials, context, visual rows) is mutually visible among non-pad
    positions. Rows with nothing to attend to fall back to themselves.
    """
    length = sample.length
    total = length + n_visual
    block = np.full(total, -1, dtype=np.int64)
    for qi, q in enumerate(sample.question_registry):
        block[q.head : q.tail + 1] = qi
    nonpad = np.ones(total, dtype=bool)
    nonpad[:length] = sample.token_ids != PAD_ID
    same = block[:, None] == block[None, :]
    global_any = (block[:, None] < 0) | (block[None, :] < 0)
    allowed = nonpad[:, None] & nonpad[None, :] & (same | global_any)
    dead = ~allowed.any(axis=1)
    allowed[dead, dead] = True
    return allowed


# ---------------------------------------------------------------------------
# embeddings

def embed_forward(params: Params, sample: InputSample) -> np.ndarray:
    ids = sample.token_ids
    if ids.min() < 0 or ids.max() >= params["embed.token"].shape[0]:
        raise InputError(f"doc {sample.doc_id}: token id out of vocabulary range")
    if sample.length > params["embed.position"].shape[0]:
        raise InputError(f"doc {sample.doc_id}: sequence longer than the position table")
    if sample.layout.max() >= params["embed.x1"].shape[0]:
        raise InputError(f"doc {sample.doc_id}: layout bucket out of range")
    x = (
        params["embed.token"][ids]
        + params["embed.position"][sample.position_ids]
        + params["embed.segment"][sample.segment_ids]
        + params["embed.x1"][sample.layout[:, 0]]
        + params["embed.y1"][sample.layout[:, 1]]
        + params["embed.x2"][sample.layout[:, 2]]
        + params["embed.y2"][sample.layout[:, 3]]
    )
    return x


def embed_backward(grads: dict, sample: InputSample, dx: np.ndarray) -> None:
    np.add.at(grads["embed.token"], sample.token_ids, dx)
    np.add.at(grads["embed.position"], sample.position_ids, dx)
    np.add.at(grads["embed.segment"], sample.segment_ids, dx)
    for j, name in enumerate(("embed.x1", "embed.y1", "embed.x2", "embed.y2")):
        np.add.at(grads[name], sample.layout[:, j], dx)


# ---------------------------------------------------------------------------
# primitives

def _ln_forward(x, gain, bias):
    mu = x.mean(-1, keepdims=True)
    centered = x - mu
    var = (centered * centered).mean(-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + _LN_EPS)
    xhat = centered * inv
    return gain * xhat + bias, (xhat, inv, gain)


def _ln_backward(cache, dy):
    xhat, inv, gain = cache
    dgain = (dy * xhat).sum(0)
    dbias = dy.sum(0)
    dxhat = dy * gain
    dx = inv * (
        dxhat
        - dxhat.mean(-1, keepdims=True)
        - xhat * (dxhat * xhat).mean(-1, keepdims=True)
    )
    return dx, dgain, dbias


def _gelu_forward(x):
    t = np.tanh(_GELU_C * (x + _GELU_A * x**3))
    return 0.5 * x * (1.0 + t), (x, t)


def _gelu_backward(cache, dy):
    x, t = cache
    du = _GELU_C * (1.0 + 3.0 * _GELU_A * x * x)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du)


def _softmax(logits):
    m = logits.max(-1, keepdims=True)
    e = np.exp(logits - m)
    return e / e.sum(-1, keepdims=True)


def _split_heads(x, n_heads):
    length, d = x.shape
    return x.reshape(length, n_heads, d // n_heads).transpose(1, 0, 2)


def _merge_heads(x):
    n_heads, length, dh = x.shape
    return x.transpose(1, 0, 2).reshape(length, n_heads * dh)


# ---------------------------------------------------------------------------
# attention + feed-forward layer

def _mha_forward(params, prefix, x, allowed, n_heads):
    d = x.shape[1]
    dh = d // n_heads
    q = _split_heads(x @ params[prefix + "wq"] + params[prefix + "bq"], n_heads)
    k = _split_heads(x @ params[prefix + "wk"] + params[prefix + "bk"], n_heads)
    v = _split_heads(x @ params[prefix + "wv"] + params[prefix + "bv"], n_heads)
    scale = 1.0 / np.sqrt(dh)
    logits = (q @ k.transpose(0, 2, 1)) * scale
    logits = np.where(allowed[None, :, :], logits, neg_sentinel(x.dtype))
    attn = _softmax(logits)
    ctx = attn @ v
    merged = _merge_heads(ctx)
    out = merged @ params[prefix + "wo"] + params[prefix + "bo"]
    return out, (x, q, k, v, attn, merged, scale)


def _mha_backward(params, grads, prefix, cache, dout):
    x, q, k, v, attn, merged, scale = cache
    n_heads = q.shape[0]
    grads[prefix + "wo"] += merged.T @ dout
    grads[prefix + "bo"] += dout.sum(0)
    dctx = _split_heads(dout @ params[prefix + "wo"].T, n_heads)
    dattn = dctx @ v.transpose(0, 2, 1)
    dv = attn.transpose(0, 2, 1) @ dctx
    dlogits = attn * (dattn - (dattn * attn).sum(-1, keepdims=True))
    dlogits *= scale
    dq = dlogits @ k
    dk = dlogits.transpose(0, 2, 1) @ q
    dx = np.zeros_like(x)
    for name, dt in (("wq", dq), ("wk", dk), ("wv", dv)):
        flat = _merge_heads(dt)
        grads[prefix + name] += x.T @ flat
        grads[prefix + "b" + name[1]] += flat.sum(0)
        dx += flat @ params[prefix + name].T
    return dx


def _ffn_forward(params, prefix, x):
    h = x @ params[prefix + "w1"] + params[prefix + "b1"]
    a, gelu_cache = _gelu_forward(h)
    out = a @ params[prefix + "w2"] + params[prefix + "b2"]
    return out, (x, a, gelu_cache)


def _ffn_backward(params, grads, prefix, cache, dout):
    x, a, gelu_cache = cache
    grads[prefix + "w2"] += a.T @ dout
    grads[prefix + "b2"] += dout.sum(0)
    da = dout @ params[prefix + "w2"].T
    dh = _gelu_backward(gelu_cache, da)
    grads[prefix + "w1"] += x.T @ dh
    grads[prefix + "b1"] += dh.sum(0)
    return dh @ params[prefix + "w1"].T


def _dropout_forward(x, rate, rng):
    keep = (rng.random(x.shape) >= rate).astype(x.dtype) / (1.0 - rate)
    return x * keep, keep


# ---------------------------------------------------------------------------
# encoder

def encode_forward(
    params: Params,
    config: ModelConfig,
    x: np.ndarray,
    allowed: np.ndarray,
    visual: np.ndarray | None = None,
    train: bool = False,
    drop_rng: np.random.Generator | None = None,
):
    """Pre-norm transformer stack; zero layers is the identity.

    ``visual`` optionally appends extra feature rows that take part in
    attention but are stripped from the returned hidden states; ``allowed``
    must already cover them.
    """
    n_text = x.shape[0]
    if visual is not None:
        x = np.concatenate([x, visual.astype(x.dtype)], axis=0)
    if allowed.shape[0] != x.shape[0]:
        raise InputError("attention mask does not match the encoded sequence")
    use_dropout = train and config.dropout > 0.0 and drop_rng is not None
    layer_caches = []
    for i in range(config.n_layers):
        prefix = f"layer{i}."
        h1, ln1_cache = _ln_forward(x, params[prefix + "ln1.gain"], params[prefix + "ln1.bias"])
        attn_out, attn_cache = _mha_forward(params, prefix + "attn.", h1, allowed, config.n_heads)
        attn_keep = None
        if use_dropout:
            attn_out, attn_keep = _dropout_forward(attn_out, config.dropout, drop_rng)
        x = x + attn_out
        h2, ln2_cache = _ln_forward(x, params[prefix + "ln2.gain"], params[prefix + "ln2.bias"])
        ffn_out, ffn_cache = _ffn_forward(params, prefix + "ffn.", h2)
        ffn_keep = None
        if use_dropout:
            ffn_out, ffn_keep = _dropout_forward(ffn_out, config.dropout, drop_rng)
        x = x + ffn_out
        layer_caches.append((ln1_cache, attn_cache, attn_keep, ln2_cache, ffn_cache, ffn_keep))
    return x[:n_text], (layer_caches, n_text, x.shape[0])


def encode_backward(params: Params, config: ModelConfig, cache, dh: np.ndarray, grads: dict) -> np.ndarray:
    layer_caches, n_text, total = cache
    dx = np.zeros((total, dh.shape[1]), dtype=dh.dtype)
    dx[:n_text] = dh
    for i in reversed(range(config.n_layers)):
        prefix = f"layer{i}."
        ln1_cache, attn_cache, attn_keep, ln2_cache, ffn_cache, ffn_keep = layer_caches[i]
        dffn = dx if ffn_keep is None else dx * ffn_keep
        dh2 = _ffn_backward(params, grads, prefix + "ffn.", ffn_cache, dffn)
        dx2, dgain, dbias = _ln_backward(ln2_cache, dh2)
        grads[prefix + "ln2.gain"] += dgain
        grads[prefix + "ln2.bias"] += dbias
        dx = dx + dx2
        dattn = dx if attn_keep is None else dx * attn_keep
        dh1 = _mha_backward(params, grads, prefix + "attn.", attn_cache, dattn)
        dx1, dgain, dbias = _ln_backward(ln1_cache, dh1)
        grads[prefix + "ln1.gain"] += dgain
        grads[prefix + "ln1.bias"] += dbias
        dx = dx + dx1
    return dx[:n_text]


# ---------------------------------------------------------------------------
# scorer

def _rotary_tables(length: int, d: int, dtype):
    half = np.arange(d // 2, dtype=np.float64)
    freqs = 10000.0 ** (-2.0 * half / d)
    angles = np.arange(length, dtype=np.float64)[:, None] * freqs[None, :]
    return np.cos(angles).astype(dtype), np.sin(angles).astype(dtype)


def _rotary_apply(x, cos, sin):
    even = x[..., 0::2]
    odd = x[..., 1::2]
    out = np.empty_like(x)
    out[..., 0::2] = even * cos - odd * sin
    out[..., 1::2] = even * sin + odd * cos
    return out


def _rotary_backward(dout, cos, sin):
    de = dout[..., 0::2]
    do = dout[..., 1::2]
    dx = np.empty_like(dout)
    dx[..., 0::2] = de * cos + do * sin
    dx[..., 1::2] = -de * sin + do * cos
    return dx


def score_forward(params: Params, config: ModelConfig, h: np.ndarray, mask: np.ndarray):
    """Score tensor Z[k, i, j] = <a_k(i), b_k(j)> with masked cells at the sentinel."""
    length = h.shape[0]
    n_types, d_head = config.n_link_types, config.d_head_score
    a = (h @ params["scorer.wa"] + params["scorer.ba"]).reshape(length, n_types, d_head).transpose(1, 0, 2)
    b = (h @ params["scorer.wb"] + params["scorer.bb"]).reshape(length, n_types, d_head).transpose(1, 0, 2)
    tables = None
    if config.use_sinusoidal:
        cos, sin = _rotary_tables(length, d_head, h.dtype)
        a = _rotary_apply(a, cos, sin)
        b = _rotary_apply(b, cos, sin)
        tables = (cos, sin)
    z = a @ b.transpose(0, 2, 1)
    z = np.where(mask, z, neg_sentinel(h.dtype))
    return z, (h, a, b, tables, mask)


def score_backward(params: Params, config: ModelConfig, cache, dz: np.ndarray, grads: dict) -> np.ndarray:
    h, a, b, tables, mask = cache
    length = h.shape[0]
    dz = np.where(mask, dz, 0.0)
    da = dz @ b
    db = dz.transpose(0, 2, 1) @ a
    if tables is not None:
        cos, sin = tables
        da = _rotary_backward(da, cos, sin)
        db = _rotary_backward(db, cos, sin)
    da_flat = da.transpose(1, 0, 2).reshape(length, -1)
    db_flat = db.transpose(1, 0, 2).reshape(length, -1)
    grads["scorer.wa"] += h.T @ da_flat
    grads["scorer.ba"] += da_flat.sum(0)
    grads["scorer.wb"] += h.T @ db_flat
    grads["scorer.bb"] += db_flat.sum(0)
    return da_flat @ params["scorer.wa"].T + db_flat @ params["scorer.wb"].T


# ---------------------------------------------------------------------------
# whole model

def forward_scores(
    params: Params,
    config: ModelConfig,
    sample: InputSample,
    score_mask: np.ndarray,
    visual: np.ndarray | None = None,
    train: bool = False,
    drop_rng: np.random.Generator | None = None,
):
    """Embed, encode, and score one window. Returns (Z, cache)."""
    allowed = attention_mask(sample, n_visual=0 if visual is None else visual.shape[0])
    x = embed_forward(params, sample)
    h, enc_cache = encode_forward(params, config, x, allowed, visual=visual, train=train, drop_rng=drop_rng)
    z, score_cache = score_forward(params, config, h, score_mask)
    return z, (enc_cache, score_cache)


def backward_scores(params: Params, config: ModelConfig, sample: InputSample, cache, dz: np.ndarray, grads: dict) -> None:
    enc_cache, score_cache = cache
    dh = score_backward(params, config, score_cache, dz, grads)
    dx = encode_backward(params, config, enc_cache, dh, grads)
    embed_backward(grads, sample, dx)


def loss_and_grads(
    params: Params,
    config: ModelConfig,
    sample: InputSample,
    zhat: np.ndarray,
    score_mask: np.ndarray,
    visual: np.ndarray | None = None,
    train: bool = False,
    drop_rng: np.random.Generator | None = None,
    grads: dict | None = None,
) -> tuple[float, dict]:
    """Circle loss of one window and gradients for every parameter tensor.

    Pass ``grads`` to accumulate into an existing gradient dict (fixed-order
    batch reduction); a fresh zero dict is created otherwise.
    """
    from .loss import circle_loss_with_grad

    z, cache = forward_scores(
        params, config, sample, score_mask, visual=visual, train=train, drop_rng=drop_rng
    )
    loss, dz = circle_loss_with_grad(z, zhat, score_mask)
    if grads is None:
        grads = params.zeros_like()
    backward_scores(params, config, sample, cache, dz, grads)
    return loss, grads
