"""Analytic multiply-accumulate (MAC) accounting for layer graphs.

A model is declared as an ordered list of layer descriptors plus an input
shape; costs are computed symbolically, never by running a framework.
Conventions: 1 MAC = 2 FLOPs; biases, activations, pools and norms cost
zero MACs; convolutions use same-padding output dims ceil(size/stride).

The gate defaults to the 50 GMAC challenge budget with inclusive (<=)
comparison; ``strict`` switches to <.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .errors import ShapeMismatchError

GMAC = 10**9
DEFAULT_BUDGET_GMACS = 50.0


# --- shapes -----------------------------------------------------------------


@dataclass(frozen=True)
class SpatialShape:
    height: int
    width: int
    channels: int

    def __str__(self) -> str:
        return f"{self.height}x{self.width}x{self.channels}"


@dataclass(frozen=True)
class TokenShape:
    tokens: int
    dim: int

    def __str__(self) -> str:
        return f"{self.tokens}t x {self.dim}"


Shape = Union[SpatialShape, TokenShape]


# --- layer descriptors -------------------------------------------------------


@dataclass(frozen=True)
class Conv2d:
    """2D convolution; in_h/in_w may be omitted inside a graph (inferred)."""

    k_h: int
    k_w: int
    c_in: int
    c_out: int
    stride: int = 1
    groups: int = 1
    in_h: int | None = None
    in_w: int | None = None

    kind = "conv2d"

    def __post_init__(self):
        for name in ("k_h", "k_w", "c_in", "c_out", "stride", "groups"):
            if getattr(self, name) < 1:
                raise ValueError(f"conv2d {name} must be positive")
        if self.c_in % self.groups or self.c_out % self.groups:
            raise ValueError("groups must divide both c_in and c_out")


@dataclass(frozen=True)
class Linear:
    d_in: int
    d_out: int
    tokens: int = 1

    kind = "linear"

    def __post_init__(self):
        if min(self.d_in, self.d_out, self.tokens) < 1:
            raise ValueError("linear dims must be positive")


@dataclass(frozen=True)
class Attention:
    """Multi-head self-attention block: QKV + output projections plus the
    two score/value matmuls. Head count does not change the total."""

    seq_len: int
    dim: int
    heads: int = 1

    kind = "attention"

    def __post_init__(self):
        if min(self.seq_len, self.dim, self.heads) < 1:
            raise ValueError("attention dims must be positive")
        if self.dim % self.heads:
            raise ValueError("heads must divide dim")


@dataclass(frozen=True)
class Pool:
    """Zero-MAC spatial pooling to a fixed output size (default global 1x1)."""

    out_h: int = 1
    out_w: int = 1

    kind = "pool"

    def __post_init__(self):
        if min(self.out_h, self.out_w) < 1:
            raise ValueError("pool output dims must be positive")


@dataclass(frozen=True)
class Activation:
    kind = "activation"


@dataclass(frozen=True)
class Norm:
    kind = "norm"


LayerSpec = Union[Conv2d, Linear, Attention, Pool, Activation, Norm]


@dataclass(frozen=True)
class ModelGraph:
    name: str
    input: SpatialShape
    layers: tuple = ()


@dataclass(frozen=True)
class LayerCost:
    index: int
    kind: str
    macs: int
    params: int
    output: str


@dataclass(frozen=True)
class BudgetReport:
    name: str
    total_macs: int
    total_params: int
    budget_macs: int
    passed: bool
    layers: tuple = field(default_factory=tuple)

    @property
    def total_gmacs(self) -> float:
        return self.total_macs / GMAC


# --- cost model ---------------------------------------------------------------


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _conv_out(layer: Conv2d, h: int, w: int) -> tuple[int, int]:
    return _ceil_div(h, layer.stride), _ceil_div(w, layer.stride)


def layer_macs(layer: LayerSpec, in_shape: Shape | None = None) -> int:
    """MACs of a single layer.

    Convolutions need spatial input dims, either declared on the layer or
    supplied via ``in_shape``. Zero-MAC kinds return 0.
    """
    if isinstance(layer, Conv2d):
        if layer.in_h is not None and layer.in_w is not None:
            h, w = layer.in_h, layer.in_w
        elif isinstance(in_shape, SpatialShape):
            h, w = in_shape.height, in_shape.width
        else:
            raise ShapeMismatchError("conv2d needs input spatial dims")
        h_out, w_out = _conv_out(layer, h, w)
        return h_out * w_out * layer.c_out * (layer.k_h * layer.k_w * layer.c_in // layer.groups)
    if isinstance(layer, Linear):
        return layer.tokens * layer.d_in * layer.d_out
    if isinstance(layer, Attention):
        length, dim = layer.seq_len, layer.dim
        return 4 * length * dim * dim + 2 * length * length * dim
    if isinstance(layer, (Pool, Activation, Norm)):
        return 0
    raise TypeError(f"unknown layer type: {type(layer).__name__}")


def layer_params(layer: LayerSpec, in_shape: Shape | None = None) -> int:
    """Simple weight count (with biases); norms contribute scale+shift."""
    if isinstance(layer, Conv2d):
        return (layer.k_h * layer.k_w * layer.c_in // layer.groups) * layer.c_out + layer.c_out
    if isinstance(layer, Linear):
        return layer.d_in * layer.d_out + layer.d_out
    if isinstance(layer, Attention):
        return 4 * (layer.dim * layer.dim + layer.dim)
    if isinstance(layer, Norm):
        if isinstance(in_shape, SpatialShape):
            return 2 * in_shape.channels
        if isinstance(in_shape, TokenShape):
            return 2 * in_shape.dim
        return 0
    return 0


def _propagate(layer: LayerSpec, shape: Shape, index: int) -> Shape:
    """Output shape of a layer, validating against the incoming shape."""

    def fail(msg: str):
        raise ShapeMismatchError(f"layer {index} ({layer.kind}): {msg}")

    if isinstance(layer, Conv2d):
        if not isinstance(shape, SpatialShape):
            fail(f"needs spatial input, got {shape}")
        if layer.c_in != shape.channels:
            fail(f"c_in={layer.c_in} but input has {shape.channels} channels")
        if layer.in_h is not None and (layer.in_h, layer.in_w) != (shape.height, shape.width):
            fail(
                f"declared input {layer.in_h}x{layer.in_w} but graph provides "
                f"{shape.height}x{shape.width}"
            )
        h_out, w_out = _conv_out(layer, shape.height, shape.width)
        return SpatialShape(h_out, w_out, layer.c_out)
    if isinstance(layer, Linear):
        if isinstance(shape, SpatialShape):
            tokens_in, feat = shape.height * shape.width, shape.channels
        else:
            tokens_in, feat = shape.tokens, shape.dim
        if layer.d_in != feat:
            fail(f"d_in={layer.d_in} but input features are {feat}")
        if layer.tokens != tokens_in:
            fail(f"tokens={layer.tokens} but input has {tokens_in} tokens")
        return TokenShape(layer.tokens, layer.d_out)
    if isinstance(layer, Attention):
        if not isinstance(shape, TokenShape):
            fail(f"needs token input, got {shape}")
        if (layer.seq_len, layer.dim) != (shape.tokens, shape.dim):
            fail(
                f"declared {layer.seq_len}x{layer.dim} but input is "
                f"{shape.tokens}x{shape.dim}"
            )
        return shape
    if isinstance(layer, Pool):
        if not isinstance(shape, SpatialShape):
            fail(f"needs spatial input, got {shape}")
        if layer.out_h > shape.height or layer.out_w > shape.width:
            fail(f"pool output {layer.out_h}x{layer.out_w} exceeds input {shape}")
        return SpatialShape(layer.out_h, layer.out_w, shape.channels)
    return shape  # activation / norm


def graph_macs(graph: ModelGraph, budget_gmacs: float = DEFAULT_BUDGET_BUDGET if False else DEFAULT_BUDGET_GMACS, strict: bool = False) -> BudgetReport:
    """Per-layer and total MACs with a pass/fail flag against the budget."""
    shape: Shape = graph.input
    costs = []
    total_macs = 0
    total_params = 0
    for index, layer in enumerate(graph.layers):
        macs = layer_macs(layer, shape)
        params = layer_params(layer, shape)
        shape = _propagate(layer, shape, index)
        costs.append(LayerCost(index, layer.kind, macs, params, str(shape)))
        total_macs += macs
        total_params += params
    budget = int(round(budget_gmacs * GMAC))
    passed = total_macs < budget if strict else total_macs <= budget
    return BudgetReport(
        name=graph.name,
        total_macs=total_macs,
        total_params=total_params,
        budget_macs=budget,
        passed=passed,
        layers=tuple(costs),
    )


def gate(graph: ModelGraph, budget_gmacs: float = DEFAULT_BUDGET_GMACS, strict: bool = False) -> bool:
    """True iff the graph's total MACs fit the budget."""
    return graph_macs(graph, budget_gmacs, strict).passed


# --- JSON interface -----------------------------------------------------------

_LAYER_TYPES = {
    "conv2d": Conv2d,
    "linear": Linear,
    "attention": Attention,
    "pool": Pool,
    "activation": Activation,
    "norm": Norm,
}


def layer_from_dict(d: dict) -> LayerSpec:
    d = dict(d)
    kind = d.pop("kind", None)
    if kind not in _LAYER_TYPES:
        raise ValueError(f"unknown layer kind: {kind!r}")
    try:
        return _LAYER_TYPES[kind](**d)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from exc


def layer_to_dict(layer: LayerSpec) -> dict:
    out = {"kind": layer.kind}
    for name in getattr(layer, "__dataclass_fields__", {}):
        value = getattr(layer, name)
        if value is not None:
            out[name] = value
    return out


def graph_from_dict(d: dict) -> ModelGraph:
    h, w, c = (int(x) for x in d["input"])
    layers = tuple(layer_from_dict(ld) for ld in d.get("layers", []))
    return ModelGraph(name=str(d.get("name", "model")), input=SpatialShape(h, w, c), layers=layers)


def graph_to_dict(graph: ModelGraph) -> dict:
    return {
        "name": graph.name,
        "input": [graph.input.height, graph.input.width, graph.input.channels],
        "layers": [layer_to_dict(layer) for layer in graph.layers],
    }


def load_graph(path) -> ModelGraph:
    return graph_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def report_to_dict(report: BudgetReport) -> dict:
    return {
        "name": report.name,
        "total_macs": report.total_macs,
        "total_gmacs": report.total_gmacs,
        "total_params": report.total_params,
        "budget_macs": report.budget_macs,
        "passed": report.passed,
        "layers": [
            {
                "index": lc.index,
                "kind": lc.kind,
                "macs": lc.macs,
                "params": lc.params,
                "output": lc.output,
            }
            for lc in report.layers
        ],
    }


def render_report(report: BudgetReport) -> str:
    lines = [f"model: {report.name}"]
    for lc in report.layers:
        lines.append(
            f"  [{lc.index:>2}] {lc.kind:<10} macs={lc.macs:<16,} "
            f"params={lc.params:<12,} out={lc.output}"
        )
    verdict = "PASS" if report.passed else "FAIL"
    lines.append(
        f"total: {report.total_macs:,} MACs ({report.total_gmacs:.3f} G) "
        f"vs budget {report.budget_macs / GMAC:g} G -> {verdict}"
    )
    return "\n".join(lines)
