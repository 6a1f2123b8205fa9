"""Shapelet decision trees: candidate generation, search, induction, prediction.

The search sweeps candidates with length descending, then instance and start
position ascending. Randomized discovery draws one uniform variate per
visited candidate and evaluates it iff the variate falls below the sampling
ratio, so a ratio of 1.0 degenerates to the exhaustive sweep. The best
candidate so far is only replaced by one strictly better under
(gain, margin, -threshold) lexicographic order, which makes results
independent of whether gain-bound pruning is enabled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from ._kernels import _find_shapelet_kernel
from .dataset import Dataset, TimeSeries
from .metric import Shapelet, subsequence_distance, znormalize_window
from .orderline import OrderLine, split_dataset

EXHAUSTIVE = "exhaustive"
RANDOM = "random"


class NoCandidatesError(RuntimeError):
    """Randomized sampling yielded no candidate for an entire sweep."""


@dataclass
class SearchStats:
    """Counters for one or more shapelet searches."""

    candidates_visited: int = 0
    candidates_evaluated: int = 0
    candidates_pruned: int = 0
    distance_early_abandons: int = 0

    def __add__(self, other: "SearchStats") -> "SearchStats":
        return SearchStats(
            self.candidates_visited + other.candidates_visited,
            self.candidates_evaluated + other.candidates_evaluated,
            self.candidates_pruned + other.candidates_pruned,
            self.distance_early_abandons + other.distance_early_abandons,
        )


class CandidateGenerator:
    """One-shot sweep over (length, instance, position) candidate coordinates.

    Iteration order is length descending from max_len to min_len, instance
    ascending within a length, start position ascending within an instance.
    In random mode each visited coordinate consumes one uniform draw from the
    generator's stream and is yielded iff the draw is below the ratio.
    """

    def __init__(
        self,
        n_instances: int,
        series_length: int,
        min_len: int,
        max_len: int,
        mode: str = EXHAUSTIVE,
        ratio: float = 1.0,
        rng: np.random.Generator | None = None,
    ):
        if not (1 <= min_len <= max_len <= series_length):
            raise ValueError(
                f"length bounds (min={min_len}, max={max_len}) invalid for m={series_length}"
            )
        if mode not in (EXHAUSTIVE, RANDOM):
            raise ValueError(f"unknown generator mode {mode!r}")
        if mode == RANDOM:
            if not (0.0 < ratio <= 1.0):
                raise ValueError(f"sampling ratio must be in (0, 1], got {ratio}")
            if rng is None:
                raise ValueError("random mode needs a seeded generator")
        self.n_instances = n_instances
        self.series_length = series_length
        self.min_len = min_len
        self.max_len = max_len
        self.mode = mode
        self.ratio = ratio
        self.rng = rng
        self.visited = 0
        self._consumed = False

    @classmethod
    def exhaustive(cls, dataset: Dataset, min_len: int, max_len: int):
        return cls(len(dataset), dataset.series_length, min_len, max_len)

    @classmethod
    def random(
        cls,
        dataset: Dataset,
        min_len: int,
        max_len: int,
        ratio: float,
        rng: np.random.Generator,
    ):
        return cls(
            len(dataset),
            dataset.series_length,
            min_len,
            max_len,
            mode=RANDOM,
            ratio=ratio,
            rng=rng,
        )

    @property
    def total_candidates(self) -> int:
        m = self.series_length
        return sum(
            self.n_instances * (m - length + 1)
            for length in range(self.min_len, self.max_len + 1)
        )

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        if self._consumed:
            raise RuntimeError("candidate generator already consumed")
        self._consumed = True
        m = self.series_length
        for length in range(self.max_len, self.min_len - 1, -1):
            for instance in range(self.n_instances):
                for pos in range(m - length + 1):
                    self.visited += 1
                    if self.mode == RANDOM:
                        if self.rng.random() >= self.ratio:
                            continue
                    yield length, instance, pos

    def _take_uniform_block(self) -> np.ndarray:
        """Uniform draws for the whole sweep, one per coordinate in visit order.

        Block draws and repeated scalar draws read the same bit stream, so this
        is interchangeable with iterating; the generator counts as consumed.
        """
        if self._consumed:
            raise RuntimeError("candidate generator already consumed")
        self._consumed = True
        if self.mode == EXHAUSTIVE:
            return np.empty(0)
        return self.rng.random(self.total_candidates)


GeneratorFactory = Callable[[Dataset], CandidateGenerator]


def exhaustive_factory(min_len: int, max_len: int) -> GeneratorFactory:
    def factory(dataset: Dataset) -> CandidateGenerator:
        return CandidateGenerator.exhaustive(dataset, min_len, max_len)

    return factory


def random_factory(
    min_len: int, max_len: int, ratio: float, rng: np.random.Generator
) -> GeneratorFactory:
    """All generators from this factory share (and advance) one stream."""

    def factory(dataset: Dataset) -> CandidateGenerator:
        return CandidateGenerator.random(dataset, min_len, max_len, ratio, rng)

    return factory


@dataclass
class ShapeletSearchResult:
    shapelet: Shapelet
    split_distance: float
    order_line: OrderLine
    gain: float
    margin: float
    stats: SearchStats


def find_shapelet(
    dataset: Dataset,
    min_len: int,
    max_len: int,
    gen: CandidateGenerator,
    pruning: bool = True,
) -> ShapeletSearchResult:
    """Best (shapelet, threshold) over the generator's candidates.

    Distances to the training instances are computed in instance order with
    per-window early abandoning; with pruning enabled a candidate is dropped
    once the optimistic gain bound of its partial order line falls strictly
    below the best gain so far. Pruning never changes the returned result.

    Raises :class:`NoCandidatesError` when the generator yields nothing.
    """
    if len(dataset) < 2 or len(dataset.classes) < 2:
        raise ValueError("shapelet search needs at least 2 instances and 2 classes")
    if gen.n_instances != len(dataset) or gen.series_length != dataset.series_length:
        raise ValueError("generator was built for a different dataset shape")
    min_len = int(min_len)
    max_len = int(max_len)
    if not (1 <= min_len <= max_len <= dataset.series_length):
        raise ValueError(
            f"length bounds (min={min_len}, max={max_len}) invalid for m={dataset.series_length}"
        )
    if (gen.min_len, gen.max_len) != (min_len, max_len):
        raise ValueError("generator length bounds disagree with the search bounds")

    uniforms = gen._take_uniform_block()
    use_sampling = gen.mode == RANDOM

    X = dataset.matrix()
    cs, cq = dataset.cum_matrices()
    class_index = {c: i for i, c in enumerate(dataset.classes)}
    labels = np.array([class_index[ts.label] for ts in dataset.instances], dtype=np.int64)

    (
        found,
        src_inst,
        src_pos,
        src_len,
        gain,
        split,
        margin,
        line_dists,
        visited,
        evaluated,
        pruned,
        abandons,
    ) = _find_shapelet_kernel(
        X,
        cs,
        cq,
        labels,
        dataset.weights,
        len(dataset.classes),
        min_len,
        max_len,
        float(gen.ratio),
        uniforms,
        use_sampling,
        bool(pruning),
    )

    gen.visited = int(visited)
    stats = SearchStats(
        candidates_visited=int(visited),
        candidates_evaluated=int(evaluated),
        candidates_pruned=int(pruned),
        distance_early_abandons=int(abandons),
    )
    if not found:
        raise NoCandidatesError(
            f"no candidate yielded over {visited} visited (ratio={gen.ratio})"
        )

    shapelet = Shapelet(
        norm_values=znormalize_window(
            dataset.instances[src_inst], int(src_pos), int(src_len)
        ),
        source=(int(src_inst), int(src_pos), int(src_len)),
    )
    line = OrderLine()
    for i, ts in enumerate(dataset.instances):
        line.add(float(line_dists[i]), ts.label, float(dataset.weights[i]))
    return ShapeletSearchResult(
        shapelet=shapelet,
        split_distance=float(split),
        order_line=line,
        gain=float(gain),
        margin=float(margin),
        stats=stats,
    )


@dataclass
class LeafNode:
    label: int


@dataclass
class InternalNode:
    shapelet: Shapelet
    split_distance: float
    left: "LeafNode | InternalNode"
    right: "LeafNode | InternalNode"


@dataclass
class ShapeletTree:
    """Fully grown shapelet decision tree plus its training search counters."""

    root: LeafNode | InternalNode
    classes: list[int]
    stats: SearchStats = field(default_factory=SearchStats)

    def predict(self, series: TimeSeries) -> int:
        node = self.root
        while isinstance(node, InternalNode):
            dist = subsequence_distance(node.shapelet, series)
            node = node.left if dist <= node.split_distance else node.right
        return node.label

    @property
    def n_nodes(self) -> int:
        def count(node) -> int:
            if isinstance(node, LeafNode):
                return 1
            return 1 + count(node.left) + count(node.right)

        return count(self.root)

    @property
    def depth(self) -> int:
        def depth_of(node) -> int:
            if isinstance(node, LeafNode):
                return 0
            return 1 + max(depth_of(node.left), depth_of(node.right))

        return depth_of(self.root)

    def to_dict(self) -> dict:
        """Flat node-list form; children referenced by index, root at 0."""
        nodes: list[dict] = []

        def emit(node) -> int:
            idx = len(nodes)
            nodes.append({})
            if isinstance(node, LeafNode):
                nodes[idx] = {"type": "leaf", "label": node.label}
            else:
                left = emit(node.left)
                right = emit(node.right)
                nodes[idx] = {
                    "type": "internal",
                    "values": [float(v) for v in node.shapelet.norm_values],
                    "source": list(node.shapelet.source),
                    "split_distance": node.split_distance,
                    "left": left,
                    "right": right,
                }
            return idx

        emit(self.root)
        return {"format": "shapelet-tree-v1", "classes": self.classes, "nodes": nodes}

    @classmethod
    def from_dict(cls, data: dict) -> "ShapeletTree":
        if data.get("format") != "shapelet-tree-v1":
            raise ValueError(f"unsupported tree format {data.get('format')!r}")
        nodes = data["nodes"]

        def build(idx: int):
            spec = nodes[idx]
            if spec["type"] == "leaf":
                return LeafNode(label=int(spec["label"]))
            return InternalNode(
                shapelet=Shapelet(
                    norm_values=np.asarray(spec["values"], dtype=np.float64),
                    source=tuple(spec["source"]),
                ),
                split_distance=float(spec["split_distance"]),
                left=build(spec["left"]),
                right=build(spec["right"]),
            )

        return cls(root=build(0), classes=[int(c) for c in data["classes"]])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "ShapeletTree":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ShapeletTree":
        return cls.loads(Path(path).read_text())


def predict(tree: ShapeletTree, series: TimeSeries) -> int:
    """Route the series down the tree: left iff distance <= node threshold."""
    return tree.predict(series)


def create_tree(
    dataset: Dataset,
    min_len: int,
    max_len: int,
    gen_factory: GeneratorFactory,
    pruning: bool = True,
) -> ShapeletTree:
    """Fully grown tree: recurse until nodes are pure or no informative split exists.

    A node becomes a leaf (weighted-majority label, ties to the smallest) when
    its instances are single-class, when the search finds no candidate even
    after one retry pass, when the best gain is not positive, or when the
    split would leave a child empty. No depth or node-size cap.
    """
    if len(dataset) == 0:
        raise ValueError("cannot grow a tree on an empty dataset")
    total_stats = SearchStats()

    def build(node_data: Dataset):
        nonlocal total_stats
        if len(node_data.classes) == 1:
            return LeafNode(label=node_data.classes[0])

        result = None
        for _attempt in range(2):
            gen = gen_factory(node_data)
            try:
                result = find_shapelet(node_data, min_len, max_len, gen, pruning)
            except NoCandidatesError:
                total_stats = total_stats + SearchStats(
                    candidates_visited=gen.visited
                )
                continue
            break
        if result is None:
            return LeafNode(label=node_data.majority_label())

        total_stats = total_stats + result.stats
        if result.gain <= 0.0:
            return LeafNode(label=node_data.majority_label())
        left_data, right_data = split_dataset(
            node_data, result.order_line, result.split_distance
        )
        if len(left_data) == 0 or len(right_data) == 0:
            return LeafNode(label=node_data.majority_label())
        return InternalNode(
            shapelet=result.shapelet,
            split_distance=result.split_distance,
            left=build(left_data),
            right=build(right_data),
        )

    root = build(dataset)
    return ShapeletTree(root=root, classes=list(dataset.classes), stats=total_stats)
