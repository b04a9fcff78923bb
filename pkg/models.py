"""Domain records shared by the services. Numbers inside them are BetaNumbers."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from utils.parsing import format_word


@dataclass(frozen=True)
class Word:
    """An admissible word; build through beta_shift.make_word"""
    letters: Tuple[int, ...]
    context: Any = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self.letters)


@dataclass(frozen=True)
class ShiftClass:
    """SFT(k), Sofic(l, k_beta) or NotSoficUpTo(depth)"""
    kind: str
    k: Optional[int] = None
    l: Optional[int] = None
    k_beta: Optional[int] = None
    depth: Optional[int] = None
    certificate: Optional[str] = None

    @classmethod
    def sft(cls, k):
        return cls('sft', k=k)

    @classmethod
    def sofic(cls, l, k_beta):
        return cls('sofic', l=l, k_beta=k_beta)

    @classmethod
    def unknown(cls, depth, certificate=None):
        return cls('unknown', depth=depth, certificate=certificate)

    @property
    def is_sft(self):
        return self.kind == 'sft'

    @property
    def is_sofic(self):
        return self.kind == 'sofic'

    @property
    def resolved(self):
        return self.kind != 'unknown'

    def to_dict(self):
        if self.is_sft:
            return {'kind': 'sft', 'k': self.k}
        if self.is_sofic:
            return {'kind': 'sofic', 'l': self.l, 'k_beta': self.k_beta}
        data = {'kind': 'unknown', 'depth': self.depth}
        if self.certificate:
            data['certificate'] = self.certificate
        return data


@dataclass(frozen=True)
class K0Result:
    """Cyclic(order) or FreeZ; unit is the class of [1]"""
    kind: str
    order: Optional[int] = None
    unit: int = 1
    conditional: bool = False

    def __str__(self):
        if self.kind == 'free':
            return "Z"
        if self.order == 1:
            return "0"
        return f"Z/{self.order}Z"

    def to_dict(self):
        data = {'kind': self.kind, 'group': str(self)}
        if self.kind == 'cyclic':
            data['order'] = self.order
        data['unit'] = self.unit
        if self.conditional:
            data['conditional'] = True
        return data


@dataclass(frozen=True)
class GroupClass:
    """HigmanThompson(n), NotHigmanThompson or Unknown(depth)"""
    kind: str
    n: Optional[int] = None
    depth: Optional[int] = None

    def __str__(self):
        if self.kind == 'higman_thompson':
            return f"V_{self.n}"
        if self.kind == 'not_higman_thompson':
            return "not V_n"
        return f"unknown (depth {self.depth})"

    def to_dict(self):
        data = {'kind': self.kind}
        if self.n is not None:
            data['n'] = self.n
        if self.depth is not None:
            data['depth'] = self.depth
        return data


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Projection:
    """Minimal projection E_i as the value interval (lower, upper]"""
    index: int
    lower: Any
    upper: Any
    p: int
    q: Optional[int]


@dataclass(frozen=True)
class ProjectionSystem:
    values: Tuple[Any, ...]
    projections: Tuple[Projection, ...]

    @property
    def size(self):
        return len(self.projections)


@dataclass(frozen=True, order=True)
class Edge:
    source: int
    label: int
    target: int


@dataclass
class LabeledGraph:
    """The labeled graph on vertices 1..K, backed by a networkx MultiDiGraph"""
    vertices: List[int]
    edges: List[Edge]
    digraph: nx.MultiDiGraph = field(init=False, repr=False)

    def __post_init__(self):
        self.edges = sorted(self.edges)
        self.digraph = nx.MultiDiGraph()
        self.digraph.add_nodes_from(self.vertices)
        for edge in self.edges:
            self.digraph.add_edge(edge.source, edge.target, key=edge.label, label=edge.label)

    def out_edges(self, vertex):
        return [edge for edge in self.edges if edge.source == vertex]

    def is_left_resolving(self):
        seen = set()
        for edge in self.edges:
            if (edge.label, edge.target) in seen:
                return False
            seen.add((edge.label, edge.target))
        return True

    def adjacency(self):
        size = len(self.vertices)
        matrix = [[0] * size for _ in range(size)]
        for source, target in self.digraph.edges():
            matrix[source - 1][target - 1] += 1
        return matrix


@dataclass(frozen=True)
class MatrixSet:
    M: List[List[int]]
    B: List[List[int]]
    R: List[List[int]]
    S: List[List[int]]
    L: List[List[int]]
    eta: List[int]
    determinant: int

    def to_dict(self):
        return {
            'M': self.M, 'B': self.B, 'R': self.R, 'S': self.S, 'L': self.L,
            'eta': self.eta, 'det': self.determinant
        }


@dataclass(frozen=True)
class MarkedWord:
    """A cell nu_[i]: the word nu with follower tails restricted to E_i"""
    letters: Tuple[int, ...]
    cls: int

    @property
    def depth(self):
        return len(self.letters)

    def __str__(self):
        return f"({format_word(self.letters) or '∅'},[{self.cls}])"


@dataclass(frozen=True)
class TableRow:
    top: MarkedWord
    bottom: MarkedWord

    @property
    def cls(self):
        return self.bottom.cls


@dataclass(frozen=True)
class BetaTable:
    """Rows map bottom cells onto top cells; kept sorted by bottom left endpoint"""
    context: Any
    rows: Tuple[TableRow, ...]

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class Segment:
    """Linear piece on [x0, x1) with image starting at y0 and slope beta ** slope_exp"""
    x0: Any
    x1: Any
    y0: Any
    slope_exp: int


@dataclass(frozen=True)
class PLFunction:
    context: Any
    segments: Tuple[Segment, ...]


@dataclass
class CliConfig:
    beta: Optional[str]
    depth: int
    output_format: str
    inputs: List[str] = field(default_factory=list)
    output: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)
