"""Per-team citation graph: forward/reverse indices over immutable papers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .model import MiniPaper, PaperKind


class DuplicateNodeError(ValueError):
    """Paper id already present; signals an engine bug, not user input."""


class DanglingCitationError(ValueError):
    """Citation target missing from the graph; signals an engine bug."""


class UnknownPaperError(KeyError):
    pass


@dataclass(frozen=True)
class GraphNode:
    seq: int
    kind: PaperKind
    score: float | None = None


@dataclass(frozen=True)
class CitationGraph:
    """Immutable value; every update returns a new graph.

    Invariant: edge a->b exists iff b is in a's citation list iff a is in
    reverse[b], and seq(b) < seq(a), so the graph is acyclic by construction.
    """

    nodes: Mapping[str, GraphNode] = field(default_factory=dict)
    forward: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    reverse: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def add_paper(self, paper: MiniPaper) -> "CitationGraph":
        if paper.id in self.nodes:
            raise DuplicateNodeError(f"paper {paper.id} already in graph")
        for cited in paper.citations:
            node = self.nodes.get(cited)
            if node is None:
                raise DanglingCitationError(f"{paper.id} cites unknown paper {cited}")
            if node.seq >= paper.seq:
                raise DanglingCitationError(
                    f"{paper.id} (seq {paper.seq}) cites {cited} with seq {node.seq}"
                )
        nodes = dict(self.nodes)
        nodes[paper.id] = GraphNode(seq=paper.seq, kind=paper.kind, score=paper.score)
        forward = dict(self.forward)
        forward[paper.id] = tuple(paper.citations)
        reverse = dict(self.reverse)
        reverse[paper.id] = frozenset()
        for cited in paper.citations:
            reverse[cited] = reverse[cited] | {paper.id}
        return CitationGraph(nodes=nodes, forward=forward, reverse=reverse)

    def cites(self, paper_id: str) -> tuple[str, ...]:
        """Citation targets in the order the paper declared them."""
        self._require(paper_id)
        return self.forward[paper_id]

    def cited_by(self, paper_id: str) -> frozenset[str]:
        self._require(paper_id)
        return self.reverse[paper_id]

    def lineage(self, paper_id: str) -> frozenset[str]:
        """Everything the paper transitively builds on, excluding itself."""
        self._require(paper_id)
        seen: set[str] = set()
        stack = list(self.forward[paper_id])
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(self.forward[current])
        return frozenset(seen)

    def edge_count(self) -> int:
        return sum(len(targets) for targets in self.forward.values())

    def uncited_papers(self) -> frozenset[str]:
        return frozenset(pid for pid in self.nodes if not self.reverse[pid])

    def topological_order(self) -> list[str]:
        """Node ids sorted so every citation points backwards."""
        return sorted(self.nodes, key=lambda pid: self.nodes[pid].seq)

    def edges(self) -> Iterator[tuple[str, str]]:
        """(citing, cited) pairs, citing papers in seq order."""
        for pid in self.topological_order():
            for cited in self.forward[pid]:
                yield pid, cited

    def _require(self, paper_id: str) -> None:
        if paper_id not in self.nodes:
            raise UnknownPaperError(paper_id)


def empty_graph() -> CitationGraph:
    return CitationGraph()
