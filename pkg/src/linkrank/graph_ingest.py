"""Edge-list parsing and validation for directed link graphs.

File format: UTF-8 text, one ``source target`` pair per line, whitespace
separated. Blank lines and lines starting with ``#`` are ignored. Page
indices are assigned in order of first appearance.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import EdgeListParseError, GraphValidationError


@dataclass(frozen=True)
class PageId:
    label: str
    index: int


@dataclass(frozen=True)
class LinkGraph:
    """Directed page-link graph.

    ``edges`` keeps input order so that serialization round-trips exactly;
    use :attr:`edge_set` for membership tests.
    """

    pages: tuple[PageId, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.pages)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.pages)

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def out_links(self, source: int) -> list[int]:
        return sorted(t for s, t in self.edges if s == source)

    def out_degrees(self) -> list[int]:
        deg = [0] * self.n
        for s, _ in self.edges:
            deg[s] += 1
        return deg

    def in_degrees(self) -> list[int]:
        deg = [0] * self.n
        for _, t in self.edges:
            deg[t] += 1
        return deg


@dataclass(frozen=True)
class ValidationReport:
    n_pages: int
    n_edges: int
    dangling: tuple[str, ...]
    unreachable: tuple[str, ...]

    @property
    def matrix_ready(self) -> bool:
        return not self.dangling

    def to_dict(self) -> dict:
        return {
            "pages": self.n_pages,
            "edges": self.n_edges,
            "dangling": list(self.dangling),
            "unreachable": list(self.unreachable),
            "matrix_ready": self.matrix_ready,
        }


def parse_edge_list(text: str) -> LinkGraph:
    """Parse edge-list text into a :class:`LinkGraph`.

    Raises
    ------
    EdgeListParseError
        A line does not hold exactly two tokens, or the text has no edges.
    GraphValidationError
        A self-loop or a repeated edge.
    """
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(
                f"expected 'source target', got {len(tokens)} token(s): {line!r}", lineno
            )
        src, dst = tokens
        if src == dst:
            raise GraphValidationError(f"line {lineno}: self-loop on page {src!r}")
        for label in (src, dst):
            if label not in index:
                index[label] = len(index)
        edge = (index[src], index[dst])
        if edge in seen:
            raise GraphValidationError(f"line {lineno}: duplicate edge {src} -> {dst}")
        seen.add(edge)
        edges.append(edge)

    if not edges:
        raise EdgeListParseError("edge list contains no edges")

    pages = tuple(PageId(label, i) for label, i in index.items())
    return LinkGraph(pages=pages, edges=tuple(edges))


def read_edge_list(path) -> LinkGraph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def serialize_edge_list(graph: LinkGraph) -> str:
    labels = graph.labels
    return "".join(f"{labels[s]} {labels[t]}\n" for s, t in graph.edges)


def validate(graph: LinkGraph) -> ValidationReport:
    """Report dangling pages (no out-links) and pages nobody links to."""
    out_deg = graph.out_degrees()
    in_deg = graph.in_degrees()
    labels = graph.labels
    return ValidationReport(
        n_pages=graph.n,
        n_edges=len(graph.edges),
        dangling=tuple(labels[i] for i in range(graph.n) if out_deg[i] == 0),
        unreachable=tuple(labels[i] for i in range(graph.n) if in_deg[i] == 0),
    )
