"""Primal and dual lattice paths."""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import Configuration, DualEdge, EdgeIndex, Vertex


@dataclass(frozen=True)
class LatticePath:
    """Vertex sequence of a nearest-neighbour path.

    Dual paths list dual vertices by lower-left corner.  A circuit repeats
    its first vertex at the end.
    """

    vertices: tuple[Vertex, ...]
    dual: bool = False

    def __post_init__(self):
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise ValueError("a path needs at least one vertex")
        for (ax, ay), (bx, by) in zip(verts, verts[1:]):
            if abs(ax - bx) + abs(ay - by) != 1:
                raise ValueError(f"consecutive vertices {(ax, ay)} and {(bx, by)} are not adjacent")

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    def edges(self) -> list:
        pairs = zip(self.vertices, self.vertices[1:])
        if self.dual:
            return [DualEdge(a, b) for a, b in pairs]
        return [EdgeIndex.between(a, b) for a, b in pairs]

    def primal_edges(self) -> list[EdgeIndex]:
        """Primal edges traversed, or crossed for a dual path."""
        if self.dual:
            return [d.primal() for d in self.edges()]
        return self.edges()

    @property
    def is_closed_loop(self) -> bool:
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    def is_self_avoiding(self) -> bool:
        verts = self.vertices[:-1] if self.is_closed_loop else self.vertices
        return len(set(verts)) == len(verts)

    def is_circuit(self) -> bool:
        return self.is_closed_loop and self.length >= 4 and self.is_self_avoiding()

    def is_open_in(self, cfg: Configuration) -> bool:
        """Every primal edge open (primal path) or every crossed edge closed (dual path)."""
        try:
            states = [cfg.is_open(e) for e in self.primal_edges()]
        except ValueError:
            return False
        return not any(states) if self.dual else all(states)

    def reversed(self) -> "LatticePath":
        return LatticePath(self.vertices[::-1], self.dual)

    def to_json(self) -> dict:
        if self.dual:
            verts = [[x + 0.5, y + 0.5] for x, y in self.vertices]
        else:
            verts = [list(v) for v in self.vertices]
        return {"kind": "dual" if self.dual else "primal", "vertices": verts}

    @classmethod
    def from_json(cls, record: dict) -> "LatticePath":
        dual = record["kind"] == "dual"
        if dual:
            verts = [(int(round(x - 0.5)), int(round(y - 0.5))) for x, y in record["vertices"]]
        else:
            verts = [(int(x), int(y)) for x, y in record["vertices"]]
        return cls(tuple(verts), dual)


def loop_erase(vertices: list[Vertex], labels: list | None = None):
    """Chronological loop erasure; ``labels`` (one per step) follow surviving steps."""
    out: list[Vertex] = []
    out_labels: list = []
    where: dict[Vertex, int] = {}
    for k, u in enumerate(vertices):
        if u in where:
            cut = where[u]
            for w in out[cut + 1:]:
                del where[w]
            del out[cut + 1:]
            del out_labels[cut:]
            continue
        if out and labels is not None:
            out_labels.append(labels[k - 1])
        where[u] = len(out)
        out.append(u)
    return (out, out_labels) if labels is not None else out
