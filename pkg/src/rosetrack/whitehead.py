"""Turn closures and the local/stable/limited/ideal Whitehead graphs.

The local Whitehead graph records every turn taken by any iterate image of an
edge.  It is computed as a least fixed point: start from the turns taken by
single-edge images and close under the turn map.  For train track maps this
agrees with the iterate-based definition; for other maps the k=1 turns are
included uniformly (see TurnClosure.includes_first_iterate).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import MissingCertificate, NotTrainTrack
from .graphs import PURPLE, RED, ColoredPairLabeledGraph, connected_components
from .words import (
    Decomposition,
    GraphMap,
    Turn,
    directions,
    index_entry,
    is_degenerate,
    is_illegal,
    periodic_directions,
    rotationless_power,
    taken_turns,
    turn,
)


def _single_image_turns(g) -> frozenset[Turn]:
    if isinstance(g, GraphMap):
        out: frozenset[Turn] = frozenset()
        for w in g.images:
            out |= taken_turns(w)
        return out
    if isinstance(g, Decomposition):
        return g.limited_turns()
    raise TypeError(f"cannot take turns of {type(g).__name__}")


def _dmap_of(g) -> Mapping[int, int]:
    return g.direction_map()


@dataclass(frozen=True)
class TurnClosure:
    """The taken-turn closure of a map, with the first iterate at which each
    turn appears.  Degenerate turns are retained (they witness illegality)
    but are never emitted as Whitehead-graph edges."""

    rank: int
    base: object
    turns: frozenset[Turn]
    generations: tuple[tuple[Turn, int], ...]
    includes_first_iterate: bool = True

    def generation_of(self, t: Turn) -> int:
        return dict(self.generations)[t]

    def nondegenerate(self) -> frozenset[Turn]:
        return frozenset(t for t in self.turns if not is_degenerate(t))


def turn_closure(g) -> TurnClosure:
    """Least fixed point of T -> D^t(T) united with the single-image turns.

    Stabilizes within C(2r, 2) rounds since there are finitely many turns.
    """
    rank = g.rank
    dmap = _dmap_of(g)
    frontier = _single_image_turns(g)
    generations: dict[Turn, int] = {t: 1 for t in frontier}
    turns = set(frontier)
    gen = 1
    while frontier:
        gen += 1
        nxt = set()
        for t in frontier:
            image = turn(dmap[t[0]], dmap[t[1]])
            if image not in turns:
                turns.add(image)
                generations[image] = gen
                nxt.add(image)
        frontier = nxt
    return TurnClosure(
        rank,
        g,
        frozenset(turns),
        tuple(sorted(generations.items())),
    )


def local_whitehead_graph(g) -> ColoredPairLabeledGraph:
    """One vertex per direction; an edge per nondegenerate closure turn.
    Vertices and edges are colored by periodicity (stable part purple)."""
    closure = turn_closure(g)
    periodic = periodic_directions(g)
    vertices = {
        d: (PURPLE if d in periodic else RED) for d in directions(g.rank)
    }
    edges = []
    for t in closure.nondegenerate():
        color = PURPLE if t[0] in periodic and t[1] in periodic else RED
        edges.append((t[0], t[1], color))
    return ColoredPairLabeledGraph.build(g.rank, vertices, edges)


def stable_whitehead_graph(g) -> ColoredPairLabeledGraph:
    """The induced subgraph of the local Whitehead graph on periodic
    directions."""
    lw = local_whitehead_graph(g)
    return lw.induced(periodic_directions(g))


def limited_whitehead_graph(seq) -> frozenset[Turn]:
    """Turns taken by a single application of the (composite) map."""
    return _single_image_turns(seq)


def limited_whitehead_graph_direct(d: Decomposition) -> frozenset[Turn]:
    """Reference computation of the limited Whitehead graph from the
    materialized composite; exponential-size at high rank, test use only."""
    return _single_image_turns(d.as_map())


def ideal_whitehead_graph(d: Decomposition, pnp_certificate) -> ColoredPairLabeledGraph:
    """The stable Whitehead graph of the rotationless power of the composite,
    valid as the outer-automorphism invariant only for Nielsen-path-free
    train track maps, so a certificate is demanded rather than assumed."""
    if pnp_certificate is None:
        raise MissingCertificate("an explicit Nielsen-path-freeness certificate is required")
    if not getattr(pnp_certificate, "pnp_free", False):
        raise MissingCertificate("certificate does not assert Nielsen-path-freeness")
    if not pnp_certificate.matches(d):
        raise MissingCertificate("certificate was issued for a different decomposition")
    if not is_train_track(d):
        raise NotTrainTrack("the composite takes an illegal turn")
    exponent, _ = rotationless_power(d)
    power = d if exponent == 1 else d.powered(exponent)
    return stable_whitehead_graph(power)


def index_list(iw: ColoredPairLabeledGraph) -> tuple[Fraction, ...]:
    """One entry 1 - k/2 per connected component with k vertices, sorted."""
    return tuple(
        sorted(index_entry(len(comp)) for comp in connected_components(iw))
    )


def is_train_track(g, bound: int | None = None) -> bool:
    """No turn in the taken-turn closure is illegal, i.e. every iterate stays
    locally injective on edge interiors."""
    try:
        closure = turn_closure(g)
    except NotTrainTrack:
        return False
    return not any(is_illegal(g, t, bound) for t in closure.turns)
