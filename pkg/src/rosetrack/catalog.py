"""Built-in example decompositions.

The registry keys are the names accepted by the `example` CLI verb.
"""

from __future__ import annotations

from .words import Decomposition, NielsenGenerator


def rank3_base() -> Decomposition:
    """The nine-generator rank-3 sequence whose square is a legalizing
    Nielsen path prevention sequence; the seed for every higher-rank glue."""
    G = NielsenGenerator
    steps = (
        G.from_append(3, 1, -2),  # [a > ab-]
        G(3, 2, -1),              # [b > a-b]
        G.from_append(3, 3, -2),  # [c > cb-]
        G.from_append(3, 3, 1),   # [c > ca]
        G(3, 2, -3),              # [b > c-b]
        G.from_append(3, 1, -2),  # [a > ab-]
        G.from_append(3, 1, 3),   # [a > ac]
        G(3, 2, -1),              # [b > a-b]
        G(3, 2, -3),              # [b > c-b]
    )
    return Decomposition(3, steps)


def rank3_base_squared() -> Decomposition:
    return rank3_base().powered(2)


def rank2_with_nielsen_path() -> Decomposition:
    """a -> ab, b -> bab: a train track map that carries an honest Nielsen
    path (the commutator loop), useful as a positive control for the search."""
    G = NielsenGenerator
    return Decomposition(2, (G.from_append(2, 2, 1), G.from_append(2, 1, 2)))


EXAMPLES = {
    "lemma-3-6": rank3_base,
    "lemma-3-6-squared": rank3_base_squared,
    "rank2-nielsen-path": rank2_with_nielsen_path,
}


def example(name: str) -> Decomposition:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(
            f"unknown example {name!r}; available: {', '.join(sorted(EXAMPLES))}"
        ) from None
