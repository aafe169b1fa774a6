"""Hypothesis strategies: random words in the generators of a group."""

from hypothesis import strategies as st


def words(group, max_len=8):
    gens = [g for _, g in group.symmetric_generators()]
    return st.lists(st.sampled_from(gens), max_size=max_len).map(group.product)


def sequences(graph, max_edges=4, max_label=3):
    """Random G-paths starting at the base vertex (edge walk plus labels)."""
    from gogrd.gog import GSequence

    @st.composite
    def build(draw):
        vertex = graph.base
        group = graph.group_at(vertex)
        labels = [draw(words(group, max_label))]
        edges = []
        for _ in range(draw(st.integers(0, max_edges))):
            e = draw(st.sampled_from(graph.edges_from(vertex)))
            edges.append(e)
            vertex = graph.terminus(e)
            labels.append(draw(words(graph.group_at(vertex), max_label)))
        return GSequence(graph.base, tuple(labels), tuple(edges))

    return build()


def loops(graph, max_edges=4, max_label=3):
    return sequences(graph, max_edges, max_label).filter(lambda s: graph.end(s) == graph.base)
