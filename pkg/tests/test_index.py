from hypothesis import given, settings, strategies as st

from nlinv import terms as T
from nlinv.index import DiscTree, flatten, VAR

from test_terms import terms


def test_flatten_preorder():
    x = 0
    t = T.fn("f", x, T.fn("g", T.const("a")))
    f, g, a = t[0], t[2][0], t[2][1][0]
    assert flatten(t) == [f, VAR, g, a]


def test_remove_by_identity():
    tree = DiscTree()
    t = T.fn("f", T.const("a"))
    item1, item2 = ["one"], ["two"]
    tree.insert(t, item1)
    tree.insert(t, item2)
    assert tree.remove(t, item1)
    assert list(tree.unifiable(t)) == [item2]
    assert not tree.remove(t, item1)
    assert len(tree) == 1


@settings(max_examples=200, deadline=None)
@given(st.lists(terms(vars_from=100), min_size=1, max_size=12), terms())
def test_retrieval_never_misses(stored, query):
    tree = DiscTree()
    for i, t in enumerate(stored):
        tree.insert(t, i)
    unif = set(tree.unifiable(query))
    gen = set(tree.generalizations(query))
    inst = set(tree.instances(query))
    for i, t in enumerate(stored):
        if T.mgu(t, query) is not None:
            assert i in unif
        if T.match(t, query) is not None:
            assert i in gen
        if T.match(query, t) is not None:
            assert i in inst
    assert gen <= unif and inst <= unif
