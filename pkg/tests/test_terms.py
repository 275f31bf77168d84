import itertools

from hypothesis import given, settings, strategies as st

from nlinv import terms as T


def f(*a):
    return T.fn("f", *a)


def g(*a):
    return T.fn("g", *a)


a, b, c = T.const("a"), T.const("b"), T.const("c")


def test_unify_binds_variable_to_constant():
    x = 0
    s = T.mgu(f(x, b), f(a, b))
    assert s == {x: a}


def test_unify_shares_variables_across_arguments():
    x, y = 0, 1
    s = T.mgu(f(x, g(x)), f(y, g(a)))
    assert T.apply(s, f(x, g(x))) == T.apply(s, f(y, g(a))) == f(a, g(a))


def test_occurs_check_rejects_cyclic_binding():
    x = 0
    assert T.mgu(x, f(x)) is None
    assert T.mgu(f(x, x), f(g(x), g(x))) is None


def test_clash_of_function_symbols_fails():
    assert T.mgu(f(a), g(a)) is None
    assert T.mgu(f(a), f(b)) is None


def test_same_name_different_arity_are_different_symbols():
    assert T.mgu(T.fn("h", a), T.fn("h", a, a)) is None
    try:
        T.check_arities([T.fn("h", a), T.fn("h", a, a)])
    except ValueError:
        pass
    else:
        raise AssertionError("mixed arities accepted")


def test_simultaneous_mgu():
    x, y = 0, 1
    s = T.simultaneous_mgu([(x, f(y)), (y, a)])
    assert T.apply(s, x) == f(a)
    assert T.simultaneous_mgu([(x, a), (x, b)]) is None


def test_match_is_one_way():
    x, y = 0, 1
    assert T.match(f(x, y), f(a, b)) == {x: a, y: b}
    assert T.match(f(a, b), f(x, y)) is None
    assert T.match(f(x, x), f(a, b)) is None


def test_size_and_depth():
    x = 0
    assert T.size(f(x, g(a))) == 4
    assert T.depth(a) == 0
    assert T.depth(f(x, g(a))) == 2


def test_format_names_variables_in_order():
    x, y = 7, 3
    t = f(x, g(y, x))
    names = T.var_names(T.ordered_vars([t]))
    assert T.format_term(t, names) == "f(x,g(y,x))"


# -- properties -------------------------------------------------------------------

SYMS = [("f", 2), ("g", 1), ("h", 3), ("a", 0), ("b", 0)]


def terms(vars_from=0, nvars=4):
    leaf = st.one_of(st.integers(vars_from, vars_from + nvars - 1),
                     st.sampled_from([a, b]))

    def extend(children):
        return st.one_of(
            st.tuples(children, children).map(lambda p: f(*p)),
            children.map(lambda t: g(t)),
            st.tuples(children, children, children).map(lambda p: T.fn("h", *p)),
        )
    return st.recursive(leaf, extend, max_leaves=8)


@settings(max_examples=1000, deadline=None)
@given(terms(), terms())
def test_mgu_is_symmetric_and_unifies(s, t):
    m1, m2 = T.mgu(s, t), T.mgu(t, s)
    assert (m1 is None) == (m2 is None)
    if m1 is not None:
        assert T.apply(m1, s) == T.apply(m1, t)
        assert T.apply(m2, s) == T.apply(m2, t)


@settings(max_examples=500, deadline=None)
@given(terms(), terms())
def test_mgu_is_idempotent(s, t):
    m = T.mgu(s, t)
    if m is not None:
        for v, u in m.items():
            assert T.apply(m, u) == u
            assert v not in T.variables(u)


def _generalize(t, data, counter, binding):
    # replace random subterms by fresh variables, recording the unifier
    if type(t) is not int and data.draw(st.booleans()):
        v = next(counter)
        binding[v] = t
        return v
    if type(t) is int or len(t) == 1:
        return t
    return (t[0], *[_generalize(x, data, counter, binding) for x in t[1:]])


@settings(max_examples=1000, deadline=None)
@given(terms(vars_from=1000), st.data())
def test_mgu_is_most_general(t, data):
    counter = itertools.count()
    theta = {}
    s = _generalize(t, data, counter, theta)
    u = _generalize(t, data, counter, theta)
    m = T.mgu(s, u)
    assert m is not None
    # theta unifies s and u, so it must be an instance of the mgu
    probe = T.fn("probe", s, u)
    assert T.apply(theta, s) == T.apply(theta, u)
    assert T.match(T.apply(m, probe), T.apply(theta, probe)) is not None


@given(terms())
def test_rename_apart_gives_disjoint_variables(t):
    counter = itertools.count(10_000)
    r = T.rename_apart(t, counter)
    assert not (T.variables(r) & T.variables(t))
    assert T.match(t, r) is not None and T.match(r, t) is not None


@given(terms(), terms())
def test_compose_applies_in_sequence(s, t):
    s1 = T.mgu(s, t) or {}
    s2 = {0: a, 1: f(b, g(a))}
    probe = T.fn("probe", s, t)
    assert T.apply(T.compose(s1, s2), probe) == T.apply(s2, T.apply(s1, probe))
