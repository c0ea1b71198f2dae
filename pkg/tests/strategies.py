import itertools

from hypothesis import strategies as st

from matfib.core import App, Matrix, Signature, Var

VARS = ("p", "q", "r")


def formulas(sig: Signature, names=VARS, max_leaves=8):
    leaves = st.sampled_from([Var(x) for x in names])
    conns = [(c, k) for c, k in sig.items()]
    consts = [App(c) for c, k in conns if k == 0]
    if consts:
        leaves = st.one_of(leaves, st.sampled_from(consts))
    nonzero = [(c, k) for c, k in conns if k > 0]

    def extend(children):
        return st.sampled_from(nonzero).flatmap(
            lambda ck: st.tuples(*[children] * ck[1]).map(lambda args, c=ck[0]: App(c, args))
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def small_matrices(draw, tag="x", max_size=3):
    n = draw(st.integers(2, max_size))
    vals = [f"{tag}{i}" for i in range(n)]
    d = draw(st.sets(st.sampled_from(vals), min_size=1, max_size=n - 1))
    sig = Signature([(f"u{tag}", 1), (f"b{tag}", 2)])
    out = st.sampled_from(vals)
    tables = {
        f"u{tag}": {(a,): draw(out) for a in vals},
        f"b{tag}": {xs: draw(out) for xs in itertools.product(vals, repeat=2)},
    }
    return Matrix(sig, vals, tables, sorted(d), name=tag)
