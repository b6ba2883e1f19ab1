"""Smoke test for the pyarbcolor extension.

Build and install it first:

    pip install maturin
    maturin develop -m crates/py/Cargo.toml
    python python/smoke_test.py
"""

import pyarbcolor as ac


def legal(g, c):
    return all(c.color(u) != c.color(v) for u, v in g.edges())


def main():
    g = ac.Graph.generate("forest_union", 1000, seed=3, a=4)
    assert (g.n, g.arboricity_bound) == (1000, 4)
    assert g.degeneracy() <= 2 * 4

    levels, t = ac.h_partition(g)
    assert len(levels) == g.n and t.rounds == max(levels) - 1

    c, t = ac.be08_coloring(g)
    assert legal(g, c) and c.palette_size <= ac.degree_bound(4) + 1
    print("be08", c, t)

    sigma, _ = ac.complete_orientation(g)
    assert sigma.is_complete() and sigma.is_acyclic()
    assert sigma.max_out_degree() <= ac.degree_bound(4)
    c, _ = ac.color_from_orientation(sigma)
    assert c.palette_size == sigma.length() + 1 and legal(g, c)

    partial, _ = ac.partial_orientation(g, 2)
    assert partial.is_acyclic() and partial.max_deficit() <= 4 // 2
    report = ac.check_orientation(g, partial, out_degree=ac.degree_bound(4), deficit=2)
    assert report["failures"] == [], report

    c, bound, witness, _ = ac.arbdefective_coloring(g, 2, 2)
    report = ac.check(g, c, legal=False, arbdefect=bound, witness=witness)
    assert report["failures"] == [], report

    c, _ = ac.defective_coloring(g, 3)
    assert ac.check(g, c, legal=False, defect=g.max_degree() // 3)["failures"] == []

    for mode in [
        {"mode": "eta", "eta": 0.5},
        {"mode": "legal_o_a", "mu": 0.5},
        {"mode": "tradeoff_f", "f": {"kind": "log_log_squared"}},
    ]:
        c, t, log = ac.coloring_driver(g, **mode)
        assert legal(g, c), mode
        print(mode["mode"], c, t)

    c, _ = ac.legal_coloring(g, 4)
    assert ac.check(g, c)["legal"]

    members, _ = ac.mis(g, c)
    inside = set(members)
    assert all(not (u in inside and v in inside) for u, v in g.edges())
    assert all(v in inside or any(w in inside for w in g.neighbors(v)) for v in range(1, g.n + 1))

    bad = ac.Coloring([1] * g.n)
    assert not ac.check(g, bad)["legal"]

    try:
        ac.h_partition(ac.Graph.generate("clique", 12), a=1)
    except RuntimeError as e:
        print("expected:", e)
    else:
        raise AssertionError("underestimated arboricity was accepted")

    print("ok")


if __name__ == "__main__":
    main()
