"""Smoke test for the mshopf extension module.

Run from the repo root after building:

    cargo build --release -p mshopf-py
    cp target/release/libmshopf.so python/mshopf.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import mshopf  # noqa: E402

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def main():
    bubble = mshopf.Graph.fixture("bubble")
    assert (bubble.vertex_count, bubble.edge_count, bubble.leg_count) == (2, 2, 4)
    assert bubble.sigma() == mshopf.oracle_sigma(bubble) == 2
    assert bubble.labelings() == mshopf.oracle_labelings(bubble) == 3

    with open(os.path.join(ROOT, "graphs", "chain.graph")) as f:
        (chain,) = mshopf.Graph.parse(f.read())
    assert sorted(chain.scales) == [1, 1, 2, 2]
    assert chain == mshopf.Graph.parse(chain.to_text())[0]

    h = mshopf.HopfAlgebra()
    assert len(h.coproduct(bubble)) == 2
    assert len(h.coproduct(chain)) == 3
    assert len(mshopf.HopfAlgebra(all_divergent=True).coproduct(chain)) == 4
    assert sorted(h.antipode(chain)) == sorted(h.antipode(chain, method="forests"))
    assert all(h.check(chain).values())
    assert len(h.forests(chain)) == 2

    tree = chain.gn_tree()
    assert tree["depth"] == 2
    assert chain.gn_tree(pad_to=4)["depth"] == 4
    assert chain.gn_dot().startswith("digraph gn")

    sunset = mshopf.Graph.fixture("sunset")
    ck = sunset.pi_ck(2)
    assert sorted((p["coefficient"] for p in ck["patterns"]), reverse=True) == [6, 3, 3, 1]
    assert ck["total"] == "27"

    r = mshopf.Renormalizer("symbols", "constant")
    c = r.counterterm(chain)
    assert c == r.counterterm(chain, "antipode") == r.counterterm(chain, "forests")

    lem = mshopf.lemma(bubble, bubble)
    assert (lem["lhs"], lem["rhs"], lem["holds"]) == ("9/2", "9/2", True)

    assert mshopf.effective_expansion(rho=1, order=2)["holds"]
    v = mshopf.run_verify("hopf", max_loops=2, rho=2)
    assert v["passed"], v

    try:
        mshopf.Graph.parse("not a graph")
    except mshopf.MshopfError:
        pass
    else:
        raise AssertionError("parse error not raised")

    print("smoke test passed")


if __name__ == "__main__":
    main()
