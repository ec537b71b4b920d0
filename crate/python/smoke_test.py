"""Smoke test for the molr_py extension module.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import random

import molr_py as molr


def main():
    g4 = molr.galois_mols(4)
    assert (g4.n, g4.k, g4.t) == (4, 4, 3)
    rec = molr.canonical_form(g4)
    assert rec.aut_order == 288, rec
    assert rec.flags == "HTsHsT"

    rng = random.Random(1)

    def perm(n):
        p = list(range(n))
        rng.shuffle(p)
        return p

    image = g4.apply_isotopism(perm(3), perm(4), perm(4), [perm(4) for _ in range(3)])
    assert molr.canonical_key(image) == rec.key
    assert image.conjugate_swap(1).conjugate_swap(1) == image

    levels = dict(molr.enumerate(5, 2))
    assert [len(levels[k]) for k in range(2, 6)] == [5, 14, 2, 2]
    assert sorted(r.aut_order for r in levels[5]) == [100, 200]

    text = molr.write_records([r.representative for r in levels[3]])
    back = [m for m, _, _ in molr.parse_records(text)]
    assert back == [r.representative for r in levels[3]]

    report = molr.check_plane(molr.galois_mols(5), complete=True)
    assert report["class"] == "projective" and report["points"] == 31
    assert molr.partial_net(g4.truncate_rows(2)).startswith("# points 8")

    try:
        molr.MolrSet([[[0, 1, 2], [0, 2, 1]]])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid rectangle accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
