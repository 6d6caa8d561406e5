from itertools import combinations

import pytest

from crystal.canon import decode
from crystal.graphs import euler_characteristic, is_bipartite, s3_graph
from crystal.invariants import (
    AbelianGroup,
    Presentation,
    abelianize,
    chain_complex,
    format_presentation,
    homology,
    pi1_presentation,
    smith_invariant_factors,
)

from conftest import random_coloured_graph


class TestSmithNormalForm:
    def test_known_matrix(self):
        assert smith_invariant_factors([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]) == [2, 2, 156]

    def test_divisibility_chain(self, rng):
        for _ in range(200):
            rows = [
                [rng.randrange(-9, 10) for _ in range(rng.randrange(1, 6))]
                for _ in range(rng.randrange(1, 6))
            ]
            width = max(len(r) for r in rows)
            rows = [r + [0] * (width - len(r)) for r in rows]
            facs = smith_invariant_factors(rows)
            for a, b in zip(facs, facs[1:]):
                assert b % a == 0

    def test_rank_matches_fractions_rank(self, rng):
        from fractions import Fraction

        for _ in range(100):
            rows = [[rng.randrange(-5, 6) for _ in range(4)] for _ in range(4)]
            facs = smith_invariant_factors(rows)
            mat = [[Fraction(x) for x in row] for row in rows]
            rank = 0
            cols = 4
            r = 0
            for c in range(cols):
                piv = next((i for i in range(r, 4) if mat[i][c]), None)
                if piv is None:
                    continue
                mat[r], mat[piv] = mat[piv], mat[r]
                for i in range(4):
                    if i != r and mat[i][c]:
                        f = mat[i][c] / mat[r][c]
                        mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
                r += 1
            rank = r
            assert len(facs) == rank


class TestChainComplex:
    def test_s3_cell_counts(self):
        cc = chain_complex(s3_graph())
        assert [len(c) for c in cc.cells] == [4, 6, 4, 2]

    def test_boundary_squares_to_zero_randomly(self, rng):
        for _ in range(1000):
            g = random_coloured_graph(3, rng.choice([4, 6, 8]), rng, connected=False)
            chain_complex(g)  # raises on a nonzero composition

    def test_cell_counts_alternate_to_euler(self, catalogues):
        for tp in (14, 16, 18):
            for c in catalogues[tp].non_bipartite_codes:
                g = decode(c)
                cc = chain_complex(g)
                sizes = [len(x) for x in cc.cells]
                assert sizes[0] - sizes[1] + sizes[2] - sizes[3] == 0
                assert euler_characteristic(g) == 0


class TestHomology:
    def test_s3(self):
        assert [str(h) for h in homology(s3_graph())] == ["Z", "0", "0", "Z"]

    def test_census_identifications(self, m14, m16):
        assert homology(m14)[1] == AbelianGroup(1, ())
        assert homology(m16)[1] == AbelianGroup(1, (2,))

    def test_h0_and_h3(self, catalogues):
        for tp in (14, 16, 18, 20):
            for c in catalogues[tp].non_bipartite_codes:
                g = decode(c)
                h = homology(g)
                assert h[0] == AbelianGroup(1, ())
                assert h[3] == AbelianGroup(0, ())  # non-orientable
        for c in catalogues[8].bipartite_codes:
            h = homology(decode(c))
            assert h[3] == AbelianGroup(1, ())


class TestPresentation:
    def test_s3_trivial_group(self):
        for pair in combinations(range(4), 2):
            p = pi1_presentation(s3_graph(), pair)
            assert p.generators == 0
            assert abelianize(p).is_trivial

    def test_cross_validation_small_catalogues(self, catalogues):
        for tp in (14, 16, 18):
            for c in catalogues[tp].non_bipartite_codes + catalogues[tp].bipartite_codes:
                g = decode(c)
                h1 = homology(g)[1]
                for pair in combinations(range(4), 2):
                    assert abelianize(pi1_presentation(g, pair)) == h1

    def test_generator_and_relator_counts(self, m14):
        from crystal.graphs import count_bicoloured_cycles

        for i, j in combinations(range(4), 2):
            h, k = [c for c in range(4) if c not in (i, j)]
            p = pi1_presentation(m14, (i, j))
            assert p.generators == count_bicoloured_cycles(m14, i, j) - 1
            assert len(p.relators) == count_bicoloured_cycles(m14, h, k) - 1

    def test_paper_presentation_torus_bundle_one(self):
        p = Presentation(
            3,
            (
                (-1, 3, 1, -3),
                (2, 3, -2, 3, -1, -1),
                (2, -1, -2, 1, 1, 1, -3),
            ),
        )
        assert abelianize(p) == AbelianGroup(1, (2,))

    def test_paper_presentation_torus_bundle_two(self):
        p = Presentation(
            3,
            (
                (-2, 3, 2, -3),
                (1, 3, -1, 2, 2, 2, -3, -3),
                (1, -2, -1, 2, -3),
            ),
        )
        assert abelianize(p) == AbelianGroup(1, (3,))

    def test_simple_abelianizations(self):
        assert abelianize(Presentation(1, ((1, 1),))) == AbelianGroup(0, (2,))
        assert abelianize(Presentation(2, ())) == AbelianGroup(2, ())

    def test_relator_validation(self):
        with pytest.raises(ValueError, match="out of range"):
            Presentation(1, ((2,),))

    def test_formatting(self):
        p = Presentation(3, ((-1, 3, 2), ()))
        assert format_presentation(p) == "< a,b,c | Acb, 1 >"

    def test_group_printing(self):
        assert str(AbelianGroup(0, ())) == "0"
        assert str(AbelianGroup(1, ())) == "Z"
        assert str(AbelianGroup(2, (2, 8))) == "Z^2+Z2+Z8"
