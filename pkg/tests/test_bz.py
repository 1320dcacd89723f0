import itertools

import numpy as np
import pytest

from hon_forge.bz import (
    CodeChain,
    combine,
    min_hamming_distance,
    pad_depth,
    read_chain,
    rs_chain,
    rule_xv,
    write_chain,
)
from hon_forge.gf import make_field, matmul, rank
from hon_forge.nets import (
    DigitalNet,
    LinearSpace,
    dual_space,
    interlace,
    min_mu_distance_exhaustive,
    pascal_net,
    strict_t,
    verify_net_definition,
)
from samples import toy_instances

F2 = make_field(2)


class TestChains:
    def test_rs_q5(self):
        chain = rs_chain(5, 5, (0, 2, 4))
        assert chain.e == (2, 2)
        assert chain.deltas == (4, 2)
        assert chain.verify_distances()

    def test_rs_q2_repetition(self):
        chain = rs_chain(2, 2, (0, 1, 2))
        assert chain.deltas == (2, 1)
        assert chain.basis[:1].tolist() == [[1, 1]]

    def test_full_space_single_level(self):
        assert rs_chain(3, 3, (0, 3)).deltas == (1,)

    @pytest.mark.parametrize("q,s_prime,k", [(4, 4, 2), (7, 5, 3), (8, 8, 4), (9, 6, 2)])
    def test_rs_is_mds(self, q, s_prime, k):
        assert rs_chain(q, s_prime, (0, k)).deltas == (s_prime + 1 - k,)

    def test_errors(self):
        with pytest.raises(ValueError):
            rs_chain(3, 4, (0, 2))
        with pytest.raises(ValueError):
            rs_chain(5, 5, (0, 3, 2))
        with pytest.raises(ValueError):
            rs_chain(5, 5, (1, 2))

    def test_triangular_after_reordering(self):
        chain = CodeChain(F2, 3, (0, 1, 3), [[0, 1, 1], [1, 1, 0], [0, 0, 1]])
        k = chain.dims[-1]
        assert not np.tril(chain.basis[:, :k], -1).any()
        assert np.all(np.diag(chain.basis[:, :k]) == 1)
        assert chain.position_order[0] == 1
        # nesting survives: the first vector still spans N'_1
        assert rank(F2, np.vstack([chain.basis[:1], [[1, 0, 1]]])) == 1

    def test_dependent_basis(self):
        with pytest.raises(ValueError):
            CodeChain(F2, 2, (0, 2), [[1, 1], [1, 1]])

    def test_file_round_trip(self, tmp_path):
        chain = CodeChain(F2, 3, (0, 1, 3), [[0, 1, 1], [1, 1, 0], [0, 0, 1]])
        path = tmp_path / "c.chain"
        write_chain(chain, path)
        back = read_chain(path)
        assert np.array_equal(back.basis, chain.basis)
        assert back.position_order == chain.position_order
        assert write_chain(rs_chain(2, 2, (0, 1, 2))) == "2 2 2\n0 1 2\n1 1\n0 1\n"

    def test_hamming_exhaustive(self):
        assert min_hamming_distance(F2, [[1, 1, 1]]) == 3
        assert min_hamming_distance(F2, np.zeros((0, 3))) is None


class TestPadDepth:
    def parity_dual(self):
        return dual_space(DigitalNet.from_matrices(F2, [[[1]], [[1]]], t=0))

    def test_identity(self):
        D = self.parity_dual()
        assert pad_depth(D, 1) is D

    def test_parity_to_depth_two(self):
        padded = pad_depth(self.parity_dual(), 2)
        assert padded.dim == 3
        assert min_mu_distance_exhaustive(padded, 1) == 2

    def test_shrinking(self):
        with pytest.raises(ValueError):
            pad_depth(self.parity_dual(), 0)

    def test_keeps_strict_distance(self):
        for _, nets, alpha, duals in toy_instances(11, 40):
            for net, padded in zip(nets, duals):
                if padded.dim:
                    bound = net.params.floor_beta_n - net.params.t + 1
                    assert min_mu_distance_exhaustive(padded, alpha) >= bound


class TestCombine:
    def test_all_trivial(self):
        chain = rs_chain(2, 2, (0, 1, 2))
        outers = [LinearSpace(F2, 1, 2, np.zeros((0, 2))), LinearSpace(F2, 1, 2, np.zeros((0, 2)))]
        assert combine(chain, outers).dim == 0

    def test_toy_q2(self):
        chain = rs_chain(2, 2, (0, 1, 2))
        net1 = DigitalNet.from_matrices(F2, [[[1, 0], [0, 1], [0, 0]]], t=None)
        net2 = DigitalNet.from_matrices(F2, [[[1], [1], [0]]], t=None)
        duals = [pad_depth(dual_space(net), 3) for net in (net1, net2)]
        N = combine(chain, duals)
        assert N.dim == duals[0].dim + duals[1].dim
        delta = min_mu_distance_exhaustive(N, 1)
        bounds = [min_mu_distance_exhaustive(d, 1) * dp for d, dp in zip(duals, chain.deltas)]
        assert delta >= min(bounds)

    def test_distinct_sums(self):
        """Every choice of outer vectors gives a different combined vector."""
        for chain, _, _, duals in toy_instances(5, 15):
            N = combine(chain, duals)
            images = [[_phi(chain, duals, u, v) for v in D.elements()] for u, D in enumerate(duals)]
            sums = {tuple(np.bitwise_xor.reduce(np.array(combo), axis=0)) for combo in itertools.product(*images)}
            assert len(sums) == np.prod([D.size for D in duals]) == 2**N.dim

    def test_depth_mismatch(self):
        chain = rs_chain(2, 2, (0, 1, 2))
        with pytest.raises(ValueError):
            combine(chain, [LinearSpace(F2, 1, 1, [[1]]), LinearSpace(F2, 1, 2, [[1, 0]])])

    def test_level_count(self):
        with pytest.raises(ValueError):
            combine(rs_chain(2, 2, (0, 1, 2)), [LinearSpace(F2, 1, 1, [[1]])])

    def test_wrong_field(self):
        chain = CodeChain(F2, 2, (0, 2), [[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            combine(chain, [LinearSpace(F2, 1, 1, [[1]])])


def _phi(chain, duals, u, vec):
    """Image of ``vec`` at level u with every other level zero."""
    spaces = []
    for j, D in enumerate(duals):
        basis = np.atleast_2d(vec) if j == u and np.any(vec) else np.zeros((0, D.s * D.n), dtype=np.int64)
        spaces.append(LinearSpace(D.field, D.s, D.n, basis))
    N = combine(chain, spaces)
    return N.basis[0] if N.dim else np.zeros(N.s * N.n, dtype=np.int64)


class TestRuleXV:
    def test_toy_bound_and_dimension(self):
        for chain, nets, alpha, duals in toy_instances(3, 30):
            out = rule_xv(chain, nets, alpha=alpha)
            N = combine(chain, duals)
            expected = sum(e * net.m for e, net in zip(chain.e, nets))
            expected += (chain.s_prime - chain.dims[-1]) * nets[-1].s * out.n
            assert out.m == expected
            assert rank(out.field, out.stacked()) == out.m
            if N.dim:
                assert not matmul(out.field, out.stacked(), N.basis.T).any()
            assert strict_t(out) <= out.params.t
            assert verify_net_definition(out, out.params.t)

    def test_trivial_chain_preserves_net(self):
        chain = CodeChain(F2, 1, (0, 1), [[1]])
        rng = np.random.default_rng(8)
        checked = 0
        while checked < 10:
            mats = rng.integers(0, 2, (2, 2, 3))
            if rank(F2, mats.transpose(2, 0, 1).reshape(3, -1)) < 3:
                continue
            checked += 1
            net = DigitalNet.from_matrices(F2, mats, alpha=1)
            net = DigitalNet.from_matrices(F2, mats, t=strict_t(net), alpha=1)
            out = rule_xv(chain, [net])
            assert (out.s, out.n, out.m) == (net.s, net.n, net.m)
            assert strict_t(out) == strict_t(net) == out.params.t

    def test_q5_reed_solomon_instance(self):
        chain = rs_chain(5, 5, (0, 2, 4))
        n1 = interlace(pascal_net(25, 2, 2), 2)
        n2 = interlace(pascal_net(25, 6, 4), 2)
        kept = rule_xv(chain, [n1, n2])
        assert (kept.s, kept.n, kept.m, kept.params.t) == (8, 32, 80, 13)
        literal = rule_xv(chain, [n1, n2], unserved="delete")
        assert (literal.s, literal.n, literal.m, literal.params.t) == (6, 32, 16, 13)
        assert literal.params.strength == 19

    def test_deleting_unserved_positions_breaks_the_bound(self):
        chain = CodeChain(F2, 2, (0, 1), [[1, 1]])
        net = DigitalNet.from_matrices(F2, [[[1, 0], [0, 1], [0, 0], [0, 0]]], t=2, alpha=2)
        literal = rule_xv(chain, [net], unserved="delete")
        assert literal.params.t == 0 and strict_t(literal) == 2
        kept = rule_xv(chain, [net])
        assert strict_t(kept) <= kept.params.t

    def test_dependent_rows_rejected(self):
        chain = CodeChain(F2, 1, (0, 1), [[1]])
        net = DigitalNet.from_matrices(F2, [[[1, 1]], [[0, 0]]], alpha=1)
        with pytest.raises(ValueError, match="dependent"):
            rule_xv(chain, [net])

    def test_field_mismatch(self):
        chain = rs_chain(5, 5, (0, 2, 4))
        with pytest.raises(ValueError):
            rule_xv(chain, [pascal_net(5, 2, 2), pascal_net(25, 2, 2)])
