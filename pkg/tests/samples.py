"""Small random inputs shared by the test modules."""

import numpy as np

from hon_forge.bz import CodeChain, pad_depth
from hon_forge.gf import field_of_order, make_field, rank
from hon_forge.nets import DigitalNet, dual_space, strict_t

F2 = make_field(2)


def minimal_t(check, upper):
    return min(t for t in range(upper + 1) if check(t))


def random_net(rng, q, alpha, max_ns=14, max_dual=12):
    while True:
        s = int(rng.integers(1, 4))
        n = int(rng.integers(1, 8))
        if n * s > max_ns:
            continue
        m = int(rng.integers(max(1, -(-n // alpha)), n * s + 1))
        if n * s - m > max_dual:
            continue
        mats = rng.integers(0, q, (s, n, m))
        return DigitalNet.from_matrices(field_of_order(q), mats, alpha=alpha, beta=1)


def random_chain(rng, max_len=3, full=False):
    s_prime = int(rng.integers(1, max_len + 1))
    k = s_prime if full else int(rng.integers(1, s_prime + 1))
    r = 2 if k >= 2 and rng.random() < 0.7 else 1
    inner = sorted(rng.choice(np.arange(1, k), size=r - 1, replace=False).tolist()) if r > 1 else []
    dims = (0, *inner, k)
    while True:
        basis = rng.integers(0, 2, (k, s_prime))
        if rank(F2, basis) == k:
            return CodeChain(F2, s_prime, dims, basis)


def random_nets(rng, chain, alpha):
    widths = sorted(int(rng.integers(1, 3)) for _ in range(chain.r))
    nets = []
    for e_u, s_u in zip(chain.e, widths):
        F = make_field(2, e_u)
        n_u = int(rng.integers(1, 3))
        m_u = int(rng.integers(-(-n_u // alpha), s_u * n_u + 1))
        while True:
            mats = rng.integers(0, F.q, (s_u, n_u, m_u))
            if rank(F, mats.transpose(2, 0, 1).reshape(m_u, -1)) == m_u:
                break
        net = DigitalNet.from_matrices(F, mats, alpha=alpha)
        nets.append(DigitalNet.from_matrices(F, mats, t=strict_t(net), alpha=alpha))
    return nets


def toy_instances(seed, count, max_bits=12, full_chains=False):
    """Yield (chain, nets, alpha, padded duals) whose combined ambient has <= max_bits F_2 symbols."""
    rng = np.random.default_rng(seed)
    made = 0
    while made < count:
        chain = random_chain(rng, full=full_chains)
        alpha = int(rng.integers(1, 3))
        nets = random_nets(rng, chain, alpha)
        n = sum(e * net.n for e, net in zip(chain.e, nets))
        width = sum(e * net.s for e, net in zip(chain.e, nets))
        width += (chain.s_prime - chain.dims[-1]) * nets[-1].s
        if width * n > max_bits:
            continue
        duals = [pad_depth(dual_space(net), n) for net in nets]
        made += 1
        yield chain, nets, alpha, duals
