"""Block partitions of the dimension and the index splittings they induce.

A JordanStructure records the sizes mu_1 >= ... >= mu_rho of the nilpotent
Jordan blocks of the linear part together with the block eigenvalues.  From
it we derive, stage by stage, the index splittings P' / P'' that say which
coordinates stay affine and which get multiplied through each blow-up chart,
plus the generator sets of the invariant flag of projective subspaces.

Indices are 1-based throughout to keep the combinatorics readable next to
the chart formulas; sets are kept as sorted lists.
"""

from dataclasses import dataclass

from .errors import PreconditionViolated
from .scalars import GaussianRational, parse_scalar


@dataclass(frozen=True)
class JordanStructure:
    n: int
    mu: tuple
    lam: tuple  # block eigenvalues, nonzero
    nu: tuple   # block offsets, nu_1 = 0
    ell: int    # number of blow-ups in the full sequence

    @property
    def rho(self):
        return len(self.mu)

    def block_of(self, j):
        """1-based block index of coordinate j."""
        for l in range(self.rho - 1, -1, -1):
            if j > self.nu[l]:
                return l + 1
        raise PreconditionViolated("coordinate index %d out of range" % j)

    def block_range(self, l):
        """Sorted coordinate indices of block l (1-based)."""
        return list(range(self.nu[l - 1] + 1, self.nu[l - 1] + self.mu[l - 1] + 1))

    def has_equal_top_blocks(self):
        return self.rho >= 2 and self.mu[1] == self.mu[0]

    def third_block_ties_top(self):
        """True when a block beyond the second matches mu_1; the stage-mu_1
        splitting formula only special-cases block 2, so these structures are
        flagged in reports."""
        return self.rho >= 3 and self.mu[2] == self.mu[0]


def build_structure(mu, lam):
    mu = tuple(int(m) for m in mu)
    if len(mu) == 0:
        raise PreconditionViolated("empty block list")
    if any(m < 1 for m in mu):
        raise PreconditionViolated("block sizes must be positive")
    if list(mu) != sorted(mu, reverse=True):
        raise PreconditionViolated("block sizes must be non-increasing")
    if mu[0] < 2:
        raise PreconditionViolated(
            "mu_1 = 1 means the linear part is diagonalizable; nothing to blow up"
        )
    lam_parsed = tuple(
        x if isinstance(x, GaussianRational) else parse_scalar(x) for x in lam
    )
    if len(lam_parsed) != len(mu):
        raise PreconditionViolated("need one eigenvalue per block")
    if any(not x for x in lam_parsed):
        raise PreconditionViolated("zero eigenvalue: linear part not invertible")
    n = sum(mu)
    if n < 2:
        raise PreconditionViolated("total dimension must be at least 2")
    nu = [0]
    for m in mu[:-1]:
        nu.append(nu[-1] + m)
    ell = mu[0] + 1 if (len(mu) >= 2 and mu[1] == mu[0]) else mu[0]
    return JordanStructure(n=n, mu=mu, lam=lam_parsed, nu=tuple(nu), ell=ell)


@dataclass(frozen=True)
class Splitting:
    k: int
    primed: tuple          # P'_k, sorted
    double_primed: tuple   # complement of primed in 1..n
    per_block: tuple       # tuple of tuples P'_{kl}


def splitting(S, k):
    """The stage-k index splitting, 0 <= k <= ell."""
    if not 0 <= k <= S.ell:
        raise PreconditionViolated("stage %d out of range 0..%d" % (k, S.ell))
    mu1 = S.mu[0]
    per_block = []
    if k == 0:
        per_block = [tuple() for _ in S.mu]
    elif S.has_equal_top_blocks() and k == mu1 + 1:
        # top stage with tied leading blocks: single distinguished set on
        # block 1 extended by the last index of block 2
        special = tuple(list(range(1, mu1 + 1)) + [S.nu[1] + S.mu[1]])
        per_block = [special] + [tuple() for _ in S.mu[1:]]
    elif k == mu1:
        for l, m in enumerate(S.mu):
            base = S.nu[l]
            if S.has_equal_top_blocks() and l == 1:
                per_block.append(tuple(range(base + 1, base + m)))  # drop last
            else:
                per_block.append(tuple(range(base + 1, base + min(k, m) + 1)))
    else:
        for l, m in enumerate(S.mu):
            base = S.nu[l]
            per_block.append(tuple(range(base + 1, base + min(k, m) + 1)))
    primed = sorted(i for blk in per_block for i in blk)
    primed_set = set(primed)
    double_primed = tuple(i for i in range(1, S.n + 1) if i not in primed_set)
    return Splitting(
        k=k,
        primed=tuple(primed),
        double_primed=double_primed,
        per_block=tuple(per_block),
    )


def flag_generators(S, k):
    """Indices h such that the classes [e_h] span the k-th flag subspace."""
    if not 1 <= k <= S.ell - 1:
        raise PreconditionViolated(
            "flag stage %d out of range 1..%d" % (k, S.ell - 1)
        )
    return list(splitting(S, k).primed)
