"""Derandomized subgraph selection.

The stack, bottom to top: a small-bias coefficient generator over GF(2^l)
(powering construction) feeding bit-linear hash functions; perfect hash
families built from them (or from audited random search, or the identity
map when the subset size reaches the domain); fault-tolerant universal set
families whose members are "everything except b hash buckets"; and a
deterministic min-cut driver that walks those members instead of sampling.

Construction parameters are heuristic where the underlying guarantees have
unspecified constants; exhaustive desk-scale audits are the contract, and
builders fall back from the explicit construction to verified search when
an audit fails.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from hashlib import blake2b
from typing import Callable, Iterable, Iterator, Sequence

from . import rng
from .engine import SimConfig
from .graphs import Multigraph
from .mincut import (
    DETOUR_FACTOR,
    CutResult,
    StCertificate,
    _report_and_verify,
    local_st_cut,
    verify_cut,
)
from .primitives import Selector, collect_root_paths, rename_edges, truncated_bfs

log = logging.getLogger(__name__)

MAX_FIELD_BITS = 28
DEFAULT_ITERATION_BUDGET = 50_000_000


# ------------------------------------------------------------ GF(2) helpers


def _gf2_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _gf2_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _gf2_mulmod(a: int, b: int, f: int) -> int:
    return _gf2_mod(_gf2_mul(a, b), f)


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_mod(a, b)
    return a


def _x_pow_pow2(k: int, f: int) -> int:
    """x^(2^k) mod f by repeated squaring."""
    cur = 2  # the polynomial x
    for _ in range(k):
        cur = _gf2_mulmod(cur, cur, f)
    return cur


def _prime_factors(d: int) -> list[int]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            out.append(p)
            while d % p == 0:
                d //= p
        p += 1
    if d > 1:
        out.append(d)
    return out


def _is_irreducible(f: int) -> bool:
    d = f.bit_length() - 1
    if d < 1 or not f & 1:
        return False
    if _x_pow_pow2(d, f) != 2:
        return False
    for p in _prime_factors(d):
        if _gf2_gcd(_x_pow_pow2(d // p, f) ^ 2, f) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_poly(degree: int) -> int:
    """Smallest-by-integer irreducible polynomial of the given degree."""
    if degree == 1:
        return 0b11
    for candidate in range(1 << degree | 1, 1 << (degree + 1), 2):
        if _is_irreducible(candidate):
            return candidate
    raise RuntimeError(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


# ------------------------------------------------- bit-linear hash families


class BitLinearFamily:
    """Enumerable family of maps {0,1}^alpha -> {0,1}^beta.

    Each member is a binary matrix plus offset whose coefficient string
    comes from the powering small-bias generator: member index encodes a
    field pair (x, y) and string bit i is the inner-product parity of x^i
    and y.  Family size is 4^(field bits).
    """

    def __init__(self, alpha: int, beta: int, eps: float):
        if alpha < 1:
            raise ValueError("alpha must be >= 1")
        if beta < 0:
            raise ValueError("beta must be >= 0")
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must be in (0,1)")
        self.alpha = alpha
        self.beta = beta
        self.eps = eps
        if beta == 0:
            self.field_bits = 0
            self.size = 1
            return
        self.field_bits = math.ceil(math.log2(alpha * beta / eps)) + 2
        if self.field_bits > MAX_FIELD_BITS:
            raise ValueError(
                f"field size 2^{self.field_bits} too large; shrink alpha*beta/eps"
            )
        self.modulus = irreducible_poly(self.field_bits)
        self.size = 1 << (2 * self.field_bits)

    @property
    def string_length(self) -> int:
        return self.beta * (self.alpha + 1)

    def coefficient_string(self, index: int) -> int:
        """The member's matrix+offset bits packed into one int."""
        if self.beta == 0:
            return 0
        if not 0 <= index < self.size:
            raise IndexError(index)
        x = index >> self.field_bits
        y = index & ((1 << self.field_bits) - 1)
        bits = 0
        power = 1  # x^0
        for i in range(self.string_length):
            if (power & y).bit_count() & 1:
                bits |= 1 << i
            power = _gf2_mulmod(power, x, self.modulus)
        return bits

    def _rows(self, coeffs: int) -> tuple[list[int], int]:
        mask = (1 << self.alpha) - 1
        rows = [(coeffs >> (j * self.alpha)) & mask for j in range(self.beta)]
        offset = (coeffs >> (self.beta * self.alpha)) & ((1 << self.beta) - 1)
        return rows, offset

    def evaluate(self, index: int, value: int) -> int:
        if self.beta == 0:
            return 0
        rows, offset = self._rows(self.coefficient_string(index))
        out = 0
        for j, row in enumerate(rows):
            if (row & value).bit_count() & 1:
                out |= 1 << j
        return out ^ offset

    def value_table(self, index: int, domain: int | None = None) -> list[int]:
        """Outputs for all inputs 0..domain-1 (default: the full cube)."""
        domain = (1 << self.alpha) if domain is None else domain
        if self.beta == 0:
            return [0] * domain
        rows, offset = self._rows(self.coefficient_string(index))
        table = []
        for v in range(domain):
            out = 0
            for j, row in enumerate(rows):
                if (row & v).bit_count() & 1:
                    out |= 1 << j
            table.append(out ^ offset)
        return table

    def distinct_function_counts(self) -> dict[int, int]:
        """Multiplicity of each realized coefficient string over the family.

        There are at most 2^(beta*(alpha+1)) distinct functions regardless
        of family size, which makes exhaustive pair statistics cheap.
        """
        counts: dict[int, int] = {}
        for idx in range(self.size):
            s = self.coefficient_string(idx)
            counts[s] = counts.get(s, 0) + 1
        return counts

    def pair_statistics(self) -> float:
        """Max over (x1 != x2, y1, y2) of Pr[h(x1)=y1 and h(x2)=y2].

        Exhaustive over the whole family via distinct-function weighting.
        """
        if self.beta == 0:
            return 1.0
        counts = self.distinct_function_counts()
        domain = 1 << self.alpha
        out_range = 1 << self.beta
        joint: dict[tuple[int, int, int, int], int] = {}
        for coeffs, mult in counts.items():
            rows, offset = self._rows(coeffs)
            table = []
            for v in range(domain):
                out = 0
                for j, row in enumerate(rows):
                    if (row & v).bit_count() & 1:
                        out |= 1 << j
                table.append(out ^ offset)
            for x1 in range(domain):
                for x2 in range(x1 + 1, domain):
                    joint[(x1, x2, table[x1], table[x2])] = (
                        joint.get((x1, x2, table[x1], table[x2]), 0) + mult
                    )
        worst = max(joint.values())
        return worst / self.size


def build_bitlinear_family(alpha: int, beta: int, eps: float) -> BitLinearFamily:
    return BitLinearFamily(alpha, beta, eps)


# ----------------------------------------------------- perfect hash families


def perfect_family_budget(n: int, k: int, eps: float = 0.1) -> int:
    """Configured cardinality budget: poly in k and log n by construction."""
    alpha = max(1, (n - 1).bit_length())
    beta = max(1, math.ceil(math.log2(2 * k * k)))
    return max(1, math.ceil(64 * (alpha * beta / eps) ** 2))


class PerfectFamily:
    """Family of maps [1,n] -> [1,2k^2] with an injective member per k-subset.

    Backed by one of: the identity map (when k >= n every subset is the
    whole domain), the explicit bit-linear family reduced into the range,
    or an audited list of seeded random functions.
    """

    def __init__(
        self,
        n: int,
        k: int,
        kind: str,
        bitlinear: BitLinearFamily | None = None,
        tables: list[list[int]] | None = None,
        seed: int | None = None,
    ):
        self.n = n
        self.k = k
        self.range_size = 2 * k * k
        self.kind = kind
        self._bitlinear = bitlinear
        self._tables = tables
        self.seed = seed
        if kind == "identity":
            self.size = 1
        elif kind == "bitlinear":
            assert bitlinear is not None
            self.size = bitlinear.size
        else:
            assert tables is not None
            self.size = len(tables)

    def value(self, h: int, x: int) -> int:
        """Hash of x in [1,n] under member h; results in [1, 2k^2]."""
        if not 1 <= x <= self.n:
            raise ValueError(f"x={x} outside [1,{self.n}]")
        if self.kind == "identity":
            return x
        if self.kind == "bitlinear":
            return self._bitlinear.evaluate(h, x - 1) % self.range_size + 1
        return self._tables[h][x - 1]

    def value_table(self, h: int) -> list[int]:
        """Hashes of 1..n under member h (index 0 holds x=1)."""
        if self.kind == "identity":
            return list(range(1, self.n + 1))
        if self.kind == "bitlinear":
            raw = self._bitlinear.value_table(h, domain=self.n)
            return [v % self.range_size + 1 for v in raw]
        return list(self._tables[h])

    def injectivity_audit(
        self, max_subsets: int = 2_000_000
    ) -> tuple[bool, list[tuple[int, ...]]]:
        """Exhaustive check that every k-subset has an injective member.

        Covering scan: walk members, drop the subsets they inject, stop
        when none remain.  Members whose value table has fewer than k
        distinct values can inject nothing and are skipped outright.
        Returns (ok, uncovered subsets).
        """
        if self.k <= 1 or self.k >= self.n:
            return True, []
        total = math.comb(self.n, self.k)
        if total > max_subsets:
            raise ValueError(f"{total} subsets exceed the audit budget")
        uncovered = list(itertools.combinations(range(1, self.n + 1), self.k))
        for h in range(self.size):
            table = self.value_table(h)
            if len(set(table)) < self.k:
                continue
            still = []
            for subset in uncovered:
                seen = {table[x - 1] for x in subset}
                if len(seen) != self.k:
                    still.append(subset)
            uncovered = still
            if not uncovered:
                return True, []
        return False, uncovered


def _search_perfect_family(n: int, k: int, seed: int) -> PerfectFamily:
    """Grow a family of seeded random functions until the audit passes."""
    r = rng.make_rng((seed, "perfect-search", n, k))
    range_size = 2 * k * k
    tables: list[list[int]] = []
    batch = max(8, math.ceil(4 * math.log(max(2, math.comb(n, k)))))
    for _ in range(60):
        tables.extend(
            [r.randrange(1, range_size + 1) for _ in range(n)] for _ in range(batch)
        )
        family = PerfectFamily(n, k, "search", tables=tables, seed=seed)
        ok, _ = family.injectivity_audit()
        if ok:
            return family
    raise RuntimeError(f"no perfect family found for (n={n}, k={k})")  # pragma: no cover


def build_perfect_family(
    n: int, k: int, mode: str = "auto", seed: int = 0
) -> PerfectFamily:
    """(n,k)-perfect hash family into [1, 2k^2].

    Modes: ``explicit`` (bit-linear construction; audited where feasible),
    ``search`` (seeded random functions, audit-guaranteed), ``identity``
    (valid whenever k >= n), ``auto`` (explicit with fallback to search on
    audit failure).  The audit, not the construction, is the contract.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode == "identity" or (mode == "auto" and k >= n):
        if 2 * k * k < n:
            raise ValueError("identity family needs 2k^2 >= n")
        return PerfectFamily(n, k, "identity")
    if mode == "search":
        return _search_perfect_family(n, k, seed)
    if mode not in ("auto", "explicit"):
        raise ValueError(f"unknown mode {mode!r}")

    alpha = max(1, (n - 1).bit_length())
    beta = max(1, math.ceil(math.log2(2 * k * k)))
    family = PerfectFamily(
        n, k, "bitlinear", bitlinear=BitLinearFamily(alpha, beta, 0.1)
    )
    try:
        ok, _ = family.injectivity_audit()
    except ValueError:
        ok = False  # audit infeasible at this scale
    if ok:
        return family
    if mode == "explicit":
        raise RuntimeError(f"explicit family failed the audit for (n={n}, k={k})")
    log.warning(
        "explicit perfect family failed/skipped audit for (n=%d, k=%d); "
        "falling back to verified search",
        n,
        k,
    )
    return _search_perfect_family(n, k, seed)


# ------------------------------------------------------- FT universal sets


@dataclass(frozen=True)
class UniversalMember:
    """One set of the family: everything whose hash avoids the banned values.

    Membership is O(b) hash evaluations; the set is never materialized.
    """

    family: "UniversalFamily"
    h: int
    banned: tuple[int, ...]

    def __contains__(self, element: int) -> bool:
        return self.family.perfect.value(self.h, element) not in self.banned

    def materialize(self) -> frozenset[int]:
        return frozenset(e for e in range(1, self.family.n + 1) if e in self)


class UniversalFamily:
    """(n,a,b)-universal sets: for disjoint A (<=a), B (<=b) some member
    contains A and avoids B."""

    def __init__(self, n: int, a: int, b: int, perfect: PerfectFamily):
        self.n = n
        self.a = a
        self.b = b
        self.k = a + b
        self.perfect = perfect
        self.range_size = perfect.range_size

    @property
    def member_count(self) -> int:
        return self.perfect.size * self.range_size**self.b

    def member(self, index: int) -> UniversalMember:
        if not 0 <= index < self.member_count:
            raise IndexError(index)
        h, rest = divmod(index, self.range_size**self.b)
        banned = []
        for _ in range(self.b):
            rest, digit = divmod(rest, self.range_size)
            banned.append(digit + 1)
        return UniversalMember(self, h, tuple(banned))

    def find_member_for(
        self, contain: Sequence[int], avoid: Sequence[int], hints: list[int] | None = None
    ) -> UniversalMember | None:
        """A member containing ``contain`` and disjoint from ``avoid``.

        Scans hash members for one separating the two images; ``hints``
        keeps recently successful members at the front of the scan.
        """
        if len(avoid) > self.b or len(contain) > max(self.a, 0):
            return None
        order: Iterable[int] = range(self.perfect.size)
        if hints:
            order = itertools.chain(hints, range(self.perfect.size))
        seen: set[int] = set()
        for h in order:
            if h in seen:
                continue
            seen.add(h)
            imgs_avoid = {self.perfect.value(h, x) for x in avoid}
            imgs_contain = {self.perfect.value(h, x) for x in contain}
            if imgs_avoid & imgs_contain:
                continue
            banned = sorted(imgs_avoid)
            if not banned:
                pad = next(
                    v
                    for v in range(1, self.range_size + 1)
                    if v not in imgs_contain
                )
                banned = [pad]
            while len(banned) < self.b:
                banned.append(banned[0])
            if self.b == 0:
                banned = []
            member = UniversalMember(self, h, tuple(banned))
            if hints is not None:
                if h in hints:
                    hints.remove(h)
                hints.insert(0, h)
                del hints[64:]
            return member
        return None

    def grouped_members(self, domain: int) -> Iterator[tuple[frozenset[int], int, tuple]]:
        """Members grouped by their effective subset of [1, domain].

        Yields (subset, multiplicity, order_key).  Two members induce the
        same subset when they ban the same set of values that actually
        occur as hashes of [1, domain]; multiplicities come from counting
        banned tuples per occurring-value set.
        """
        if self.b == 0:
            full = frozenset(range(1, domain + 1))
            for h in range(self.perfect.size):
                yield full, 1, (h,)
            return
        for h in range(self.perfect.size):
            table = self.perfect.value_table(h)[:domain]
            image = sorted(set(table))
            dead = self.range_size - len(image)
            by_value: dict[int, list[int]] = {}
            for x, v in enumerate(table, start=1):
                by_value.setdefault(v, []).append(x)
            for size in range(0, self.b + 1):
                for combo in itertools.combinations(image, size):
                    count = 0
                    for j in range(size + 1):
                        for _sub in itertools.combinations(range(size), j):
                            count += (-1) ** (size - j) * (j + dead) ** self.b
                    if count <= 0:
                        continue
                    removed = set()
                    for v in combo:
                        removed.update(by_value[v])
                    subset = frozenset(range(1, domain + 1)) - removed
                    yield subset, count, (h, combo)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "range_size": self.range_size,
            "perfect_kind": self.perfect.kind,
            "perfect_size": self.perfect.size,
            "perfect_seed": self.perfect.seed,
            "member_count": self.member_count,
        }


def build_ft_universal(
    n: int, a: int, b: int, mode: str = "auto", seed: int = 0
) -> UniversalFamily:
    """(n,a,b)-universal family via a perfect family on k = a+b.

    ``a >= n`` is accepted (the perfect family degenerates to the identity
    map), which is the common regime for small graphs with large path
    budgets.
    """
    if b < 0:
        raise ValueError("b must be >= 0")
    if a <= b and a < n:
        raise ValueError("need b < a")
    perfect = build_perfect_family(n, a + b, mode=mode, seed=seed)
    return UniversalFamily(n, a, b, perfect)


@dataclass(frozen=True)
class UniversalAuditReport:
    checked: int
    violations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _disjoint_pairs(
    n: int, a: int, b: int
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    universe = range(1, n + 1)
    for size_a in range(0, min(a, n) + 1):
        for set_a in itertools.combinations(universe, size_a):
            rest = [x for x in universe if x not in set_a]
            for size_b in range(0, min(b, len(rest)) + 1):
                for set_b in itertools.combinations(rest, size_b):
                    yield set_a, set_b


def verify_universal(
    fam: UniversalFamily,
    mode: str = "exhaustive",
    trials: int = 10_000,
    seed: int = 0,
) -> UniversalAuditReport:
    """Audit the defining property over all (or sampled) disjoint pairs.

    Every satisfied pair is re-checked literally against the member found,
    not just against the existence argument.
    """
    hints: list[int] = []
    violations = []
    checked = 0

    def check(set_a, set_b) -> None:
        nonlocal checked
        checked += 1
        member = fam.find_member_for(set_a, set_b, hints)
        if member is None:
            violations.append((set_a, set_b))
            return
        assert all(x in member for x in set_a)
        assert not any(x in member for x in set_b)

    if mode == "exhaustive":
        for set_a, set_b in _disjoint_pairs(fam.n, fam.a, fam.b):
            check(set_a, set_b)
    elif mode == "sampled":
        r = rng.make_rng((seed, "verify-universal"))
        universe = list(range(1, fam.n + 1))
        for _ in range(trials):
            size_a = r.randint(0, min(fam.a, fam.n))
            set_a = tuple(sorted(r.sample(universe, size_a)))
            rest = [x for x in universe if x not in set_a]
            size_b = r.randint(0, min(fam.b, len(rest)))
            set_b = tuple(sorted(r.sample(rest, size_b)))
            check(set_a, set_b)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return UniversalAuditReport(checked, tuple(violations))


# -------------------------------------- probabilistic baseline (comparison)


@dataclass(frozen=True)
class SampledFamily:
    n: int
    a: int
    b: int
    subsets: tuple[frozenset[int], ...]
    seed_used: int

    @property
    def size(self) -> int:
        return len(self.subsets)


def randomized_family_search(
    n: int, a: int, b: int, seed: int = 0, max_attempts: int = 20
) -> SampledFamily:
    """Nonconstructive baseline: p=(1-1/a) samples, audited before acceptance.

    Exists as a size comparison point for the explicit construction.
    """
    if a < 2:
        raise ValueError("a must be >= 2 (p would be degenerate)")
    count = math.ceil(5 * math.e * a ** (b + 1) * math.log(max(2, n)))
    if count > 200_000:
        raise ValueError(f"{count} samples exceed the desk-scale budget")
    p = 1.0 - 1.0 / a
    for attempt in range(max_attempts):
        r = rng.make_rng((seed, attempt, "family-search"))
        subsets = tuple(
            frozenset(x for x in range(1, n + 1) if r.random() < p)
            for _ in range(count)
        )
        ok = all(
            any(set(set_a) <= s and not (set(set_b) & s) for s in subsets)
            for set_a, set_b in _disjoint_pairs(n, a, b)
        )
        if ok:
            return SampledFamily(n, a, b, subsets, seed + attempt)
        log.warning("family sample failed the audit; resampling (attempt %d)", attempt)
    raise RuntimeError("no valid sampled family found")


# ---------------------------------------------------- deterministic min cut


def deterministic_min_cut(
    g: Multigraph,
    lam: int,
    config: SimConfig | None = None,
    iteration_budget: int = DEFAULT_ITERATION_BUDGET,
    family_mode: str = "compact",
) -> CutResult:
    """Seed-free min cut: universal-set members replace random subgraphs.

    Edges are renamed to [1,m] first; the depth budget comes from a
    2-approximation of the diameter (BFS depth from the fixed source).
    Members inducing the same edge subset are simulated once and accounted
    with their multiplicity, which leaves outputs and round totals
    identical to the full walk.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    before_draws = rng.draws

    mapping, rename_rounds, disconnected = rename_edges(g, config)
    rounds = rename_rounds

    probe_tree, probe_t = truncated_bfs(g, Selector.all(), 0, g.n, config)
    rounds += probe_t.rounds
    d_hat = max(1, probe_tree.max_depth())

    a = DETOUR_FACTOR * lam * (2 * d_hat)
    depth_cap = a
    iterations = 0
    fam = None
    certs: dict[int, set[int]] = {v: set() for v in range(g.n)}
    digest = blake2b(digest_size=16)
    source = 0
    if g.m > 0:
        if family_mode == "compact":
            # the smallest family whose range covers the edge ids wins; the
            # identity map is a valid perfect family whenever 2k^2 >= m
            k = a + lam
            mode = "identity" if 2 * k * k >= g.m else "search"
        else:
            mode = family_mode
        fam = build_ft_universal(g.m, a, lam, mode=mode)
        if fam.member_count > iteration_budget:
            raise RuntimeError(
                f"universal family has {fam.member_count} members, over the "
                f"iteration budget {iteration_budget}"
            )
        iterations = fam.member_count

        inverse = {new: old for old, new in mapping.items()}
        for subset, count, key in fam.grouped_members(g.m):
            kept = frozenset(inverse[x] for x in subset)
            sel = Selector.edge_subset(kept)
            tree, t1 = truncated_bfs(g, sel, source, depth_cap, config)
            paths, t2 = collect_root_paths(g, tree, config)
            rounds += count * (t1.rounds + t2.rounds)
            digest.update(repr((key, count)).encode())
            digest.update(t1.export().encode())
            digest.update(t2.export().encode())
            for v, path in paths.items():
                certs[v].update(path)

    candidates: list[tuple[int, int, frozenset[int]]] = []
    for t in range(g.n):
        if t == source:
            continue
        cert = StCertificate(t, source, frozenset(certs[t]))
        value, witness, _ = local_st_cut(g, cert, lam)
        if value <= lam:
            candidates.append((value, t, witness))

    winner, report_rounds, attempts = _report_and_verify(
        g, candidates, lam, config, lambda w: verify_cut(g, w, lam, config)
    )
    rounds += report_rounds

    assert rng.draws == before_draws, "deterministic run consumed randomness"

    frozen = {v: frozenset(edges) for v, edges in certs.items()}
    family_info = fam.to_json() if fam is not None else None
    if winner is None:
        return CutResult(
            None, frozenset(), None, rounds, iterations, "deterministic",
            lam, None, certificates=frozen, attempts=attempts,
            family=family_info, digest=digest.hexdigest(),
        )
    value, owner, witness = winner
    return CutResult(
        value, witness, owner, rounds, iterations, "deterministic",
        lam, None, certificates=frozen, attempts=attempts,
        family=family_info, digest=digest.hexdigest(),
    )
