"""Recursive coupling of the two boundary-conditioned distributions.

For an edge-boundary pair X, the two distributions π_B and π_B' differ only
through the distinguished edge e_X.  An optimal coupling of the two v_X
marginals has disagreement probability μ(X); when the coupled colours (c, c')
disagree, the discrepancy propagates to the child pairs X_i(c, c') over the
edges of E_X, giving a tree T_X whose level-d disagreement weight Γ_d(X)
satisfies Γ_1 = μ(X) and

    Γ_d(X) = Σ_{c≠c'} p_X(c,c') Σ_i Γ_{d-1}(X_i(c,c')).

The p-table pins one particular optimal coupling (maximal diagonal, greedy
colour-order residual matching); Γ_d depends on its support, so the choice
is fixed here once for determinism.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .lattice import Coord, Edge, Region, apply_symmetry, SYMMETRIES
from .colouring import count, count_breakdown, NoValidColouringError
from .boundary import EdgeBoundaryPair, child_pair, ordered_EX
from .mu import mu_exact


@dataclass(frozen=True)
class PTable:
    """Joint distribution of (C(v_X), C'(v_X)) under the canonical coupling."""

    p: dict[tuple[int, int], Fraction]
    marginal_B: dict[int, Fraction]
    marginal_Bprime: dict[int, Fraction]

    @property
    def off_diagonal_mass(self) -> Fraction:
        return sum((v for (c, cp), v in self.p.items() if c != cp), Fraction(0))


def _vx_marginals(X: EdgeBoundaryPair) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    bd = count_breakdown(X.region, X.B, X.v_x, X.q, ignore_edge=X.e_x)
    out = []
    for forbidden in (X.B[X.e_x], X.Bprime[X.e_x]):
        counts = {i: (0 if i == forbidden else bd[i]) for i in range(1, X.q + 1)}
        total = sum(counts.values())
        if total == 0:
            raise NoValidColouringError("no colouring agrees with the boundary")
        out.append({i: Fraction(n, total) for i, n in counts.items()})
    return out[0], out[1]


def p_table(X: EdgeBoundaryPair) -> PTable:
    """The canonical optimal coupling of the two v_X marginals.

    Diagonal entries take the overlap min(p, p'); the residual masses are
    matched greedily in increasing colour order.  The off-diagonal mass is
    exactly the total variation distance, i.e. μ(X).
    """
    pB, pBp = _vx_marginals(X)
    joint: dict[tuple[int, int], Fraction] = {}
    resB, resBp = {}, {}
    for i in range(1, X.q + 1):
        d = min(pB[i], pBp[i])
        if d > 0:
            joint[(i, i)] = d
        if pB[i] > d:
            resB[i] = pB[i] - d
        if pBp[i] > d:
            resBp[i] = pBp[i] - d
    cs = sorted(resB)
    cps = sorted(resBp)
    ci = cpi = 0
    while ci < len(cs) and cpi < len(cps):
        c, cp = cs[ci], cps[cpi]
        m = min(resB[c], resBp[cp])
        if m > 0:
            joint[(c, cp)] = joint.get((c, cp), Fraction(0)) + m
        resB[c] -= m
        resBp[cp] -= m
        if resB[c] == 0:
            ci += 1
        if resBp[cp] == 0:
            cpi += 1
    return PTable(joint, pB, pBp)


# ---------------------------------------------------------------------------
# The coupling tree
# ---------------------------------------------------------------------------

@dataclass
class TreeEdge:
    weight: Fraction
    name: Optional[Coord]          # None renders as the degenerate mark "·"
    child: "TreeNode"
    level: int                     # non-degenerate level (0 for degenerate)


@dataclass
class TreeNode:
    edges: list[TreeEdge] = field(default_factory=list)


class TreeCapExceeded(RuntimeError):
    pass


def build_tree(X: EdgeBoundaryPair, depth: int, max_nodes: int = 200_000) -> TreeNode:
    """The coupling tree of X truncated at non-degenerate level ``depth``.

    Zero-weight root edges are pruned (they contribute nothing to any
    likelihood, cost or Γ).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    budget = [max_nodes]

    def rec(X: EdgeBoundaryPair, level: int) -> TreeNode:
        budget[0] -= 1
        if budget[0] < 0:
            raise TreeCapExceeded(f"tree exceeds {max_nodes} nodes")
        node = TreeNode()
        pt = p_table(X)
        for (c, cp), w in sorted(pt.p.items()):
            if c == cp:
                continue
            leaf = TreeNode()
            node.edges.append(TreeEdge(w, X.v_x, leaf, level))
            if level < depth:
                for i in range(1, len(ordered_EX(X)) + 1):
                    sub = rec(child_pair(X, i, c, cp), level + 1)
                    leaf.edges.append(TreeEdge(Fraction(1), None, sub, 0))
        return node

    return rec(X, 1)


def tree_levels(T: TreeNode) -> dict[int, Fraction]:
    """Σ over edges of each non-degenerate level of the edge likelihoods."""
    out: dict[int, Fraction] = {}

    def rec(node: TreeNode, like: Fraction):
        for e in node.edges:
            l2 = like * e.weight
            if e.name is not None:
                out[e.level] = out.get(e.level, Fraction(0)) + l2
            rec(e.child, l2)

    rec(T, Fraction(1))
    return out


def cost(v: Coord, T: TreeNode) -> Fraction:
    """γ(v, T): total likelihood of edges named v in the truncated tree."""
    total = Fraction(0)

    def rec(node: TreeNode, like: Fraction):
        nonlocal total
        for e in node.edges:
            l2 = like * e.weight
            if e.name == v:
                total += l2
            rec(e.child, l2)

    rec(T, Fraction(1))
    return total


def dump_tree(T: TreeNode) -> str:
    """One line per edge: `level parent child weight=<n>/<d> name=<vertex|·>`."""
    lines = []
    counter = [0]
    ids: dict[int, int] = {id(T): 0}

    def rec(node: TreeNode):
        for e in node.edges:
            counter[0] += 1
            ids[id(e.child)] = counter[0]
            name = "·" if e.name is None else f"{e.name[0]},{e.name[1]}"
            lines.append(
                f"{e.level} {ids[id(node)]} {counter[0]} "
                f"weight={e.weight.numerator}/{e.weight.denominator} name={name}")
            rec(e.child)

    rec(T)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Γ_d via the recursion, memoized on pair isomorphism classes
# ---------------------------------------------------------------------------

def _canonical_pair_key(X: EdgeBoundaryPair):
    """Canonical form of a pair under lattice symmetry and translation."""
    best = None
    for s in SYMMETRIES:
        v2 = apply_symmetry(X.v_x, s)
        verts = sorted(apply_symmetry(u, s) for u in X.region.vertices)
        ox, oy = verts[0]
        def mv(u):
            a = apply_symmetry(u, s)
            return (a[0] - ox, a[1] - oy)
        edges = tuple(sorted(
            (tuple(sorted((mv(e[0]), mv(e[1])))), X.B[e], X.Bprime[e])
            for e in X.B.assignment))
        key = (mv(X.v_x), mv(X.w_x), edges)
        if best is None or key < best:
            best = key
    return best


class GammaEvaluator:
    """Evaluates Γ_d with memoization across isomorphic pairs."""

    def __init__(self, max_cache: int = 500_000):
        self.cache: dict = {}
        self.max_cache = max_cache

    def gamma(self, X: EdgeBoundaryPair, d: int) -> Fraction:
        if d < 1:
            raise ValueError("d must be >= 1")
        key = (_canonical_pair_key(X), d)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        pt = p_table(X)
        if d == 1:
            val = pt.off_diagonal_mass
        else:
            val = Fraction(0)
            k = len(ordered_EX(X))
            for (c, cp), w in pt.p.items():
                if c == cp or w == 0:
                    continue
                sub = Fraction(0)
                for i in range(1, k + 1):
                    sub += self.gamma(child_pair(X, i, c, cp), d - 1)
                val += w * sub
        if len(self.cache) < self.max_cache:
            self.cache[key] = val
        return val


def gamma_d(X: EdgeBoundaryPair, d: int,
            evaluator: Optional[GammaEvaluator] = None) -> Fraction:
    """Γ_d(X): expected level-d disagreement weight; Γ_1(X) = μ(X)."""
    return (evaluator or GammaEvaluator()).gamma(X, d)


# ---------------------------------------------------------------------------
# Constructive coupling at tiny scale
# ---------------------------------------------------------------------------

Colouring = tuple[tuple[Coord, int], ...]


def _enumerate_colourings(X: EdgeBoundaryPair, which: str) -> dict[Colouring, Fraction]:
    from .colouring import brute_force_count, _forbidden_sets
    from .lattice import neighbour_ring
    B = X.B if which == "B" else X.Bprime
    verts = sorted(X.region.vertices)
    forbidden = _forbidden_sets(B)
    adj = {v: tuple(w for w in neighbour_ring(v) if w in X.region.vertices)
           for v in verts}
    out: list[Colouring] = []
    cur: dict[Coord, int] = {}

    def rec(i):
        if i == len(verts):
            out.append(tuple(sorted(cur.items())))
            return
        v = verts[i]
        for c in range(1, X.q + 1):
            if c in forbidden[v] or any(cur.get(w) == c for w in adj[v]):
                continue
            cur[v] = c
            rec(i + 1)
            del cur[v]

    rec(0)
    if not out:
        raise NoValidColouringError("no agreeing colouring")
    p = Fraction(1, len(out))
    return {c: p for c in out}


def coupling_distribution(X: EdgeBoundaryPair, cap: int = 6,
                          ) -> dict[tuple[Colouring, Colouring], Fraction]:
    """The explicit joint distribution of the recursive coupling of X.

    Marginals are exactly π_B and π_B'; the disagreement probability at v_X
    is exactly μ(X).  Only usable at tiny scale (|R| ≤ cap): the recursion
    materializes full joint distributions.
    """
    if len(X.region) > cap:
        raise ValueError(f"region too large (> {cap}) for the explicit coupling")
    pt = p_table(X)
    ex = ordered_EX(X)
    joint: dict[tuple[Colouring, Colouring], Fraction] = {}
    for (c, cp), w in sorted(pt.p.items()):
        pair_dist = _conditional_coupling(X, c, cp, ex, cap)
        for (C, Cp), w2 in pair_dist.items():
            C2 = tuple(sorted(C + ((X.v_x, c),)))
            Cp2 = tuple(sorted(Cp + ((X.v_x, cp),)))
            key = (C2, Cp2)
            joint[key] = joint.get(key, Fraction(0)) + w * w2
    return joint


def _rest_distribution(X: EdgeBoundaryPair, c: int) -> dict[Colouring, Fraction]:
    """π over R∖{v_X} given v_X coloured c (boundary B off e_X)."""
    if len(X.region) == 1:
        return {(): Fraction(1)}
    R2 = X.region.without(X.v_x)
    from .colouring import PartialEdgeColouring
    from .lattice import edge_boundary as ebd
    assignment = {}
    for e in ebd(R2):
        if e in X.B.assignment and e != X.e_x:
            assignment[e] = X.B[e]
        elif e in X.B.assignment:
            assignment[e] = X.B[e]
        else:
            assignment[e] = c  # an E_X edge: v_X carries colour c
    B2 = PartialEdgeColouring(R2, assignment, X.q)
    # enumerate via a throwaway pair-like wrapper
    class _W:  # minimal duck type for _enumerate_colourings
        pass
    w = _W()
    w.B = B2
    w.Bprime = B2
    w.region = R2
    w.q = X.q
    return _enumerate_colourings(w, "B")


def _conditional_coupling(X: EdgeBoundaryPair, c: int, cp: int,
                          ex, cap: int) -> dict[tuple[Colouring, Colouring], Fraction]:
    """Coupling of π(R∖v_X | v_X=c under B) and π(R∖v_X | v_X=c' under B')."""
    if c == cp:
        # The two conditionals coincide; couple identically.
        return {(C, C): w for C, w in _rest_distribution(X, c).items()}
    # Chain through the child pairs X_i(c, c'): the i-th coupling joins the
    # distribution with e_1..e_{i-1} at c' and e_i..e_k at c to the one with
    # e_i also flipped to c'.  Glue the chain by conditional composition.
    k = len(ex)
    if k == 0:
        d0 = _rest_distribution(X, c)
        dk = _rest_distribution(X, cp)
        assert d0 == dk
        return {(C, C): w for C, w in d0.items()}
    current: dict[tuple[Colouring, Colouring], Fraction] = None
    for i in range(1, k + 1):
        child = child_pair(X, i, c, cp)
        step = coupling_distribution(child, cap)
        if current is None:
            current = step
        else:
            # compose: current couples D_0,D_{i-1}; step couples D_{i-1},D_i
            left_mass: dict[Colouring, Fraction] = {}
            for (_, mid), w in current.items():
                left_mass[mid] = left_mass.get(mid, Fraction(0)) + w
            composed: dict[tuple[Colouring, Colouring], Fraction] = {}
            by_mid: dict[Colouring, list] = {}
            for (mid, right), w in step.items():
                by_mid.setdefault(mid, []).append((right, w))
            for (left, mid), w in current.items():
                for right, w2 in by_mid.get(mid, ()):
                    key = (left, right)
                    composed[key] = composed.get(key, Fraction(0)) + \
                        w * w2 / left_mass[mid]
            current = composed
    return current


def sample_coupling(X: EdgeBoundaryPair, seed: int, n: int = 1,
                    cap: int = 6) -> list[tuple[dict, dict]]:
    """Draw n coupled colouring pairs (C, C') from the recursive coupling."""
    joint = coupling_distribution(X, cap)
    items = sorted(joint.items())
    cum = []
    acc = Fraction(0)
    for _, w in items:
        acc += w
        cum.append(acc)
    cumf = [float(x) for x in cum]
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        idx = bisect.bisect_left(cumf, rng.random())
        idx = min(idx, len(items) - 1)
        (C, Cp), _ = items[idx]
        out.append((dict(C), dict(Cp)))
    return out
