"""Mode elicitation from several cross-polytope problem instances.

Each instance embeds ``2d`` outcomes into the cross-polytope in ``R^d``.
Its minimizer's ``i``-th coordinate compares the two outcomes sitting on the
diagonal pair ``(e_i, -e_i)``: positive means the outcome at ``e_i`` is more
likely. A round-robin schedule of ``2d - 1`` perfect matchings compares every
pair of outcomes exactly once, and the mode is read off the comparisons.

When noisy reports are inconsistent, :func:`relation_table` and
:func:`largest_total_order_subset` recover the mode on the largest subset of
outcomes whose reports form a total preorder.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .embedding import check_distribution, default_labels, embed, make_embedding
from .errors import ConsistencyError, InputError
from .polytope import Kind, build_cross_polytope

TAU = 1e-9
EXACT_SEARCH_MAX = 12


class Relation(enum.Enum):
    LESS = "<"
    GREATER = ">"
    EQUAL = "="


class ComparisonReport(NamedTuple):
    relation: Relation  # compares p_a with p_b
    pair: tuple  # (a, b) outcome indices, a < b
    source_instance: int

    def to_json(self, labels):
        a, b = self.pair
        return json.dumps(
            {"instance": self.source_instance, "a": labels[a], "b": labels[b], "rel": self.relation.value}
        )


@dataclass(frozen=True, eq=False)
class InstancePlan:
    labels: tuple
    pairings: tuple  # m matchings, each a tuple of d pairs (a, b) with a < b
    embeddings: tuple  # one cross-polytope embedding per matching
    orders: tuple  # orders[j][k] = global index of the outcome on vertex k of instance j

    @property
    def m(self):
        return len(self.pairings)


def circle_method(n):
    """Round-robin 1-factorization of ``n`` (even) players into ``n - 1`` rounds.

    Player 0 stays fixed while players ``1..n-1`` rotate.
    """
    rounds = []
    k = n - 1
    for r in range(k):
        pairs = [(0, 1 + r)]
        for s in range(1, n // 2):
            a, b = 1 + (r + s) % k, 1 + (r - s) % k
            pairs.append((min(a, b), max(a, b)))
        rounds.append(tuple(sorted(pairs)))
    return rounds


def round_robin_plan(n_outcomes, labels=None):
    if n_outcomes % 2 or n_outcomes < 4:
        raise InputError(
            f"the cross-polytope plan needs an even number of outcomes >= 4, got {n_outcomes}; "
            "pad with a zero-probability outcome"
        )
    labels = default_labels(n_outcomes) if labels is None else tuple(labels)
    if len(labels) != n_outcomes:
        raise InputError("label count does not match n_outcomes")
    d = n_outcomes // 2
    P = build_cross_polytope(d)
    pairings, embeddings, orders = [], [], []
    for matching in circle_method(n_outcomes):
        order = [k for pair in matching for k in pair]  # pair i -> vertices 2i (e_i), 2i+1 (-e_i)
        pairings.append(matching)
        orders.append(tuple(order))
        embeddings.append(make_embedding(P, [labels[k] for k in order]))
    return InstancePlan(labels, tuple(pairings), tuple(embeddings), tuple(orders))


def _diagonal_pairs(E):
    """For each axis ``i``: vertex indices of ``e_i`` and ``-e_i``."""
    V = E.vertices
    if E.polytope.kind is not Kind.CROSS and not (
        V.shape[0] == 2 * V.shape[1] and np.allclose(np.abs(V).sum(axis=1), 1) and np.allclose(np.abs(V).max(axis=1), 1)
    ):
        raise InputError("comparisons need a cross-polytope embedding")
    pairs = []
    for i in range(E.dim):
        e = np.zeros(E.dim)
        e[i] = 1.0
        plus = int(np.flatnonzero(np.all(np.isclose(V, e), axis=1))[0])
        minus = int(np.flatnonzero(np.all(np.isclose(V, -e), axis=1))[0])
        pairs.append((plus, minus))
    return pairs


def extract_comparisons(E, u, tau=TAU, outcome_index=None, instance=0):
    """One report per diagonal pair of a cross-polytope embedding.

    ``outcome_index`` maps a vertex position to its global outcome index
    (defaults to the identity). The outcome nearer to ``u`` is the more likely
    one; ``(|u - v_b|^2 - |u - v_a|^2) / 4`` equals the signed coordinate and
    is compared against ``tau``.
    """
    u = np.asarray(u, dtype=float)
    if outcome_index is None:
        outcome_index = range(E.n)
    outcome_index = list(outcome_index)
    reports = []
    for plus, minus in _diagonal_pairs(E):
        s = (np.sum((u - E.vertices[minus]) ** 2) - np.sum((u - E.vertices[plus]) ** 2)) / 4
        a, b = outcome_index[plus], outcome_index[minus]
        if abs(s) <= tau:
            rel = Relation.EQUAL
        else:
            rel = Relation.GREATER if s > 0 else Relation.LESS  # p_plus vs p_minus
        if a > b:
            a, b = b, a
            rel = {Relation.GREATER: Relation.LESS, Relation.LESS: Relation.GREATER}.get(rel, rel)
        reports.append(ComparisonReport(rel, (a, b), instance))
    return reports


def _pair_relations(reports, n):
    rel = {}
    for r in reports:
        a, b = r.pair
        if not (0 <= a < b < n):
            raise InputError(f"report pair {r.pair} invalid for {n} outcomes")
        rel.setdefault((a, b), set()).add(r.relation)
    return rel


def find_maxes(reports, n):
    """Outcomes that no report places below another outcome.

    Requires every pair to be compared; raises :class:`ConsistencyError` when
    the same pair gets conflicting relations or the comparisons are not
    transitive.
    """
    rel = _pair_relations(reports, n)
    missing = [pair for pair in itertools.combinations(range(n), 2) if pair not in rel]
    if missing:
        raise InputError(f"pairs {missing[:5]} were never compared")
    conflicts = [pair for pair, rs in rel.items() if len(rs) > 1]
    if conflicts:
        raise ConsistencyError(f"conflicting reports on pairs {conflicts}; use the relation-table path")
    table = relation_table(reports, n=n)
    if not _is_total_preorder(table, range(n)):
        raise ConsistencyError("comparisons are not transitive; use the relation-table path")
    dominated = set()
    for (a, b), rs in rel.items():
        (r,) = rs
        if r is Relation.LESS:
            dominated.add(a)
        elif r is Relation.GREATER:
            dominated.add(b)
    return frozenset(range(n)) - dominated


@dataclass(frozen=True, eq=False)
class RelationTable:
    """``M[i, k] = 1`` when some report says ``p_i <= p_k``.

    ``ties[i, k]`` marks pairs whose only reports are equalities; those are
    the only off-diagonal pairs allowed to relate in both directions.
    """

    M: np.ndarray
    ties: np.ndarray
    labels: tuple = field(default=())


def relation_table(reports, n=None, labels=None):
    reports = list(reports)
    if not reports:
        raise InputError("no reports to build a relation table from")
    if n is None:
        n = len(labels) if labels is not None else 1 + max(max(r.pair) for r in reports)
    M = np.eye(n, dtype=np.int8)
    relations = _pair_relations(reports, n)
    ties = np.zeros((n, n), dtype=bool)
    for (a, b), rs in relations.items():
        for r in rs:
            if r in (Relation.LESS, Relation.EQUAL):
                M[a, b] = 1
            if r in (Relation.GREATER, Relation.EQUAL):
                M[b, a] = 1
        if rs == {Relation.EQUAL}:
            ties[a, b] = ties[b, a] = True
    return RelationTable(M, ties, tuple(labels) if labels is not None else default_labels(n))


def _is_total_preorder(table, S):
    """Reflexive, total, transitive, and antisymmetric up to reported ties on ``S``."""
    S = list(S)
    M, ties = table.M, table.ties
    sub = M[np.ix_(S, S)].astype(bool)
    if not np.all(np.diag(sub)):
        return False
    if not np.all(sub | sub.T):
        return False
    both = sub & sub.T
    np.fill_diagonal(both, False)
    if np.any(both & ~ties[np.ix_(S, S)]):
        return False
    # transitive: M[i,j] and M[j,k] imply M[i,k]
    closure = (sub.astype(np.int32) @ sub.astype(np.int32)) > 0
    return bool(np.all(sub[closure]))


class SubsetResult(NamedTuple):
    subset: frozenset
    heuristic: bool


def largest_total_order_subset(table):
    """Largest outcome subset on which the relation table is a total preorder.

    Exact branch-and-bound for up to 12 outcomes; greedy deletion of the
    outcome involved in the most violations above that (flagged heuristic).
    """
    n = table.M.shape[0]
    if n <= EXACT_SEARCH_MAX:
        best = []

        def extend(chosen, k):
            nonlocal best
            if len(chosen) + (n - k) <= len(best):
                return
            if k == n:
                best = list(chosen)
                return
            if _is_total_preorder(table, chosen + [k]):
                extend(chosen + [k], k + 1)
            extend(chosen, k + 1)

        extend([], 0)
        return SubsetResult(frozenset(best), False)

    S = list(range(n))
    while not _is_total_preorder(table, S):
        scores = [_violations(table, S, i) for i in S]
        S.remove(S[int(np.argmax(scores))])
    return SubsetResult(frozenset(S), True)


def _violations(table, S, i):
    others = [k for k in S if k != i]
    return sum(not _is_total_preorder(table, [i, j, k]) for j, k in itertools.combinations(others, 2))


def subset_maxes(table, S):
    """Top element(s) of the preorder restricted to ``S``."""
    S = sorted(S)
    if not S:
        raise InputError("empty subset")
    M = table.M
    return frozenset(i for i in S if all(M[k, i] for k in S))


class ElicitationResult(NamedTuple):
    mode: frozenset
    diagnostics: dict


def elicit_mode_end_to_end(p, plan, noise=None, tau=TAU, rng=None):
    """Recover the mode of ``p`` from the plan's pairwise comparison instances.

    ``noise`` is a perturbation radius: each instance's minimizer is moved by
    a uniformly random vector of norm at most ``noise``, standing in for the
    error of a trained model. Contradictory reports fall back to the largest
    consistent subset.
    """
    n = len(plan.labels)
    p = check_distribution(p, n)
    rng = np.random.default_rng(rng)
    reports, points = [], []
    for j, (E, order) in enumerate(zip(plan.embeddings, plan.orders)):
        u = embed(E, p[list(order)])
        if noise:
            direction = rng.normal(size=E.dim)
            direction /= np.linalg.norm(direction)
            u = u + noise * rng.uniform() ** (1 / E.dim) * direction
        points.append(u)
        reports.extend(extract_comparisons(E, u, tau, order, instance=j))
    diagnostics = {"reports": reports, "points": points}
    try:
        mode = find_maxes(reports, n)
        diagnostics["path"] = "find_maxes"
    except ConsistencyError as exc:
        table = relation_table(reports, n=n, labels=plan.labels)
        subset = largest_total_order_subset(table)
        mode = subset_maxes(table, subset.subset)
        diagnostics.update(path="relation_table", reason=str(exc), subset=subset.subset, heuristic=subset.heuristic)
    return ElicitationResult(mode, diagnostics)
