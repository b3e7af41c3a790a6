"""Non-dominated sorting of an evaluation matrix into Pareto fronts
(maximization on every criterion)."""

from __future__ import annotations

from ..model import EvaluationMatrix


def dominates(a, b) -> bool:
    """True when a is at least as good as b everywhere and better somewhere."""
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def pareto_fronts(evaluations: EvaluationMatrix) -> list[list[str]]:
    """Peel the alternatives into fronts: front 1 is the non-dominated set,
    front k the non-dominated set among the remainder."""
    names = evaluations.alternatives
    rows = evaluations.values
    n = len(names)
    dominated_by = [[] for _ in range(n)]
    count = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(rows[i], rows[j]):
                dominated_by[i].append(j)
                count[j] += 1
            elif dominates(rows[j], rows[i]):
                dominated_by[j].append(i)
                count[i] += 1
    fronts: list[list[str]] = []
    current = [i for i in range(n) if count[i] == 0]
    while current:
        fronts.append([names[i] for i in current])
        nxt = []
        for i in current:
            for j in dominated_by[i]:
                count[j] -= 1
                if count[j] == 0:
                    nxt.append(j)
        current = sorted(nxt)
    return fronts
