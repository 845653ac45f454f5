"""Query-counted access to a game graph and a coalition structure.

Testers and witness predicates only ever see these objects. Each oracle
counts its queries and can enforce an optional budget on its total.
"""

from __future__ import annotations

from dataclasses import dataclass

from .game import CoalitionStructure, FenGame, UtilityParams


class BudgetExceeded(RuntimeError):
    """Raised when an oracle query would exceed the oracle's budget."""


@dataclass(frozen=True)
class QueryLedger:
    neighbor: int = 0
    find: int = 0
    member: int = 0

    @property
    def total(self) -> int:
        return self.neighbor + self.find + self.member

    def __add__(self, other: QueryLedger) -> QueryLedger:
        return QueryLedger(self.neighbor + other.neighbor, self.find + other.find, self.member + other.member)

    def __sub__(self, other: QueryLedger) -> QueryLedger:
        return QueryLedger(self.neighbor - other.neighbor, self.find - other.find, self.member - other.member)

    def as_dict(self) -> dict[str, int]:
        return {"neighbor": self.neighbor, "find": self.find, "member": self.member, "total": self.total}


class GraphOracle:
    """Labelled neighbour queries on a :class:`FenGame`.

    ``neighbor(v, i)`` returns the ``i``-th entry (1-based) of ``v``'s friends
    followed by its enemies, each ascending, together with its label.
    """

    def __init__(self, game: FenGame, budget: int | None = None):
        self._game = game
        self._lists = game.labelled_adjacency
        self.budget = budget
        self.neighbor_queries = 0

    @property
    def n(self) -> int:
        return self._game.n

    @property
    def d(self) -> int:
        return self._game.d

    @property
    def params(self) -> UtilityParams:
        return self._game.params

    def neighbor(self, v: int, i: int) -> tuple[int, str] | None:
        if not 1 <= v <= self._game.n or i < 1:
            raise ValueError(f"invalid neighbour query ({v}, {i})")
        if self.budget is not None and self.neighbor_queries >= self.budget:
            raise BudgetExceeded(f"graph oracle budget of {self.budget} queries exhausted")
        self.neighbor_queries += 1
        adj = self._lists[v - 1]
        return adj[i - 1] if i <= len(adj) else None

    def ledger(self) -> QueryLedger:
        return QueryLedger(neighbor=self.neighbor_queries)


class PartitionOracle:
    """Find/member queries on a :class:`CoalitionStructure`.

    Keys are opaque integers; ``member(k, i)`` returns the ``i``-th smallest
    member of the coalition, or ``None`` past its end.
    """

    def __init__(self, partition: CoalitionStructure, budget: int | None = None):
        self._partition = partition
        self.budget = budget
        self.find_queries = 0
        self.member_queries = 0

    @property
    def n(self) -> int:
        return self._partition.n

    def _charge(self):
        if self.budget is not None and self.find_queries + self.member_queries >= self.budget:
            raise BudgetExceeded(f"partition oracle budget of {self.budget} queries exhausted")

    def find(self, v: int) -> int:
        if not 1 <= v <= self._partition.n:
            raise ValueError(f"invalid find query {v}")
        self._charge()
        self.find_queries += 1
        return self._partition.key_of(v)

    def member(self, key: int, i: int) -> int | None:
        if not 0 <= key < len(self._partition) or isinstance(key, bool):
            raise KeyError(f"unknown coalition key {key!r}")
        if i < 1:
            raise ValueError(f"invalid member index {i}")
        self._charge()
        self.member_queries += 1
        part = self._partition.members(key)
        return part[i - 1] if i <= len(part) else None

    def ledger(self) -> QueryLedger:
        return QueryLedger(find=self.find_queries, member=self.member_queries)


def snapshot_ledger(*oracles: GraphOracle | PartitionOracle | None) -> QueryLedger:
    nb = fd = mb = 0
    for oracle in oracles:
        if isinstance(oracle, GraphOracle):
            nb += oracle.neighbor_queries
        elif oracle is not None:
            fd += oracle.find_queries
            mb += oracle.member_queries
    return QueryLedger(nb, fd, mb)
