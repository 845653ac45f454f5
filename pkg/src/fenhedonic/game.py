"""FEN-hedonic games: labelled bounded-degree graphs, linear utilities, partitions and edits.

Players are the integers ``1..n``. A coalition size bound is an ``int`` or
``None`` (unbounded).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Sequence

SizeBound = int | None

FRIEND: Literal["friend"] = "friend"
ENEMY: Literal["enemy"] = "enemy"


class GameError(ValueError):
    """Raised for malformed games, partitions or utility parameters."""


class EditError(GameError):
    """Raised when an edit script step cannot be applied."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"edit step {index}: {reason}")
        self.index = index
        self.reason = reason


def fits(size: int, c: SizeBound) -> bool:
    return c is None or size <= c


@dataclass(frozen=True)
class UtilityParams:
    f: int = 1
    e: int = 1

    def __post_init__(self):
        if not (isinstance(self.f, int) and isinstance(self.e, int)) or self.f < 1 or self.e < 1:
            raise GameError(f"utility parameters must be positive integers, got f={self.f}, e={self.e}")

    @classmethod
    def friends_appreciation(cls, d: int) -> UtilityParams:
        return cls(f=d, e=1)

    @classmethod
    def enemies_aversion(cls, d: int) -> UtilityParams:
        return cls(f=1, e=d)


@dataclass(frozen=True)
class FenGame:
    """Symmetric friend/enemy graph on players ``1..n`` with degree bound ``d``.

    ``friend_adjacency[i - 1]`` and ``enemy_adjacency[i - 1]`` are strictly
    ascending tuples. Use :meth:`from_edges` to build one from edge lists.
    """

    n: int
    d: int
    friend_adjacency: tuple[tuple[int, ...], ...]
    enemy_adjacency: tuple[tuple[int, ...], ...]
    params: UtilityParams = field(default_factory=UtilityParams)

    def __post_init__(self):
        if self.n < 0:
            raise GameError("player count must be non-negative")
        if self.d < 1:
            raise GameError("degree bound must be positive")
        if len(self.friend_adjacency) != self.n or len(self.enemy_adjacency) != self.n:
            raise GameError("adjacency length does not match n")
        for i in range(1, self.n + 1):
            fr, en = self.friend_adjacency[i - 1], self.enemy_adjacency[i - 1]
            for adj in (fr, en):
                if any(a >= b for a, b in zip(adj, adj[1:])):
                    raise GameError(f"adjacency of player {i} is not strictly ascending")
                if adj and (adj[0] < 1 or adj[-1] > self.n):
                    raise GameError(f"adjacency of player {i} out of range")
                if i in adj:
                    raise GameError(f"self-edge at player {i}")
            if len(fr) + len(en) > self.d:
                raise GameError(f"player {i} has degree {len(fr) + len(en)} > d={self.d}")
            if set(fr) & set(en):
                raise GameError(f"player {i} has a neighbour that is both friend and enemy")
            for j in fr:
                if i not in self._friend_sets[j - 1]:
                    raise GameError(f"friend edge ({i},{j}) is not symmetric")
            for j in en:
                if i not in self._enemy_sets[j - 1]:
                    raise GameError(f"enemy edge ({i},{j}) is not symmetric")

    @classmethod
    def from_edges(
        cls,
        n: int,
        d: int,
        friend_edges: Iterable[tuple[int, int]] = (),
        enemy_edges: Iterable[tuple[int, int]] = (),
        params: UtilityParams | None = None,
    ) -> FenGame:
        fr: list[set[int]] = [set() for _ in range(n)]
        en: list[set[int]] = [set() for _ in range(n)]
        for adj, edges, name in ((fr, friend_edges, "friend"), (en, enemy_edges, "enemy")):
            for u, v in edges:
                if not (1 <= u <= n and 1 <= v <= n) or u == v:
                    raise GameError(f"invalid {name} edge ({u},{v})")
                if v in adj[u - 1]:
                    raise GameError(f"duplicate {name} edge ({u},{v})")
                adj[u - 1].add(v)
                adj[v - 1].add(u)
        return cls(
            n=n,
            d=d,
            friend_adjacency=tuple(tuple(sorted(s)) for s in fr),
            enemy_adjacency=tuple(tuple(sorted(s)) for s in en),
            params=params or UtilityParams(),
        )

    @cached_property
    def _friend_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.friend_adjacency)

    @cached_property
    def _enemy_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.enemy_adjacency)

    @cached_property
    def labelled_adjacency(self) -> tuple[tuple[tuple[int, str], ...], ...]:
        """Per player: friends ascending then enemies ascending, each with its label."""
        return tuple(
            tuple((j, FRIEND) for j in fr) + tuple((j, ENEMY) for j in en)
            for fr, en in zip(self.friend_adjacency, self.enemy_adjacency)
        )

    @property
    def players(self) -> range:
        return range(1, self.n + 1)

    def friends(self, i: int) -> tuple[int, ...]:
        return self.friend_adjacency[i - 1]

    def enemies(self, i: int) -> tuple[int, ...]:
        return self.enemy_adjacency[i - 1]

    def friend_set(self, i: int) -> frozenset[int]:
        return self._friend_sets[i - 1]

    def enemy_set(self, i: int) -> frozenset[int]:
        return self._enemy_sets[i - 1]

    def degree(self, i: int) -> int:
        return len(self.friend_adjacency[i - 1]) + len(self.enemy_adjacency[i - 1])

    def label(self, i: int, j: int) -> str | None:
        if j in self._friend_sets[i - 1]:
            return FRIEND
        if j in self._enemy_sets[i - 1]:
            return ENEMY
        return None

    def friend_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.players for j in self.friends(i) if i < j]

    def enemy_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.players for j in self.enemies(i) if i < j]

    def with_params(self, params: UtilityParams) -> FenGame:
        return FenGame(self.n, self.d, self.friend_adjacency, self.enemy_adjacency, params)


@dataclass(frozen=True)
class CoalitionStructure:
    """A partition of ``1..n``.

    Coalitions are stored as ascending tuples, ordered by smallest member; the
    coalition key of a player is the index of its coalition in that order.
    """

    n: int
    coalitions: tuple[tuple[int, ...], ...]
    c: SizeBound = None

    def __post_init__(self):
        normalized = tuple(sorted((tuple(sorted(p)) for p in self.coalitions), key=lambda p: p[0] if p else 0))
        object.__setattr__(self, "coalitions", normalized)
        seen: set[int] = set()
        for part in normalized:
            if not part:
                raise GameError("empty coalition")
            if self.c is not None and len(part) > self.c:
                raise GameError(f"coalition {list(part)} exceeds size bound c={self.c}")
            for i in part:
                if not 1 <= i <= self.n:
                    raise GameError(f"player {i} out of range 1..{self.n}")
                if i in seen:
                    raise GameError(f"player {i} appears in two coalitions")
                seen.add(i)
        if len(seen) != self.n:
            missing = sorted(set(range(1, self.n + 1)) - seen)
            raise GameError(f"players {missing[:10]} are not covered")
        if self.c is not None and self.c < 1:
            raise GameError("size bound must be positive")

    @classmethod
    def singletons(cls, n: int, c: SizeBound = None) -> CoalitionStructure:
        return cls(n, tuple((i,) for i in range(1, n + 1)), c)

    @classmethod
    def from_labels(cls, labels: Sequence[int], c: SizeBound = None) -> CoalitionStructure:
        """Build from ``labels[i - 1]`` = group label of player ``i``."""
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels, start=1):
            groups.setdefault(lab, []).append(i)
        return cls(len(labels), tuple(tuple(g) for g in groups.values()), c)

    @cached_property
    def membership(self) -> tuple[int, ...]:
        keys = [0] * self.n
        for k, part in enumerate(self.coalitions):
            for i in part:
                keys[i - 1] = k
        return tuple(keys)

    @cached_property
    def _sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(p) for p in self.coalitions)

    def key_of(self, i: int) -> int:
        return self.membership[i - 1]

    def coalition_of(self, i: int) -> frozenset[int]:
        return self._sets[self.membership[i - 1]]

    def members(self, key: int) -> tuple[int, ...]:
        return self.coalitions[key]

    def __len__(self) -> int:
        return len(self.coalitions)


# -- utilities -----------------------------------------------------------------


def utility(game: FenGame, i: int, coalition: Iterable[int]) -> int:
    C = coalition if isinstance(coalition, (set, frozenset)) else frozenset(coalition)
    if i not in C:
        raise GameError(f"player {i} is not a member of the coalition")
    p = game.params
    return p.f * len(game.friend_set(i) & C) - p.e * len(game.enemy_set(i) & C)


def weakly_prefers(game: FenGame, i: int, C: Iterable[int], D: Iterable[int]) -> bool:
    return utility(game, i, C) >= utility(game, i, D)


def prefers(game: FenGame, i: int, C: Iterable[int], D: Iterable[int]) -> bool:
    return utility(game, i, C) > utility(game, i, D)


def indifferent(game: FenGame, i: int, C: Iterable[int], D: Iterable[int]) -> bool:
    return utility(game, i, C) == utility(game, i, D)


def max_utility(game: FenGame, i: int, c: SizeBound = None) -> int:
    """Best utility player ``i`` can get in any coalition of size at most ``c``."""
    nf = len(game.friends(i))
    if c is not None:
        if c < 1:
            raise GameError("size bound must be positive")
        nf = min(c - 1, nf)
    return game.params.f * nf


def is_favourite(game: FenGame, i: int, coalition: Iterable[int], c: SizeBound = None) -> bool:
    C = frozenset(coalition)
    if not fits(len(C), c):
        raise GameError(f"coalition of size {len(C)} exceeds size bound c={c}")
    return utility(game, i, C) == max_utility(game, i, c)


# -- edits ---------------------------------------------------------------------


@dataclass(frozen=True)
class Edit:
    op: Literal["insert", "delete"]
    kind: Literal["friend", "enemy"]
    i: int
    j: int

    def __post_init__(self):
        if self.op not in ("insert", "delete") or self.kind not in (FRIEND, ENEMY):
            raise GameError(f"unknown edit {self.op}-{self.kind}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j) if self.i < self.j else (self.j, self.i)

    def inverse(self) -> Edit:
        return Edit("delete" if self.op == "insert" else "insert", self.kind, self.i, self.j)

    def __str__(self) -> str:
        return f"{self.op}-{self.kind}({self.i},{self.j})"


@dataclass(frozen=True)
class EditScript:
    edits: tuple[Edit, ...] = ()

    @property
    def cost(self) -> int:
        return len(self.edits)

    def __len__(self) -> int:
        return len(self.edits)

    def __iter__(self):
        return iter(self.edits)

    def __add__(self, other: EditScript) -> EditScript:
        return EditScript(self.edits + other.edits)

    def inverse(self) -> EditScript:
        return EditScript(tuple(e.inverse() for e in reversed(self.edits)))


def apply_edits(game: FenGame, script: EditScript | Iterable[Edit]) -> FenGame:
    """Apply ``script`` step by step, checking every intermediate game stays valid."""
    fr = [set(a) for a in game.friend_adjacency]
    en = [set(a) for a in game.enemy_adjacency]
    for idx, ed in enumerate(script):
        i, j = ed.i, ed.j
        if not (1 <= i <= game.n and 1 <= j <= game.n) or i == j:
            raise EditError(idx, f"invalid pair ({i},{j})")
        adj = fr if ed.kind == FRIEND else en
        if ed.op == "delete":
            if j not in adj[i - 1]:
                raise EditError(idx, f"no {ed.kind} edge ({i},{j}) to delete")
            adj[i - 1].discard(j)
            adj[j - 1].discard(i)
        else:
            if j in fr[i - 1] or j in en[i - 1]:
                raise EditError(idx, f"pair ({i},{j}) is already labelled")
            for v in (i, j):
                if len(fr[v - 1]) + len(en[v - 1]) >= game.d:
                    raise EditError(idx, f"insertion would exceed degree bound at player {v}")
            adj[i - 1].add(j)
            adj[j - 1].add(i)
    return FenGame(
        game.n,
        game.d,
        tuple(tuple(sorted(s)) for s in fr),
        tuple(tuple(sorted(s)) for s in en),
        game.params,
    )


# -- text formats --------------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_size_bound(token: str) -> SizeBound:
    if token == "unbounded":
        return None
    try:
        c = int(token)
    except ValueError:
        raise GameError(f"size bound must be an integer or 'unbounded', got {token!r}") from None
    if c < 1:
        raise GameError("size bound must be positive")
    return c


def format_size_bound(c: SizeBound) -> str:
    return "unbounded" if c is None else str(c)


def parse_game(text: str) -> FenGame:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GameError("empty game file") from None
    if len(header) != 6 or header[:2] != ["fen", "1"]:
        raise GameError(f"line {lineno}: expected header 'fen 1 <n> <d> <f> <e>'")
    try:
        n, d, f, e = map(int, header[2:])
    except ValueError:
        raise GameError(f"line {lineno}: non-integer header field") from None
    friend_edges, enemy_edges = [], []
    for lineno, tok in lines:
        if len(tok) != 3 or tok[0] not in ("F", "E"):
            raise GameError(f"line {lineno}: expected 'F <u> <v>' or 'E <u> <v>'")
        try:
            u, v = int(tok[1]), int(tok[2])
        except ValueError:
            raise GameError(f"line {lineno}: non-integer endpoint") from None
        if not u < v:
            raise GameError(f"line {lineno}: edge endpoints must satisfy u < v")
        (friend_edges if tok[0] == "F" else enemy_edges).append((u, v))
    return FenGame.from_edges(n, d, friend_edges, enemy_edges, UtilityParams(f, e))


def format_game(game: FenGame) -> str:
    p = game.params
    out = [f"fen 1 {game.n} {game.d} {p.f} {p.e}"]
    out += [f"F {u} {v}" for u, v in game.friend_edges()]
    out += [f"E {u} {v}" for u, v in game.enemy_edges()]
    return "\n".join(out) + "\n"


def parse_partition(text: str) -> CoalitionStructure:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GameError("empty partition file") from None
    if len(header) != 3 or header[0] != "partition":
        raise GameError(f"line {lineno}: expected header 'partition <n> <c|unbounded>'")
    try:
        n = int(header[1])
    except ValueError:
        raise GameError(f"line {lineno}: non-integer n") from None
    c = parse_size_bound(header[2])
    parts = []
    for lineno, tok in lines:
        try:
            part = [int(t) for t in tok]
        except ValueError:
            raise GameError(f"line {lineno}: non-integer player id") from None
        if any(a >= b for a, b in zip(part, part[1:])):
            raise GameError(f"line {lineno}: coalition members must be ascending")
        parts.append(tuple(part))
    return CoalitionStructure(n, tuple(parts), c)


def format_partition(partition: CoalitionStructure) -> str:
    out = [f"partition {partition.n} {format_size_bound(partition.c)}"]
    out += [" ".join(map(str, part)) for part in partition.coalitions]
    return "\n".join(out) + "\n"


def parse_edit_script(text: str) -> EditScript:
    edits = []
    for lineno, tok in _content_lines(text):
        if len(tok) != 3 or "-" not in tok[0]:
            raise GameError(f"line {lineno}: expected '<op>-<kind> <i> <j>'")
        op, kind = tok[0].split("-", 1)
        edits.append(Edit(op, kind, int(tok[1]), int(tok[2])))  # type: ignore[arg-type]
    return EditScript(tuple(edits))


def format_edit_script(script: EditScript) -> str:
    return "".join(f"{e.op}-{e.kind} {e.i} {e.j}\n" for e in script)
