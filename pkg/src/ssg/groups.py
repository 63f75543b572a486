"""Finite groups realized on sets of nucleus states."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistency, NotClosed
from .presentation import NucleusAutomaton, identify_in_nucleus


@dataclass(frozen=True)
class GroupTable:
    """Multiplication table on ``elements`` (state ids); ``table[i][j]`` indexes ``elements``."""

    elements: tuple
    table: tuple
    identity: int
    inverses: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g: int) -> int:
        return self.elements.index(g)

    def mul(self, g: int, h: int) -> int:
        return self.elements[self.table[self.index(g)][self.index(h)]]

    def is_subgroup(self, members) -> bool:
        idx = [self.index(g) for g in members if g in self.elements]
        if len(idx) != len(set(members)) or self.identity not in idx:
            return False
        s = set(idx)
        return all(self.table[i][j] in s for i in idx for j in idx) and all(self.inverses[i] in s for i in idx)

    def left_cosets(self, members) -> list[tuple]:
        """Left cosets ``gK`` as sorted tuples of state ids, ordered by least element."""
        sub = [self.index(g) for g in members]
        seen = set()
        cosets = []
        for i in range(self.order):
            if i in seen:
                continue
            coset = {self.table[i][j] for j in sub}
            seen |= coset
            cosets.append(tuple(sorted(self.elements[c] for c in coset)))
        return sorted(cosets)


def group_table(a: NucleusAutomaton, elems) -> GroupTable:
    """Identify every product of two members inside the nucleus and check the group laws."""
    elements = tuple(getattr(elems, "members", elems))
    if a.identity not in elements:
        raise NotClosed("candidate subgroup does not contain the identity")
    pos = {g: i for i, g in enumerate(elements)}
    table = []
    for g in elements:
        row = []
        for h in elements:
            p = identify_in_nucleus(a, ((g, 1), (h, 1)))
            if p is None:
                raise InternalInconsistency(
                    f"product {a.names[g]}*{a.names[h]} of a cycle subgroup left the nucleus")
            if p not in pos:
                raise NotClosed(f"product {a.names[g]}*{a.names[h]} = {a.names[p]} leaves the set")
            row.append(pos[p])
        table.append(tuple(row))
    n = len(elements)
    e = pos[a.identity]
    for i in range(n):
        if table[e][i] != i or table[i][e] != i:
            raise InternalInconsistency("identity law fails")
    inverses = []
    for i in range(n):
        inv = [j for j in range(n) if table[i][j] == e]
        if len(inv) != 1 or table[inv[0]][i] != e:
            raise NotClosed(f"{a.names[elements[i]]} has no inverse in the set")
        inverses.append(inv[0])
    for i in range(n):
        for j in range(n):
            for l in range(n):
                if table[table[i][j]][l] != table[i][table[j][l]]:
                    raise InternalInconsistency("associativity fails")
    return GroupTable(elements, tuple(table), e, tuple(inverses))
