"""Nucleus automata: the input language, the action on words, and products.

A state ``g`` acts on a letter ``x`` by ``g(x)`` and leaves the restriction
``g|_x``; on words, ``g(xw) = g(x) g|_x(w)``.  Group words over the states are
kept as :data:`FormalProduct` tuples of ``(state, +1 | -1)`` pairs, with the
rightmost factor acting first, so that ``(gh)(x) = g(h(x))`` and
``(gh)|_x = g|_{h(x)} h|_x``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import graphs
from .errors import (
    DanglingRestriction,
    DslSyntaxError,
    DuplicateBisimilarStates,
    NoIdentity,
    NotAPermutation,
    NotContractedWithinBound,
)

Word = tuple  # tuple[int, ...]
Factor = tuple  # (state, +1 | -1)
FormalProduct = tuple  # tuple[Factor, ...]

DEFAULT_DEPTH = 10


class _Table:
    """Output and restriction tables shared by raw presentations and automata."""

    letters: tuple
    names: tuple
    outputs: tuple
    restrictions: tuple
    identity: Optional[int]

    @property
    def alphabet_size(self) -> int:
        return len(self.letters)

    @property
    def size(self) -> int:
        return len(self.names)

    @cached_property
    def _index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def inverse_outputs(self) -> tuple:
        inv = []
        for perm in self.outputs:
            row = [0] * len(perm)
            for x, y in enumerate(perm):
                row[y] = x
            inv.append(tuple(row))
        return tuple(inv)

    def state(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no state named {name!r}") from None

    def word(self, text: str | Sequence[str]) -> Word:
        """Convert letter tokens to a word; a string is read one character per letter."""
        index = {tok: i for i, tok in enumerate(self.letters)}
        return tuple(index[tok] for tok in text)

    def format_word(self, w: Word) -> str:
        if all(len(tok) == 1 for tok in self.letters):
            return "".join(self.letters[x] for x in w)
        return " ".join(self.letters[x] for x in w)


@dataclass(frozen=True, eq=False)
class Presentation(_Table):
    """Raw contents of an input file, checked for permutations and dangling names only."""

    letters: tuple
    names: tuple
    outputs: tuple
    restrictions: tuple
    identity: Optional[int] = None
    generators: Optional[tuple] = None

    def to_automaton(self) -> "NucleusAutomaton":
        return NucleusAutomaton(self.letters, self.names, self.outputs, self.restrictions, self.identity)


@dataclass(frozen=True, eq=False)
class NucleusAutomaton(_Table):
    """A validated nucleus: permutations, closed restrictions, an identity, no duplicate states.

    Passing ``identity=None`` infers the identity state.
    """

    letters: tuple
    names: tuple
    outputs: tuple
    restrictions: tuple
    identity: Optional[int] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "outputs", tuple(tuple(r) for r in self.outputs))
        object.__setattr__(self, "restrictions", tuple(tuple(r) for r in self.restrictions))
        _check_tables(self.letters, self.names, self.outputs, self.restrictions)
        k = len(self.letters)
        identity_perm = tuple(range(k))

        def is_identity(g):
            return self.outputs[g] == identity_perm and all(r == g for r in self.restrictions[g])

        if self.identity is None:
            found = [g for g in range(self.size) if is_identity(g)]
            if not found:
                raise NoIdentity("no state acts as the identity")
            object.__setattr__(self, "identity", found[0])
        elif not is_identity(self.identity):
            raise NoIdentity(f"declared identity {self.names[self.identity]!r} is not the identity")
        blocks = bisimulation_classes(self)
        seen = {}
        for g, b in enumerate(blocks):
            if b in seen:
                raise DuplicateBisimilarStates(self.names[seen[b]], self.names[g])
            seen[b] = g

    def __eq__(self, other):
        if not isinstance(other, NucleusAutomaton):
            return NotImplemented
        return (self.letters, self.names, self.outputs, self.restrictions, self.identity) == (
            other.letters, other.names, other.outputs, other.restrictions, other.identity)

    def __hash__(self):
        return hash((self.letters, self.names, self.outputs, self.restrictions, self.identity))

    def __repr__(self):
        return f"NucleusAutomaton({self.size} states over {list(self.letters)}, identity {self.names[self.identity]!r})"


def _check_tables(letters, names, outputs, restrictions):
    k = len(letters)
    for g, perm in enumerate(outputs):
        if sorted(perm) != list(range(k)):
            raise NotAPermutation(names[g], [letters[y] if 0 <= y < k else y for y in perm])
    n = len(names)
    for g, row in enumerate(restrictions):
        if len(row) != k:
            raise DanglingRestriction(names[g], row)
        for h in row:
            if not 0 <= h < n:
                raise DanglingRestriction(names[g], h)


def bisimulation_classes(t: _Table) -> list[int]:
    """Coarsest partition of the states into equal transformations (Moore refinement)."""
    k = t.alphabet_size
    block = [0] * t.size
    count = 1
    while True:
        signature = {}
        new = []
        for g in range(t.size):
            key = (block[g], t.outputs[g], tuple(block[t.restrictions[g][x]] for x in range(k)))
            new.append(signature.setdefault(key, len(signature)))
        if len(signature) == count:
            return new
        block, count = new, len(signature)


# ---------------------------------------------------------------------------
# action of states and words


def act_letter(a: _Table, g: int, x: int) -> tuple[int, int]:
    """Return ``(g(x), g|_x)``."""
    return a.outputs[g][x], a.restrictions[g][x]


def act_word(a: _Table, g: int, w: Iterable[int]) -> tuple[Word, int]:
    """Return ``(g(w), g|_w)``."""
    out = []
    for x in w:
        y, g = a.outputs[g][x], a.restrictions[g][x]
        out.append(y)
    return tuple(out), g


# ---------------------------------------------------------------------------
# formal products


def as_product(p) -> FormalProduct:
    """Accept a state id or an iterable of ``(state, exponent)`` pairs."""
    if isinstance(p, int):
        return ((p, 1),)
    return tuple((int(g), int(s)) for g, s in p)


def inverse(p: FormalProduct) -> FormalProduct:
    return tuple((g, -s) for g, s in reversed(p))


def normalize(a: _Table, p: Iterable[Factor]) -> FormalProduct:
    """Drop identity factors and cancel adjacent ``g g^-1`` pairs."""
    stack = []
    for g, s in p:
        if g == a.identity:
            continue
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def product_step(a: _Table, p: FormalProduct, x: int) -> tuple[int, FormalProduct]:
    """Return ``(p(x), p|_x)`` for a formal product, restriction normalized."""
    factors = []
    for g, s in reversed(p):
        if s > 0:
            y = a.outputs[g][x]
            r = a.restrictions[g][x]
        else:
            y = a.inverse_outputs[g][x]
            r = a.restrictions[g][y]
        factors.append((r, s))
        x = y
    factors.reverse()
    return x, normalize(a, factors)


def product_act_word(a: _Table, p, w: Iterable[int]) -> tuple[Word, FormalProduct]:
    p = as_product(p)
    out = []
    for x in w:
        y, p = product_step(a, p, x)
        out.append(y)
    return tuple(out), p


def bisimilar(a: _Table, p, q) -> bool:
    """Decide whether two formal products define the same transformation.

    Pairs of restrictions are explored depth first; a revisited pair is
    assumed equal, so the answer is the greatest fixpoint.
    """
    start = (normalize(a, as_product(p)), normalize(a, as_product(q)))
    seen = {start}
    todo = [start]
    k = a.alphabet_size
    while todo:
        u, v = todo.pop()
        if u == v:
            continue
        for x in range(k):
            y1, u1 = product_step(a, u, x)
            y2, v1 = product_step(a, v, x)
            if y1 != y2:
                return False
            pair = (u1, v1)
            if pair not in seen:
                seen.add(pair)
                todo.append(pair)
    return True


def identify_in_nucleus(a: NucleusAutomaton, p) -> Optional[int]:
    """The state equal to ``p`` as a transformation, or ``None`` if there is none."""
    p = normalize(a, as_product(p))
    if not p:
        return a.identity
    if len(p) == 1 and p[0][1] == 1:
        return p[0][0]
    for g in range(a.size):
        if bisimilar(a, p, ((g, 1),)):
            return g
    return None


# ---------------------------------------------------------------------------
# bounded nucleus computation

MAX_CLOSURE_STATES = 250_000


def _minimize(outs, res):
    """Moore refinement over a whole table; returns a block id per state."""
    n = len(outs)
    k = len(outs[0]) if n else 0
    block = [0] * n
    count = 1
    while True:
        signature = {}
        new = []
        for g in range(n):
            r = res[g]
            key = (block[g], outs[g], tuple(block[r[x]] for x in range(k)))
            new.append(signature.setdefault(key, len(signature)))
        if len(signature) == count:
            return new, count
        block, count = new, len(signature)


def _recurrent_quotient(a: _Table, outs, res, labels):
    """Merge equal states and keep the blocks reachable from a restriction cycle.

    Returns the reduced ``(outs, res, labels)``; ``labels`` holds, per block,
    the shortest formal product over the input states naming it.
    """
    block, count = _minimize(outs, res)
    k = a.alphabet_size
    q_outs = [None] * count
    q_res = [None] * count
    q_labels = [None] * count
    for g, b in enumerate(block):
        if q_outs[b] is None:
            q_outs[b] = outs[g]
            q_res[b] = tuple(block[res[g][x]] for x in range(k))
        if q_labels[b] is None or _label_rank(labels[g]) < _label_rank(q_labels[b]):
            q_labels[b] = labels[g]
    succ = [sorted(set(r)) for r in q_res]
    on_cycle = graphs.cyclic_vertices(count, succ)
    keep_flags = graphs.reachable_from(count, succ, [b for b in range(count) if on_cycle[b]])
    keep = [b for b in range(count) if keep_flags[b]]
    pos = {b: i for i, b in enumerate(keep)}
    return ([q_outs[b] for b in keep],
            [tuple(pos[r] for r in q_res[b]) for b in keep],
            [q_labels[b] for b in keep])


def _label_rank(p):
    return (len(p), sum(1 for _, s in p if s < 0), p)


def _join_labels(p, q):
    stack = list(p)
    for g, s in q:
        if stack and stack[-1] == (g, -s):
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def nucleus_closure(pres: _Table, depth_bound: int = DEFAULT_DEPTH,
                    generators: Optional[Sequence[str]] = None,
                    max_states: int = MAX_CLOSURE_STATES) -> NucleusAutomaton:
    """Compute the nucleus of the group generated by ``generators``.

    Starts from the recurrent part of the automaton of the generators, their
    inverses and the identity.  Each round adjoins the product automaton
    ``N x N``, merges equal states, and keeps the part reachable from a
    restriction cycle.  A round that adds no new state ends the search; after
    ``depth_bound`` rounds :class:`NotContractedWithinBound` is raised, as it
    is when a round would need more than ``max_states`` product states.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound must be at least 1")
    if generators is None:
        generators = getattr(pres, "generators", None) or pres.names
    gens = {pres.state(name) for name in generators}
    n, k = pres.size, pres.alphabet_size
    identity_perm = tuple(range(k))

    outs = list(pres.outputs)
    res = [tuple(r) for r in pres.restrictions]
    labels = [((g, 1),) for g in range(n)]
    for g in range(n):
        inv = pres.inverse_outputs[g]
        outs.append(inv)
        res.append(tuple(n + pres.restrictions[g][inv[x]] for x in range(k)))
        labels.append(((g, -1),))
    outs.append(identity_perm)
    res.append((2 * n,) * k)
    labels.append(())
    roots = [2 * n] + sorted(gens) + [n + g for g in sorted(gens)]
    live = graphs.reachable_from(len(outs), [sorted(set(r)) for r in res], roots)
    keep = [g for g in range(len(outs)) if live[g]]
    pos = {g: i for i, g in enumerate(keep)}
    outs = [outs[g] for g in keep]
    res = [tuple(pos[r] for r in res[g]) for g in keep]
    labels = [labels[g] for g in keep]
    outs, res, labels = _recurrent_quotient(pres, outs, res, labels)

    for _ in range(depth_bound):
        m = len(outs)
        if m + m * m > max_states:
            raise NotContractedWithinBound(depth_bound, m, capped=True)
        p_outs, p_res, p_labels = list(outs), list(res), list(labels)
        for g in range(m):
            for h in range(m):
                hout = outs[h]
                p_outs.append(tuple(outs[g][hout[x]] for x in range(k)))
                p_res.append(tuple(m + res[g][hout[x]] * m + res[h][x] for x in range(k)))
                p_labels.append(_join_labels(labels[g], labels[h]))
        outs, res, labels = _recurrent_quotient(pres, p_outs, p_res, p_labels)
        if len(outs) == m:
            return _automaton_from_tables(pres, outs, res, labels)
    raise NotContractedWithinBound(depth_bound, len(outs))


def is_nucleus(a: NucleusAutomaton) -> bool:
    """Whether ``a`` is exactly the nucleus of the group its states generate.

    Requires every state to be reachable from a restriction cycle, inverses
    to be present, and restrictions of pairwise products to eventually stay
    inside the state set.
    """
    n, k = a.size, a.alphabet_size
    succ = [sorted(set(r)) for r in a.restrictions]
    on_cycle = graphs.cyclic_vertices(n, succ)
    if not all(graphs.reachable_from(n, succ, [g for g in range(n) if on_cycle[g]])):
        return False
    outs = list(a.outputs) + list(a.inverse_outputs)
    res = list(a.restrictions) + [
        tuple(n + a.restrictions[g][a.inverse_outputs[g][x]] for x in range(k)) for g in range(n)
    ]
    block, _ = _minimize(outs, res)
    if not set(block[n:]) <= set(block[:n]):
        return False
    try:
        return nucleus_closure(a, 1).size == n
    except NotContractedWithinBound:
        return False


def _automaton_from_tables(pres: _Table, outs, res, labels) -> NucleusAutomaton:
    def order(i):
        lab = labels[i]
        if not lab:
            return (0, 0)
        if len(lab) == 1 and lab[0][1] == 1:
            return (1, lab[0][0])
        return (2, i)

    members = sorted(range(len(outs)), key=order)
    position = {c: i for i, c in enumerate(members)}
    if pres.identity is not None:
        identity_name = pres.names[pres.identity]
    else:
        identity_name = next(
            (pres.names[g] for g in range(pres.size)
             if pres.outputs[g] == tuple(range(pres.alphabet_size))
             and all(r == g for r in pres.restrictions[g])),
            "e")
    names, used = [], set()
    for c in members:
        lab = labels[c]
        if not lab:
            name = identity_name
        else:
            name = "*".join(pres.names[g] + ("" if s > 0 else "^-1") for g, s in lab)
        while name in used:
            name += "'"
        used.add(name)
        names.append(name)
    identity = next(position[c] for c in members if not labels[c])
    return NucleusAutomaton(
        pres.letters, names,
        [outs[c] for c in members],
        [tuple(position[r] for r in res[c]) for c in members],
        identity,
    )


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"(->)|([:.,])|([^\s:.,#\->]+(?:-[^\s:.,#\->]+)*)|(\S)")


def _tokens(line: str, lineno: int):
    out = []
    for m in _TOKEN.finditer(line):
        col = m.start() + 1
        if m.group(4) is not None:
            raise DslSyntaxError(f"unexpected character {m.group(4)!r}", lineno, col)
        out.append((m.group(0), col))
    return out


def read_presentation(text: str) -> Presentation:
    """Parse the text format without the nucleus checks (identity, duplicates)."""
    letters = None
    identity_name = identity_pos = None
    generators = None
    states: list[tuple[str, dict, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line, lineno)
        if not toks:
            continue
        head, col = toks[0]
        rest = toks[1:]
        if head == "alphabet":
            if letters is not None:
                raise DslSyntaxError("alphabet declared twice", lineno, col)
            if states:
                raise DslSyntaxError("alphabet must precede the states", lineno, col)
            letters = []
            for tok, c in rest:
                if not _is_word(tok):
                    raise DslSyntaxError(f"bad letter token {tok!r}", lineno, c)
                if tok in letters:
                    raise DslSyntaxError(f"letter {tok!r} repeated", lineno, c)
                letters.append(tok)
            if len(letters) < 2:
                raise DslSyntaxError("the alphabet needs at least two letters", lineno, col)
        elif head == "identity":
            if len(rest) != 1 or not _is_word(rest[0][0]):
                raise DslSyntaxError("expected: identity <name>", lineno, col)
            identity_name, identity_pos = rest[0][0], (lineno, rest[0][1])
        elif head == "generators":
            if not rest or not all(_is_word(t) for t, _ in rest):
                raise DslSyntaxError("expected: generators <name> ...", lineno, col)
            generators = tuple(t for t, _ in rest)
        elif head == "state":
            if letters is None:
                raise DslSyntaxError("state declared before the alphabet", lineno, col)
            states.append(_parse_state(rest, letters, lineno, col))
        else:
            raise DslSyntaxError(f"unknown directive {head!r}", lineno, col)
    if letters is None:
        raise DslSyntaxError("missing alphabet declaration", 1, 1)
    if not states:
        raise DslSyntaxError("no states declared", 1, 1)
    names = [s[0] for s in states]
    index = {}
    for name, _, lineno, col in states:
        if name in index:
            raise DslSyntaxError(f"state {name!r} declared twice", lineno, col)
        index[name] = len(index)
    outputs, restrictions = [], []
    for name, clauses, _, _ in states:
        outputs.append(tuple(clauses[x][0] for x in range(len(letters))))
        row = []
        for x in range(len(letters)):
            target = clauses[x][1]
            if target not in index:
                raise DanglingRestriction(name, target)
            row.append(index[target])
        restrictions.append(tuple(row))
    _check_tables(letters, names, outputs, restrictions)
    identity = None
    if identity_name is not None:
        if identity_name not in index:
            raise DslSyntaxError(f"identity {identity_name!r} is not a declared state", *identity_pos)
        identity = index[identity_name]
    if generators is not None:
        for g in generators:
            if g not in index:
                raise DanglingRestriction("generators", g)
    return Presentation(tuple(letters), tuple(names), tuple(outputs), tuple(restrictions), identity, generators)


def _is_word(tok: str) -> bool:
    return tok not in ("->", ":", ".", ",")


def _parse_state(toks, letters, lineno, col):
    def expect(i, what):
        if i >= len(toks):
            end = toks[-1][1] + len(toks[-1][0]) if toks else col + len("state")
            raise DslSyntaxError(f"expected {what}", lineno, end)
        return toks[i]

    name, ncol = expect(0, "state name")
    if not _is_word(name):
        raise DslSyntaxError("expected state name", lineno, ncol)
    tok, c = expect(1, "':'")
    if tok != ":":
        raise DslSyntaxError("expected ':' after the state name", lineno, c)
    letter_index = {t: i for i, t in enumerate(letters)}
    clauses = {}
    i = 2
    while True:
        src, c = expect(i, "letter")
        if src not in letter_index:
            raise DslSyntaxError(f"unknown letter {src!r}", lineno, c)
        if letter_index[src] in clauses:
            raise DslSyntaxError(f"second clause for letter {src!r}", lineno, c)
        tok, c2 = expect(i + 1, "'->'")
        if tok != "->":
            raise DslSyntaxError("expected '->'", lineno, c2)
        dst, c3 = expect(i + 2, "letter")
        if dst not in letter_index:
            raise DslSyntaxError(f"unknown letter {dst!r}", lineno, c3)
        tok, c4 = expect(i + 3, "'.'")
        if tok != ".":
            raise DslSyntaxError("expected '.'", lineno, c4)
        target, c5 = expect(i + 4, "state name")
        if not _is_word(target):
            raise DslSyntaxError("expected state name", lineno, c5)
        clauses[letter_index[src]] = (letter_index[dst], target)
        i += 5
        if i == len(toks):
            break
        tok, c6 = toks[i]
        if tok != ",":
            raise DslSyntaxError("expected ',' between clauses", lineno, c6)
        i += 1
    if len(clauses) != len(letters):
        missing = [letters[x] for x in range(len(letters)) if x not in clauses]
        raise DslSyntaxError(f"state {name!r} has no clause for {missing}", lineno, ncol)
    return name, clauses, lineno, ncol


def parse_presentation(text: str, depth_bound: int = DEFAULT_DEPTH) -> NucleusAutomaton:
    """Parse and validate a nucleus; a ``generators`` line computes the nucleus instead."""
    pres = read_presentation(text)
    if pres.generators is not None:
        return nucleus_closure(pres, depth_bound)
    return pres.to_automaton()


def serialize(a: NucleusAutomaton) -> str:
    lines = ["alphabet " + " ".join(a.letters), f"identity {a.names[a.identity]}"]
    for g, name in enumerate(a.names):
        clauses = ", ".join(
            f"{a.letters[x]} -> {a.letters[a.outputs[g][x]]} . {a.names[a.restrictions[g][x]]}"
            for x in range(a.alphabet_size)
        )
        lines.append(f"state {name} : {clauses}")
    return "\n".join(lines) + "\n"
