"""Deterministic finite automata compiled from temporal formulas.

States are canonical residual formulas discovered by breadth-first
progression from the root formula; two trace prefixes that leave the
same residual obligation share a state.  Symbols are subsets of the
proposition set, addressed internally as bitmasks over the sorted
proposition list, which keeps the per-step transition to a single list
lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .formula import Formula, accepts_empty, atoms, progress, to_text

MAX_PROPOSITIONS = 6


class PropositionBudgetError(ValueError):
    """Compilation enumerates 2^|props| symbols; refuse oversized alphabets."""


@dataclass(frozen=True)
class Dfa:
    """Total deterministic automaton over subsets of ``props``.

    ``table[q][mask]`` is the successor of state ``q`` on the symbol
    whose true propositions are the set bits of ``mask`` (bit ``i``
    stands for ``props[i]``).  State 0 is the initial state.
    """

    props: tuple[str, ...]
    states: tuple[Formula, ...]
    table: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]
    traps: frozenset[int]
    accepting_sink: int | None = field(default=None)

    @property
    def initial(self) -> int:
        return 0

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_symbols(self) -> int:
        return 1 << len(self.props)

    def mask_of(self, true_props: Iterable[str]) -> int:
        members = set(true_props)
        mask = 0
        for i, p in enumerate(self.props):
            if p in members:
                mask |= 1 << i
        return mask

    def symbol_of(self, mask: int) -> frozenset[str]:
        return frozenset(p for i, p in enumerate(self.props) if mask >> i & 1)

    def step(self, state: int, mask: int) -> int:
        return self.table[state][mask]

    def is_trap(self, state: int) -> bool:
        return state in self.traps

    def is_nonaccepting_trap(self, state: int) -> bool:
        return state in self.traps and state not in self.accepting

    def run(self, symbols: Iterable[Iterable[str]]) -> int:
        """Final state after consuming a run of proposition sets."""
        q = 0
        for symbol in symbols:
            q = self.table[q][self.mask_of(symbol)]
        return q

    def accepts(self, symbols: Iterable[Iterable[str]]) -> bool:
        return self.run(symbols) in self.accepting

    def edges(self, state: int) -> Iterator[tuple[int, tuple[int, ...]]]:
        """Outgoing edges of ``state`` as (target, guard-masks) pairs.

        The guard of an edge is the set of symbols taking it; the guards
        of one state partition the full symbol space (determinism and
        totality hold by construction).
        """
        by_target: dict[int, list[int]] = {}
        for mask, target in enumerate(self.table[state]):
            by_target.setdefault(target, []).append(mask)
        for target in sorted(by_target):
            yield target, tuple(by_target[target])

    def describe(self) -> str:
        lines = [f"props: {', '.join(self.props)}"]
        for q, f in enumerate(self.states):
            marks = "".join(
                m for m, flag in (
                    (">", q == 0),
                    ("*", q in self.accepting),
                    ("#", q in self.traps),
                ) if flag
            )
            lines.append(f"{marks:>2} q{q}: {to_text(f)}")
        return "\n".join(lines)


def compile_dfa(f: Formula, props: Sequence[str] | None = None) -> Dfa:
    """Compile a canonical formula to a DFA by formula progression.

    ``props`` defaults to the formula's own atoms; it may list extra
    propositions but must cover every atom of ``f``.
    """
    own = atoms(f)
    if props is None:
        prop_list = sorted(own)
    else:
        prop_list = sorted(set(props))
        missing = own.difference(prop_list)
        if missing:
            raise ValueError(f"props missing formula atoms: {sorted(missing)}")
    if len(prop_list) > MAX_PROPOSITIONS:
        raise PropositionBudgetError(
            f"{len(prop_list)} propositions exceed the budget of {MAX_PROPOSITIONS}"
        )

    n_symbols = 1 << len(prop_list)
    symbols = [
        frozenset(p for i, p in enumerate(prop_list) if mask >> i & 1)
        for mask in range(n_symbols)
    ]

    index: dict[Formula, int] = {f: 0}
    states: list[Formula] = [f]
    rows: list[tuple[int, ...]] = []
    frontier = 0
    while frontier < len(states):
        state = states[frontier]
        row = []
        for symbol in symbols:
            nxt = progress(state, symbol)
            j = index.get(nxt)
            if j is None:
                j = len(states)
                index[nxt] = j
                states.append(nxt)
            row.append(j)
        rows.append(tuple(row))
        frontier += 1

    accepting = frozenset(q for q, g in enumerate(states) if accepts_empty(g))
    traps = frozenset(q for q in range(len(states)) if all(t == q for t in rows[q]))
    sink = _pick_accepting_sink(accepting, traps)
    return Dfa(
        props=tuple(prop_list),
        states=tuple(states),
        table=tuple(rows),
        accepting=accepting,
        traps=traps,
        accepting_sink=sink,
    )


def _pick_accepting_sink(accepting: frozenset[int], traps: frozenset[int]) -> int | None:
    """One designated accepting state, preferring an accepting trap."""
    accepting_traps = accepting & traps
    if accepting_traps:
        return min(accepting_traps)
    if accepting:
        return min(accepting)
    return None
