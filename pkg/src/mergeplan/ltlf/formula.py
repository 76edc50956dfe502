"""Finite-trace temporal formulas: AST, canonicalization, and progression.

Formulas are interpreted over finite traces of proposition sets.  The
automaton construction in :mod:`mergeplan.ltlf.dfa` discovers states by
repeatedly progressing a formula against observed symbols, so everything
here is geared toward producing small, structurally canonical residuals:
negation pushed to atoms, n-ary conjunction/disjunction with sorted and
deduplicated children, and constants folded wherever that is sound for
the empty-suffix semantics implemented by :func:`accepts_empty`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class FormulaError(ValueError):
    """Raised for formulas outside what this engine can represent."""


class Formula:
    """Base class for formula nodes. Instances are immutable and hashable."""

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    """Atomic proposition, e.g. ``sd_front`` or agent-slotted ``idf#j``."""

    name: str


@dataclass(frozen=True, repr=False)
class TrueF(Formula):
    pass


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True, repr=False)
class Or(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, repr=False)
class Next(Formula):
    child: Formula


@dataclass(frozen=True, repr=False)
class Until(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, repr=False)
class Globally(Formula):
    child: Formula


@dataclass(frozen=True, repr=False)
class Finally(Formula):
    child: Formula


TRUE = TrueF()
FALSE = FalseF()


# ---------------------------------------------------------------------------
# printing

_LEVEL_IMPLIES = 0
_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_UNTIL = 3
_LEVEL_UNARY = 4
_LEVEL_ATOM = 5


def _text(f: Formula, parent_level: int) -> str:
    match f:
        case Atom(name):
            return name
        case TrueF():
            return "true"
        case FalseF():
            return "false"
        case Not(child):
            return "!" + _text(child, _LEVEL_UNARY)
        case Next(child):
            return "X " + _text(child, _LEVEL_UNARY)
        case Globally(child):
            return "G " + _text(child, _LEVEL_UNARY)
        case Finally(child):
            return "F " + _text(child, _LEVEL_UNARY)
        case And(children):
            body = " & ".join(_text(c, _LEVEL_AND) for c in children)
            return body if parent_level <= _LEVEL_AND else f"({body})"
        case Or(children):
            body = " | ".join(_text(c, _LEVEL_OR) for c in children)
            return body if parent_level <= _LEVEL_OR else f"({body})"
        case Until(lhs, rhs):
            body = f"{_text(lhs, _LEVEL_UNTIL + 1)} U {_text(rhs, _LEVEL_UNTIL)}"
            return body if parent_level <= _LEVEL_UNTIL else f"({body})"
        case Implies(lhs, rhs):
            body = f"{_text(lhs, _LEVEL_IMPLIES + 1)} -> {_text(rhs, _LEVEL_IMPLIES)}"
            return body if parent_level <= _LEVEL_IMPLIES else f"({body})"
    raise TypeError(f"unknown formula node: {f!r}")


def to_text(f: Formula) -> str:
    """Render a formula in the concrete syntax accepted by the parser."""
    return _text(f, _LEVEL_IMPLIES)


# ---------------------------------------------------------------------------
# canonicalization

def nnf(f: Formula) -> Formula:
    """Eliminate implications and push negation down to atoms.

    ``!X p`` is rewritten to ``X !p`` (the strong reading of a negated
    next, matching :func:`accepts_empty` treating any ``X`` obligation as
    unmet on the empty suffix).  Negation over ``U`` has no dual in the
    supported node set and is rejected.
    """
    match f:
        case Atom() | TrueF() | FalseF():
            return f
        case Not(child):
            return _nnf_neg(child)
        case And(children):
            return And(tuple(nnf(c) for c in children))
        case Or(children):
            return Or(tuple(nnf(c) for c in children))
        case Implies(lhs, rhs):
            return Or((_nnf_neg(lhs), nnf(rhs)))
        case Next(child):
            return Next(nnf(child))
        case Globally(child):
            return Globally(nnf(child))
        case Finally(child):
            return Finally(nnf(child))
        case Until(lhs, rhs):
            return Until(nnf(lhs), nnf(rhs))
    raise TypeError(f"unknown formula node: {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    match f:
        case Atom():
            return Not(f)
        case TrueF():
            return FALSE
        case FalseF():
            return TRUE
        case Not(child):
            return nnf(child)
        case And(children):
            return Or(tuple(_nnf_neg(c) for c in children))
        case Or(children):
            return And(tuple(_nnf_neg(c) for c in children))
        case Implies(lhs, rhs):
            return And((nnf(lhs), _nnf_neg(rhs)))
        case Next(child):
            return Next(_nnf_neg(child))
        case Globally(child):
            return Finally(_nnf_neg(child))
        case Finally(child):
            return Globally(_nnf_neg(child))
        case Until():
            raise FormulaError("negation over 'U' is not representable here")
    raise TypeError(f"unknown formula node: {f!r}")


def _flatten(kind: type, children: Iterable[Formula]) -> Iterator[Formula]:
    for c in children:
        if isinstance(c, kind):
            yield from c.children  # type: ignore[attr-defined]
        else:
            yield c


def _make_and(children: Iterable[Formula]) -> Formula:
    seen: dict[Formula, None] = {}
    for c in _flatten(And, children):
        if isinstance(c, FalseF):
            return FALSE
        if isinstance(c, TrueF):
            continue
        seen.setdefault(c, None)
    if not seen:
        return TRUE
    if len(seen) == 1:
        return next(iter(seen))
    return And(tuple(sorted(seen, key=to_text)))


def _make_or(children: Iterable[Formula]) -> Formula:
    seen: dict[Formula, None] = {}
    for c in _flatten(Or, children):
        if isinstance(c, TrueF):
            return TRUE
        if isinstance(c, FalseF):
            continue
        seen.setdefault(c, None)
    if not seen:
        return FALSE
    if len(seen) == 1:
        return next(iter(seen))
    return Or(tuple(sorted(seen, key=to_text)))


def simplify(f: Formula) -> Formula:
    """Flatten, sort, deduplicate and constant-fold an NNF formula.

    Only folds that preserve the empty-suffix semantics are applied;
    notably ``X true``, ``G false`` and ``F true`` are NOT constants
    (they distinguish empty from non-empty suffixes) and stay symbolic.
    """
    match f:
        case Atom() | TrueF() | FalseF() | Not():
            return f
        case And(children):
            return _make_and(simplify(c) for c in children)
        case Or(children):
            return _make_or(simplify(c) for c in children)
        case Next(child):
            child = simplify(child)
            return FALSE if isinstance(child, FalseF) else Next(child)
        case Globally(child):
            child = simplify(child)
            return TRUE if isinstance(child, TrueF) else Globally(child)
        case Finally(child):
            child = simplify(child)
            return FALSE if isinstance(child, FalseF) else Finally(child)
        case Until(lhs, rhs):
            lhs, rhs = simplify(lhs), simplify(rhs)
            if isinstance(rhs, FalseF):
                return FALSE
            if isinstance(lhs, FalseF):
                return rhs
            if isinstance(lhs, TrueF):
                return Finally(rhs)
            return Until(lhs, rhs)
    raise TypeError(f"unknown formula node: {f!r}")


def canonical(f: Formula) -> Formula:
    """NNF plus structural normalization; the form used for DFA states."""
    return simplify(nnf(f))


# ---------------------------------------------------------------------------
# semantics

def progress(f: Formula, symbol: frozenset[str] | set[str]) -> Formula:
    """Residual obligation on the remaining suffix after observing ``symbol``.

    The input must be canonical; the result is canonical.  Total: every
    canonical formula progresses against every symbol.
    """
    match f:
        case Atom(name):
            return TRUE if name in symbol else FALSE
        case TrueF() | FalseF():
            return f
        case Not(Atom(name)):
            return FALSE if name in symbol else TRUE
        case And(children):
            return _make_and(progress(c, symbol) for c in children)
        case Or(children):
            return _make_or(progress(c, symbol) for c in children)
        case Next(child):
            return child
        case Globally(child):
            return _make_and((progress(child, symbol), f))
        case Finally(child):
            return _make_or((progress(child, symbol), f))
        case Until(lhs, rhs):
            stay = _make_and((progress(lhs, symbol), f))
            return _make_or((progress(rhs, symbol), stay))
    raise FormulaError(f"cannot progress non-canonical formula: {f!r}")


def accepts_empty(f: Formula) -> bool:
    """Whether the empty suffix satisfies ``f``.

    Atoms and ``X``/``F``/``U`` obligations are unmet on the empty
    suffix, ``G`` is vacuously met, booleans recurse.
    """
    match f:
        case Atom():
            return False
        case TrueF():
            return True
        case FalseF():
            return False
        case Not(child):
            return not accepts_empty(child)
        case And(children):
            return all(accepts_empty(c) for c in children)
        case Or(children):
            return any(accepts_empty(c) for c in children)
        case Next():
            return False
        case Globally():
            return True
        case Finally():
            return False
        case Until():
            return False
    raise FormulaError(f"cannot evaluate non-canonical formula: {f!r}")


def atoms(f: Formula) -> frozenset[str]:
    """All proposition names occurring in the formula."""
    out: set[str] = set()
    _collect_atoms(f, out)
    return frozenset(out)


def _collect_atoms(f: Formula, out: set[str]) -> None:
    match f:
        case Atom(name):
            out.add(name)
        case TrueF() | FalseF():
            pass
        case Not(child) | Next(child) | Globally(child) | Finally(child):
            _collect_atoms(child, out)
        case And(children) | Or(children):
            for c in children:
                _collect_atoms(c, out)
        case Until(lhs, rhs) | Implies(lhs, rhs):
            _collect_atoms(lhs, out)
            _collect_atoms(rhs, out)


# ---------------------------------------------------------------------------
# agent slots

def slot_of(name: str) -> str | None:
    """Return the agent-slot suffix of a proposition name, if symbolic.

    ``idf#j`` has slot ``j``; ``idf#3`` is already grounded (numeric
    suffix) and ``sd_front`` has no slot.
    """
    base, sep, suffix = name.partition("#")
    if not sep or suffix.isdigit():
        return None
    return suffix


def slots(f: Formula) -> frozenset[str]:
    return frozenset(s for a in atoms(f) if (s := slot_of(a)) is not None)


def bind_agent(f: Formula, agent_id: int) -> Formula:
    """Substitute every symbolic ``#slot`` suffix with a concrete agent id."""

    def sub(g: Formula) -> Formula:
        match g:
            case Atom(name):
                if slot_of(name) is not None:
                    return Atom(name.partition("#")[0] + f"#{agent_id}")
                return g
            case TrueF() | FalseF():
                return g
            case Not(child):
                return Not(sub(child))
            case Next(child):
                return Next(sub(child))
            case Globally(child):
                return Globally(sub(child))
            case Finally(child):
                return Finally(sub(child))
            case And(children):
                return And(tuple(sub(c) for c in children))
            case Or(children):
                return Or(tuple(sub(c) for c in children))
            case Until(lhs, rhs):
                return Until(sub(lhs), sub(rhs))
            case Implies(lhs, rhs):
                return Implies(sub(lhs), sub(rhs))
        raise TypeError(f"unknown formula node: {g!r}")

    return sub(f)


# ---------------------------------------------------------------------------
# obligation fragment

def _body_in_fragment(f: Formula) -> bool:
    match f:
        case Atom() | TrueF() | FalseF():
            return True
        case Not(Atom()):
            return True
        case Not(child):
            return _body_in_fragment(child)
        case And(children) | Or(children):
            return all(_body_in_fragment(c) for c in children)
        case Next(child):
            return _body_in_fragment(child)
        case Implies(lhs, rhs):
            return _body_in_fragment(lhs) and _body_in_fragment(rhs)
    return False


def obligation_kind(f: Formula) -> str:
    """Classify an obligation formula as ``"safety"`` or ``"guarantee"``.

    Safety formulas have top-level shape ``G p``, guarantees ``F p``,
    where ``p`` contains only atoms, boolean operators and ``X``.
    Anything else raises :class:`FormulaError`.
    """
    g = nnf(f)
    match g:
        case Globally(body):
            kind = "safety"
        case Finally(body):
            kind = "guarantee"
        case _:
            raise FormulaError(
                f"not an obligation formula (expected 'G ...' or 'F ...'): {to_text(f)}"
            )
    if not _body_in_fragment(body):
        raise FormulaError(
            f"obligation body may only use atoms, booleans and X: {to_text(f)}"
        )
    return kind
