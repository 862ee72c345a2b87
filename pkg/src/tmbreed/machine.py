"""Binary-alphabet Turing machines: text format, hashing, solo runs, random draws.

A machine is a partial transition table over working states 1..n and tape
symbols {0, 1}. State 0 is the halt state; there is no stay move. The tape is
two-way unbounded and blank-zero, represented as the set of positions that
hold a 1, so memory tracks writes rather than steps.

Text format, one rule per line::

    q a -> w d q'

with ``q`` in 1..n, ``a``/``w`` in {0, 1}, ``d`` in {L, R} and ``q'`` in 0..n.
An optional first line ``states n`` declares the state count; without it, n
is inferred as the largest state mentioned. Blank lines and ``#`` comments
are ignored. The canonical form sorts rules by (state, symbol) and emits the
``states`` header only when the rules alone would understate n.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .rand import SplitMix64

HALT_STATE = 0
SYMBOLS = (0, 1)
MOVES = ("L", "R")


class MachineParseError(ValueError):
    """Raised on malformed machine text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Action:
    """Rule right-hand side: write a symbol, move one cell, switch state."""

    write: int
    move: str
    next_state: int


@dataclass(frozen=True)
class Rule:
    """A full transition: (state, scanned symbol) -> Action."""

    lhs: tuple[int, int]
    rhs: Action


class Machine:
    """Immutable machine; the id hashes the canonical text, so equal tables
    share an id no matter how the rules were written down."""

    __slots__ = ("n_states", "table", "name", "text", "id")

    def __init__(self, n_states: int, table: dict[tuple[int, int], Action],
                 name: str | None = None):
        if n_states < 1:
            raise ValueError("n_states must be >= 1")
        for (q, a), act in table.items():
            if not 1 <= q <= n_states:
                raise ValueError(f"rule state {q} outside 1..{n_states}")
            if a not in SYMBOLS:
                raise ValueError(f"rule symbol {a} outside {{0, 1}}")
            if act.write not in SYMBOLS:
                raise ValueError(f"write symbol {act.write} outside {{0, 1}}")
            if act.move not in MOVES:
                raise ValueError(f"move {act.move!r} is not L or R")
            if not 0 <= act.next_state <= n_states:
                raise ValueError(
                    f"next state {act.next_state} outside 0..{n_states}")
        self.n_states = n_states
        self.table = dict(table)
        self.name = name
        self.text = _canonical_text(n_states, self.table)
        self.id = hashlib.sha256(self.text.encode()).hexdigest()[:16]

    def rules(self) -> list[Rule]:
        return [Rule(lhs, self.table[lhs]) for lhs in sorted(self.table)]

    def __eq__(self, other):
        if not isinstance(other, Machine):
            return NotImplemented
        return self.n_states == other.n_states and self.table == other.table

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        label = self.name or self.id
        return f"Machine({label}, states={self.n_states}, rules={len(self.table)})"


def _canonical_text(n_states: int, table: dict[tuple[int, int], Action]) -> str:
    mentioned = 1
    for (q, _), act in table.items():
        mentioned = max(mentioned, q, act.next_state)
    lines = []
    if mentioned < n_states or not table:
        lines.append(f"states {n_states}")
    for (q, a) in sorted(table):
        act = table[(q, a)]
        lines.append(f"{q} {a} -> {act.write} {act.move} {act.next_state}")
    return "\n".join(lines) + "\n"


def canonical_text(machine: Machine) -> str:
    """Canonical text form; ``parse_machine`` round-trips it exactly."""
    return machine.text


def parse_machine(text: str, name: str | None = None) -> Machine:
    """Parse machine text into a Machine, reporting errors by line number."""
    declared: int | None = None
    entries: dict[tuple[int, int], Action] = {}
    lhs_line: dict[tuple[int, int], int] = {}
    saw_rule = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "states":
            if saw_rule or declared is not None:
                raise MachineParseError(
                    "states header must be the first line", lineno)
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise MachineParseError(
                    "states header needs one positive integer", lineno)
            declared = int(parts[1])
            continue
        if len(parts) != 6 or parts[2] != "->":
            raise MachineParseError(
                f"expected 'q a -> w d q\\'', got {line!r}", lineno)
        q_s, a_s, _, w_s, d_s, q2_s = parts
        try:
            q = int(q_s)
        except ValueError:
            raise MachineParseError(f"state {q_s!r} is not an integer", lineno)
        if q < 1:
            raise MachineParseError(f"state {q} out of range (min 1)", lineno)
        if a_s not in ("0", "1"):
            raise MachineParseError(
                f"symbol {a_s!r} outside alphabet {{0, 1}}", lineno)
        if w_s not in ("0", "1"):
            raise MachineParseError(
                f"write symbol {w_s!r} outside alphabet {{0, 1}}", lineno)
        if d_s not in MOVES:
            raise MachineParseError(f"direction {d_s!r} is not L or R", lineno)
        try:
            q2 = int(q2_s)
        except ValueError:
            raise MachineParseError(f"state {q2_s!r} is not an integer", lineno)
        if q2 < 0:
            raise MachineParseError(f"next state {q2} out of range (min 0)",
                                    lineno)
        lhs = (q, int(a_s))
        if lhs in entries:
            raise MachineParseError(
                f"duplicate rule for state {q} symbol {a_s}"
                f" (first at line {lhs_line[lhs]})", lineno)
        entries[lhs] = Action(int(w_s), d_s, q2)
        lhs_line[lhs] = lineno
        saw_rule = True
    mentioned = 0
    for (q, _), act in entries.items():
        mentioned = max(mentioned, q, act.next_state)
    if declared is None:
        if not entries:
            raise MachineParseError("no rules and no states header")
        n_states = mentioned
    else:
        n_states = declared
        if mentioned > declared:
            bad = [ln for lhs, ln in lhs_line.items()
                   if lhs[0] > declared
                   or entries[lhs].next_state > declared]
            raise MachineParseError(
                f"state {mentioned} exceeds declared count {declared}",
                min(bad) if bad else None)
    return Machine(n_states, entries, name=name)


class SingleRunResult(NamedTuple):
    halted: bool
    steps: int
    ones: int


def run_single(machine: Machine, budget: int) -> SingleRunResult:
    """Run solo from state 1 on a blank tape.

    Halts on a transition into state 0 (that transition counts as a step)
    or on an undefined (state, symbol) entry. Budget exhaustion reports
    halted=False with steps=budget; it is a result, not an error.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    table = machine.table
    ones: set[int] = set()
    head = 0
    state = 1
    steps = 0
    while steps < budget:
        sym = 1 if head in ones else 0
        act = table.get((state, sym))
        if act is None:
            return SingleRunResult(True, steps, len(ones))
        if act.write:
            ones.add(head)
        else:
            ones.discard(head)
        head += 1 if act.move == "R" else -1
        state = act.next_state
        steps += 1
        if state == HALT_STATE:
            return SingleRunResult(True, steps, len(ones))
    return SingleRunResult(False, budget, len(ones))


def random_machine(n_states: int, rng: SplitMix64,
                   name: str | None = None) -> Machine:
    """Full-table machine with every action drawn uniformly.

    Draw order is fixed (states ascending, symbol 0 then 1; write, move,
    next state within each action) so a given rng state always yields the
    same machine.
    """
    if n_states < 1:
        raise ValueError("n_states must be >= 1")
    table: dict[tuple[int, int], Action] = {}
    for q in range(1, n_states + 1):
        for a in SYMBOLS:
            write = rng.randbelow(2)
            move = MOVES[rng.randbelow(2)]
            next_state = rng.randbelow(n_states + 1)
            table[(q, a)] = Action(write, move, next_state)
    return Machine(n_states, table, name=name)


COLLECTION_FORMAT = "machine-collection/1"


def collection_to_doc(machines: Iterable[Machine]) -> dict:
    return {
        "format": COLLECTION_FORMAT,
        "machines": [{"name": m.name, "text": m.text} for m in machines],
    }


def collection_from_doc(doc: dict) -> list[Machine]:
    if not isinstance(doc, dict) or "machines" not in doc:
        raise ValueError("machine collection document needs a 'machines' array")
    out = []
    for i, entry in enumerate(doc["machines"]):
        if "text" not in entry:
            raise ValueError(f"collection entry {i} has no 'text'")
        out.append(parse_machine(entry["text"], name=entry.get("name")))
    return out


def save_collection(path, machines: Iterable[Machine]) -> None:
    with open(path, "w") as fh:
        json.dump(collection_to_doc(machines), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_collection(path) -> list[Machine]:
    with open(path) as fh:
        return collection_from_doc(json.load(fh))


def machines_by_id(machines: Iterable[Machine]) -> dict[str, Machine]:
    return {m.id: m for m in machines}
