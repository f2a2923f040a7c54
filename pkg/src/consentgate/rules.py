"""Conditional rule identifiers: four preconditions gate session start,
two ongoing conditions must hold while a session runs, three exit
conditions must hold at teardown."""

from __future__ import annotations

from enum import Enum

from .world import OperationKind


class RuleKind(str, Enum):
    PRE = "Pre"
    ONGOING = "Ongoing"
    EXIT = "Exit"


class RuleId(str, Enum):
    P1 = "P1"  # user interacted with the charged app for this (op, device)
    P2 = "P2"  # request arrived through the operation's fixed service
    P3 = "P3"  # a monitor-generated pending message was displayed
    P4 = "P4"  # user approved via the confirm gesture
    O1 = "O1"  # ongoing message stays in the display rotation
    O2 = "O2"  # session is present in the authorized log
    E1 = "E1"  # devices released at termination
    E2 = "E2"  # termination written to the log
    E3 = "E3"  # termination rendered on the status bar

    @property
    def kind(self) -> RuleKind:
        if self.value.startswith("P"):
            return RuleKind.PRE
        if self.value.startswith("O"):
            return RuleKind.ONGOING
        return RuleKind.EXIT


PRECONDITIONS = (RuleId.P1, RuleId.P2, RuleId.P3, RuleId.P4)
ONGOING_RULES = (RuleId.O1, RuleId.O2)
EXIT_RULES = (RuleId.E1, RuleId.E2, RuleId.E3)


def rules_for(op: OperationKind) -> tuple[RuleId, ...]:
    """Rule set selected for an operation. One universal set covers every
    device operation; the store is keyed by operation so per-operation sets
    remain possible."""
    return PRECONDITIONS + ONGOING_RULES + EXIT_RULES
