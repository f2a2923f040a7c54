"""Virtual clock for the discrete-event simulation."""

from __future__ import annotations


class VirtualClock:
    """Monotone millisecond clock; advances only via trace timestamps and
    explicit ticks, never wall time."""

    def __init__(self, start_ms: int = 0):
        self._now_ms = start_ms

    @property
    def now_ms(self) -> int:
        return self._now_ms

    def advance_to(self, t_ms: int) -> None:
        if t_ms < self._now_ms:
            raise ValueError(f"clock cannot move back: {t_ms} < {self._now_ms}")
        self._now_ms = t_ms
