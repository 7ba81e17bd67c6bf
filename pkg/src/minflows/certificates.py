"""Verdict records produced by every verifier."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Certificate:
    """Outcome of one named check.

    ``results`` maps each sub-claim to pass/fail; ``witnesses`` holds
    counterexamples (JSON-ready) for the failing ones.
    """

    check: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    stage: int | None = None
    results: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    millis: float | None = None

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def __bool__(self):
        return self.passed

    def record(self, name: str, ok: bool, witness=None) -> bool:
        ok = bool(ok)
        # a repeated sub-claim fails if any instance fails
        self.results[name] = self.results.get(name, True) and ok
        if not ok and witness is not None and name not in self.witnesses:
            self.witnesses[name] = witness
        return ok

    def failures(self) -> list[str]:
        return [k for k, v in self.results.items() if not v]

    def to_record(self, with_timing=False) -> dict:
        return {
            "check": self.check,
            "stage": self.stage,
            "params": self.params,
            "seed": self.seed,
            "pass": self.passed,
            "results": self.results,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "millis": round(self.millis, 3) if (with_timing and self.millis is not None) else None,
        }


@contextmanager
def timed(cert: Certificate):
    start = time.perf_counter()
    try:
        yield cert
    finally:
        cert.millis = (time.perf_counter() - start) * 1000.0
