"""Three-valued verdicts for the seven combination properties.

A verdict of Yes or No always carries the name of the rule that produced it;
Unknown carries the reason the rules could not decide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Judgment:
    verdict: Verdict
    rule: str

    def __str__(self) -> str:
        return f"{self.verdict} [{self.rule}]"


def yes(rule: str) -> Judgment:
    return Judgment(Verdict.YES, rule)


def no(rule: str) -> Judgment:
    return Judgment(Verdict.NO, rule)


def unknown(rule: str) -> Judgment:
    return Judgment(Verdict.UNKNOWN, rule)


PROPERTY_KEYS = ("SI", "SM", "FW", "SW", "FMP", "CF", "G")

PROPERTY_NAMES = {
    "SI": "stably infinite",
    "SM": "smooth",
    "FW": "finitely witnessable",
    "SW": "strongly finitely witnessable",
    "FMP": "finite model property",
    "CF": "computable minimal model function",
    "G": "gentle",
}


@dataclass(frozen=True)
class PropertyVector:
    si: Judgment
    sm: Judgment
    fw: Judgment
    sw: Judgment
    fmp: Judgment
    cf: Judgment
    g: Judgment

    def __getitem__(self, key: str) -> Judgment:
        try:
            return getattr(self, key.lower())
        except AttributeError:
            raise KeyError(key) from None

    def items(self) -> Iterator[tuple[str, Judgment]]:
        for key in PROPERTY_KEYS:
            yield key, self[key]

    def replace(self, key: str, judgment: Judgment) -> "PropertyVector":
        values = {k.lower(): j for k, j in self.items()}
        values[key.lower()] = judgment
        return PropertyVector(**values)

    def __str__(self) -> str:
        return " ".join(f"{k}={self[k].verdict}" for k in PROPERTY_KEYS)
