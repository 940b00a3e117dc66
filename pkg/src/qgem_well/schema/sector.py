# Standard Library
from enum import Enum


class Sector(str, Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"

    @property
    def sign(self) -> int:
        return 1 if self is Sector.SYMMETRIC else -1

    @property
    def short_label(self) -> str:
        return "s" if self is Sector.SYMMETRIC else "a"
