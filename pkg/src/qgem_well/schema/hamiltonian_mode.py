# Standard Library
from enum import Enum


class HamiltonianMode(str, Enum):
    COUPLED = "coupled"
    FREE = "free"
    NONE = "none"
