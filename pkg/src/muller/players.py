from enum import Enum


class Owner(str, Enum):
    EVE = "eve"
    ADAM = "adam"
    RANDOM = "random"

    @property
    def opponent(self) -> "Owner":
        if self is Owner.EVE:
            return Owner.ADAM
        if self is Owner.ADAM:
            return Owner.EVE
        raise ValueError("random states have no opponent")


EVE = Owner.EVE
ADAM = Owner.ADAM
RANDOM = Owner.RANDOM
