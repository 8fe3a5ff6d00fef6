from enum import Enum


class MorphismKind(str, Enum):
    WEAK = "weak"
    WHITE = "white"
    BLACK = "black"
    STRONG = "strong"

    @property
    def forth(self) -> bool:
        return self in (MorphismKind.WHITE, MorphismKind.STRONG)

    @property
    def back(self) -> bool:
        return self in (MorphismKind.BLACK, MorphismKind.STRONG)


class CongruenceKind(str, Enum):
    WHITE = "white"
    BLACK = "black"
    STRONG = "strong"

    @property
    def white(self) -> bool:
        return self in (CongruenceKind.WHITE, CongruenceKind.STRONG)

    @property
    def black(self) -> bool:
        return self in (CongruenceKind.BLACK, CongruenceKind.STRONG)

    def as_morphism_kind(self) -> MorphismKind:
        return MorphismKind(self.value)


class Colour(str, Enum):
    WHITE = "white"
    BLACK = "black"
    BI = "bi"
