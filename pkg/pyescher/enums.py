from enum import Enum


class Relation(Enum):
    PREC = "Prec"
    SUCC = "Succ"
    INTERSECT = "Intersect"


class SubEscherCase(Enum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


class Purity(Enum):
    NOT_PURE = "NotPure"
    PURE_PLUS = "PurePlus"
    PURE_MINUS = "PureMinus"


class KAnchor(Enum):
    """Where phi starts the k-Escher inside the window [L+1, L+k]."""

    ZERO_MOD_K = "q=0 mod k"
    WINDOW_START = "q=L+1"


class NAnchor(Enum):
    """Where phi starts the n-Escher inside the window [L+k+1, L+k+n]."""

    ZERO_MOD_N = "q=0 mod n"
    K_MOD_N = "q=k mod n"
    WINDOW_START = "q=L+k+1"


class OrdinaryStart(Enum):
    U_0 = "u_0"
    U_K_MOD_N = "u_(k mod n)"


class ExceptionalStart(Enum):
    V_N_MOD_K = "v_(n mod k)"
    V_0 = "v_0"


class Suite(Enum):
    COUNTS = "counts"
    ROUNDTRIP = "roundtrip"
    LEMMAS = "lemmas"
    CHROMATIC = "chromatic"
    POSITIVITY = "positivity"
    SINKS = "sinks"
    GNECHROM = "gnechrom"


class ReportFormat(Enum):
    JSON = "json"
    CSV = "csv"


class LogicalSymbol(Enum):
    PREC = "≺"
    ARROW = "→"
