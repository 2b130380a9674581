from pyescher.symcore import EBasisExpr, MultiPoly, Partition, expand_in_e, partitions_of
from pyescher.uio import UIO, Poset, generate_all
from pyescher.chromo import AlphaMap, chromatic_sym, e_coefficients
from pyescher.ghom import e_G, m_coeff_U, verify_gnechrom
from pyescher.escher import (
    DEFAULT_CONVENTION,
    AnchorConvention,
    EscherPair,
    EscherSeq,
    calibrate_convention,
    enumerate_eschers,
    phi,
    psi,
)
from pyescher.report import SweepConfig, VerificationReport
from pyescher.sweep import run_sweep
