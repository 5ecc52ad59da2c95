"""Verification and search for transitivity, mixing and run-away certificates."""

from .certificates import (
    Horizon,
    Measured,
    MixingCertificate,
    RunAwayCertificate,
    TransitivityCertificate,
    Verdict,
    VerdictKind,
    make_transitivity_certificate,
    runaway_to_transitivity,
    verify_mixing,
    verify_runaway,
    verify_transitivity,
)
from .runaway import RunAwayResult, check_c3_c4, runaway_sweep, search_runaway_exact
from .salas import salas_bilateral, salas_mixing, salas_unilateral
from .search import search_mixing, search_transitivity

__all__ = [
    "Horizon",
    "Measured",
    "MixingCertificate",
    "RunAwayCertificate",
    "RunAwayResult",
    "TransitivityCertificate",
    "Verdict",
    "VerdictKind",
    "check_c3_c4",
    "make_transitivity_certificate",
    "runaway_sweep",
    "runaway_to_transitivity",
    "salas_bilateral",
    "salas_mixing",
    "salas_unilateral",
    "search_mixing",
    "search_runaway_exact",
    "search_transitivity",
    "verify_mixing",
    "verify_runaway",
    "verify_transitivity",
]
