from khmix.schemas.results import (
    Bigrading,
    CaseFailure,
    Certificates,
    ChainMapOut,
    ClassCoordinate,
    CorpusEntry,
    CorpusListing,
    GradedModuleOut,
    HatEntry,
    HomologyReport,
    MatrixEntry,
    MixedResultOut,
    SuiteReport,
    SurfaceStatsOut,
    TorsionSummand,
)

__all__ = [
    "Bigrading",
    "CaseFailure",
    "Certificates",
    "ChainMapOut",
    "ClassCoordinate",
    "CorpusEntry",
    "CorpusListing",
    "GradedModuleOut",
    "HatEntry",
    "HomologyReport",
    "MatrixEntry",
    "MixedResultOut",
    "SuiteReport",
    "SurfaceStatsOut",
    "TorsionSummand",
]
