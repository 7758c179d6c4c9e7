from __future__ import annotations

from pydantic import BaseModel, Field

from khmix.core.config import SCHEMA_VERSION


class Bigrading(BaseModel):
    h: int = Field(description="Homological grading")
    q: int = Field(description="Quantum grading")


class TorsionSummand(BaseModel):
    h: int
    q: int
    k: int = Field(description="Exponent of the summand R[U]/U^k")


class GradedModuleOut(BaseModel):
    free: list[Bigrading] = Field(default_factory=list)
    torsion: list[TorsionSummand] = Field(default_factory=list)

    @classmethod
    def from_module(cls, module) -> "GradedModuleOut":
        return cls(
            free=[Bigrading(h=h, q=q) for h, q in module.free],
            torsion=[TorsionSummand(h=h, q=q, k=k) for h, q, k in module.torsion],
        )


class HatEntry(BaseModel):
    h: int
    q: int
    dim: int


class HomologyReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    diagram: str
    theory: str
    field: str
    generators: int
    minus: GradedModuleOut
    hat: GradedModuleOut
    infty: GradedModuleOut
    plus: GradedModuleOut
    red: GradedModuleOut
    hat_table: list[HatEntry] = Field(default_factory=list)


class SurfaceStatsOut(BaseModel):
    euler_char: int
    normal_euler: int
    crosscap: int
    orientable: bool
    components: int
    births: int
    deaths: int
    saddles: int
    stars: int
    dots: int
    expected_shift: Bigrading

    @classmethod
    def from_stats(cls, st) -> "SurfaceStatsOut":
        h, q = st.expected_shift()
        return cls(
            euler_char=st.euler_char,
            normal_euler=st.normal_euler,
            crosscap=st.crosscap,
            orientable=st.orientable,
            components=len(st.components),
            births=st.births,
            deaths=st.deaths,
            saddles=st.saddles,
            stars=st.stars,
            dots=st.dots,
            expected_shift=Bigrading(h=h, q=q),
        )


class MatrixEntry(BaseModel):
    row: int
    col: int
    coefficient: str = Field(description="Exact scalar, 'p/q' over Q or a residue over F_p")
    u_power: str


class ChainMapOut(BaseModel):
    schema_version: str = SCHEMA_VERSION
    movie: str
    theory: str
    field: str
    source_generators: int
    target_generators: int
    shift: Bigrading
    delta_shift: int
    entries: list[MatrixEntry] = Field(default_factory=list)
    stats: SurfaceStatsOut
    audit: bool = Field(description="The shift equals (-e/2, chi - 3e/2 - 2s)")


class ClassCoordinate(BaseModel):
    kind: str = Field(description="'f' for a free summand, 'c' or 'b' for the ends of a torsion pair")
    index: int
    u_power: str
    coefficient: str


class Certificates(BaseModel):
    hat_push: bool
    hat_pull: bool
    hred_dim: int


class MixedResultOut(BaseModel):
    schema_version: str = SCHEMA_VERSION
    movie: str
    theory: str
    field: str
    bigrading: Bigrading
    zero: bool
    coords: list[ClassCoordinate] = Field(default_factory=list)
    certificates: Certificates
    crosscap: int
    crosscap_split: list[int]
    warnings: list[str] = Field(default_factory=list)


class CaseFailure(BaseModel):
    case: int
    witness: str
    movie: str = ""


class SuiteReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    suite: str
    seed: int
    theory: str
    field: str
    cases: int
    passed: bool
    failures: list[CaseFailure] = Field(default_factory=list)


class CorpusEntry(BaseModel):
    name: str
    kind: str = Field(description="'diagram' or 'movie'")
    theory: str = ""
    boundary: str = ""
    description: str = ""


class CorpusListing(BaseModel):
    schema_version: str = SCHEMA_VERSION
    corpus: str
    entries: list[CorpusEntry] = Field(default_factory=list)
