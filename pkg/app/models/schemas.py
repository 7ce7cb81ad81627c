from typing import Literal, Optional

from pydantic import BaseModel, Field

META_SCHEMA_VERSION = 1


class SlackEntry(BaseModel):
    vertex: int
    label: str
    out_slack: int
    in_slack: int
    absorbable: int


class GadgetReport(BaseModel):
    kind: str
    target: str
    mode: str
    interface: list[str]
    pinned: dict[str, int] = {}
    expected: list[list[int]]
    computed: list[list[int]]
    missing: list[list[int]] = []
    unexpected: list[list[int]] = []
    passed: bool
    vertices: int
    arcs: int
    max_out: int
    max_in: int
    slack: list[SlackEntry] = []
    audit_passed: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.passed and self.audit_passed is not False


class VariableMeta(BaseModel):
    index: int
    positive_copies: list[int]
    negative_copies: list[int]


class ClauseMeta(BaseModel):
    index: int
    literals: list[int]
    carriers: list[int]
    gadget: list[int]


class ReductionMeta(BaseModel):
    """Role-to-vertex map of a reduction instance.

    Field order is the serialization order; lists are in variable and
    clause order.
    """

    schema_version: int = META_SCHEMA_VERSION
    target: str
    bounded: bool
    semantics: str
    num_vars: int
    num_clauses: int
    vertices: int
    arcs: int
    basis: Optional[list[int]] = None
    pinned: dict[str, int] = {}
    variables: list[VariableMeta]
    clauses: list[ClauseMeta]


class ValidationReport(BaseModel):
    target: str
    bounded: bool
    vertices: int
    arcs: int
    max_out: int
    max_in: int
    max_out_vertex: Optional[str] = None
    undirected_max_degree: int
    degree_ok: bool
    meta_ok: bool
    spot_checks_ok: bool
    problems: list[str] = []

    @property
    def passed(self) -> bool:
        return self.degree_ok and self.meta_ok and self.spot_checks_ok


class RoundtripResult(BaseModel):
    name: str
    target: str
    bounded: bool
    satisfiable: bool
    colorable: bool
    extracted_ok: Optional[bool] = None
    extended_ok: Optional[bool] = None
    passed: bool
    detail: str = ""


# ---------------------------------------------------------------------------
# HTTP bodies
# ---------------------------------------------------------------------------

class GraphRequest(BaseModel):
    graph: str = Field(description="edge-list text")
    target: str = Field("A", description="A, B, C, or an edge-list text of a custom target")
    lists: Optional[str] = None


class SolveRequest(GraphRequest):
    algo: Literal["exact", "bounded"] = "exact"


class SolveResponse(BaseModel):
    target: str
    algo: str
    colorable: bool
    coloring: Optional[list[int]] = None


class CountRequest(GraphRequest):
    enumerate: bool = False
    limit: Optional[int] = None


class CountResponse(BaseModel):
    target: str
    count: int
    colorings: Optional[list[list[int]]] = None


class ArcConsistencyResponse(BaseModel):
    target: str
    lists: list[list[int]]
    has_empty: bool


class TargetInfo(BaseModel):
    name: str
    vertices: int
    arcs: list[tuple[int, int]]


class ReduceResponse(BaseModel):
    edge_list: str
    meta: ReductionMeta
    validation: ValidationReport


class RoundtripRequest(BaseModel):
    formulas: list[str]
    target: str = "A"
    bounded: bool = False
