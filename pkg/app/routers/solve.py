from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from app.errors import ColoringError
from app.models.schemas import (
    ArcConsistencyResponse,
    CountRequest,
    CountResponse,
    GraphRequest,
    SolveRequest,
    SolveResponse,
    TargetInfo,
)
from app.services.bounded_service import solve_bounded
from app.services.consistency_service import check_lists, has_empty, make_arc_consistent, parse_lists
from app.services.digraph_service import parse_edge_list
from app.services.oracle_service import count_homomorphisms, enumerate_homomorphisms, find_homomorphism
from app.services.target_service import (
    TARGET_ARCS,
    TargetGraph,
    build_target,
    is_homomorphism,
    respects_lists,
)

router = APIRouter()


def _problem(body: GraphRequest):
    g = parse_edge_list(body.graph)
    if body.target.upper() in TARGET_ARCS:
        h = build_target(body.target)
    else:
        h = TargetGraph(parse_edge_list(body.target))
    lists = parse_lists(body.lists, g, h) if body.lists else check_lists(g, h, None)
    return g, h, lists


@router.get("/targets/{name}", response_model=TargetInfo)
async def get_target(name: str):
    """Vertices and arcs of the fixed target A, B or C."""
    h = build_target(name)
    return TargetInfo(name=h.name, vertices=h.n, arcs=list(h.digraph.arc_list))


def _solve(body: SolveRequest) -> SolveResponse:
    g, h, lists = _problem(body)
    if body.algo == "bounded":
        coloring = solve_bounded(g, lists, h)
    else:
        coloring = find_homomorphism(g, h, lists)
    if coloring is not None and not (is_homomorphism(g, h, coloring) and respects_lists(coloring, lists)):
        raise ColoringError("solver returned a coloring that fails verification")
    return SolveResponse(
        target=h.name, algo=body.algo, colorable=coloring is not None,
        coloring=list(coloring) if coloring is not None else None,
    )


@router.post("/solve", response_model=SolveResponse)
async def solve(body: SolveRequest):
    return await run_in_threadpool(_solve, body)


def _count(body: CountRequest) -> CountResponse:
    g, h, lists = _problem(body)
    if body.enumerate:
        colorings = enumerate_homomorphisms(g, h, lists, limit=body.limit)
        return CountResponse(target=h.name, count=len(colorings), colorings=[list(f) for f in colorings])
    return CountResponse(target=h.name, count=count_homomorphisms(g, h, lists))


@router.post("/count", response_model=CountResponse)
async def count(body: CountRequest):
    return await run_in_threadpool(_count, body)


@router.post("/ac", response_model=ArcConsistencyResponse)
async def arc_consistency(body: GraphRequest):
    g, h, lists = _problem(body)
    narrowed = make_arc_consistent(g, lists, h)
    return ArcConsistencyResponse(
        target=h.name, lists=[sorted(allowed) for allowed in narrowed], has_empty=has_empty(narrowed)
    )
