import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor

from fastapi import APIRouter, File, Form, UploadFile, WebSocket, WebSocketDisconnect
from fastapi.concurrency import run_in_threadpool

from app.config import settings
from app.errors import FormatError, HColorError, UsageError
from app.models.schemas import ReduceResponse, RoundtripRequest, RoundtripResult
from app.services.cnf_service import parse_dimacs
from app.services.digraph_service import format_edge_list
from app.services.reduction_service import reduce as build_reduction
from app.services.reduction_service import roundtrip_batch, roundtrip_check, validate_instance

router = APIRouter()
logger = logging.getLogger(__name__)

# Round trips run the exact oracle; keep them off the event loop.
_executor = ThreadPoolExecutor(max_workers=settings.BATCH_WORKERS)


def _check_target(target: str) -> str:
    if target.upper() not in ("A", "B", "C"):
        raise UsageError(f"no reduction for target {target!r}")
    return target.upper()


@router.post("/reduce", response_model=ReduceResponse)
async def reduce_formula(
    formula: UploadFile = File(...),
    target: str = Form("A"),
    bounded: bool = Form(False),
):
    """Build G_phi from an uploaded DIMACS file."""
    raw = await formula.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise FormatError("formula upload is not UTF-8 text") from None
    instance = build_reduction(parse_dimacs(text), _check_target(target), bounded)
    return ReduceResponse(
        edge_list=format_edge_list(instance.graph),
        meta=instance.meta(),
        validation=validate_instance(instance),
    )


@router.post("/roundtrip", response_model=list[RoundtripResult])
async def roundtrip(body: RoundtripRequest):
    """PASS/FAIL per DIMACS text, in input order."""
    target = _check_target(body.target)
    items = [(f"formula-{i + 1}", parse_dimacs(text)) for i, text in enumerate(body.formulas)]
    return await run_in_threadpool(roundtrip_batch, items, target, body.bounded)


@router.websocket("/roundtrip/ws")
async def roundtrip_stream(websocket: WebSocket):
    """Receive one RoundtripRequest, stream one result per formula, then done."""
    await websocket.accept()
    loop = asyncio.get_event_loop()
    try:
        data = await websocket.receive_json()
        try:
            body = RoundtripRequest.model_validate(data)
            target = _check_target(body.target)
            items = [(f"formula-{i + 1}", parse_dimacs(text)) for i, text in enumerate(body.formulas)]
        except (HColorError, ValueError) as e:
            await websocket.send_json({"type": "error", "data": str(e)})
            await websocket.close()
            return

        futures = [
            loop.run_in_executor(_executor, roundtrip_check, formula, target, body.bounded, name)
            for name, formula in items
        ]
        passed = 0
        for future in futures:
            try:
                result = await future
            except HColorError as e:
                await websocket.send_json({"type": "error", "data": str(e)})
                continue
            except Exception as e:
                logger.exception("round trip failed")
                for pending in futures:
                    pending.cancel()
                await websocket.send_json({"type": "error", "data": f"internal error: {e}"})
                await websocket.close()
                return
            passed += result.passed
            await websocket.send_json({"type": "result", "data": result.model_dump()})
        await websocket.send_json({"type": "done", "total": len(items), "passed": passed})
        await websocket.close()
    except WebSocketDisconnect:
        pass
