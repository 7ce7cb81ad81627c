from typing import Optional

from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from app.errors import UsageError
from app.models.schemas import GadgetReport
from app.services.gadget_service import verify_builtin

router = APIRouter()


@router.get("/verify", response_model=list[GadgetReport])
async def verify_gadgets(target: Optional[str] = None, k: int = 2):
    """Verify the shipped gadgets, sized ones with 1..k copies."""
    if target is not None and target.upper() not in ("A", "B", "C"):
        raise UsageError(f"unknown target {target!r}")
    if not 1 <= k <= 4:
        raise UsageError("k must be between 1 and 4")
    return await run_in_threadpool(verify_builtin, target, range(1, k + 1))
