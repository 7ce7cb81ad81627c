import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.config import settings, APP_VERSION
from app.errors import HColorError, PreconditionError
from app.routers import gadgets, reductions, solve

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Expose settings to the routers."""
    app.state.settings = settings
    logging.getLogger("app").setLevel(settings.LOG_LEVEL)
    logger.info("hcolor %s, oracle cap %d vertices", APP_VERSION, settings.ORACLE_MAX_VERTICES)
    yield


async def _hcolor_error(request: Request, exc: HColorError):
    status = 409 if isinstance(exc, PreconditionError) else 422
    return JSONResponse(status_code=status, content={"error": type(exc).__name__, "detail": str(exc)})


def create_app() -> FastAPI:
    app = FastAPI(
        title="hcolor",
        version=APP_VERSION,
        lifespan=lifespan,
        debug=settings.DEBUG,
    )
    app.add_exception_handler(HColorError, _hcolor_error)

    app.include_router(solve.router, prefix="/api", tags=["solve"])
    app.include_router(reductions.router, prefix="/api", tags=["reductions"])
    app.include_router(gadgets.router, prefix="/api/gadgets", tags=["gadgets"])

    @app.get("/api/version")
    async def version():
        return {"version": APP_VERSION}

    return app


app = create_app()
