import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from tuplecert import __version__
from tuplecert.database import engine, Base
from tuplecert.routes import bound_router, check_router, oracle_router, runs_router, search_router

logger = logging.getLogger(__name__)

# Create the run ledger on startup
@asynccontextmanager
async def lifespan(app: FastAPI):
    Base.metadata.create_all(bind=engine)
    logger.info("service started")
    yield
    logger.info("service stopped")

app = FastAPI(title="tuplecert", version=__version__, lifespan=lifespan)

app.include_router(check_router)
app.include_router(search_router)
app.include_router(bound_router)
app.include_router(oracle_router)
app.include_router(runs_router)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Root endpoint for testing
@app.get("/")
def read_root():
    return {"message": "tuplecert service", "commands": ["check", "search", "bound", "oracle"]}
