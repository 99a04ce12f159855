from .check import router as check_router
from .search import router as search_router
from .bound import router as bound_router
from .oracle import router as oracle_router
from .runs import router as runs_router

__all__ = [
    "check_router",
    "search_router",
    "bound_router",
    "oracle_router",
    "runs_router",
]
