from fastapi import APIRouter, HTTPException, Depends
from sqlalchemy.orm import Session

from tuplecert.commands import run_search
from tuplecert.database import get_db
from tuplecert.errors import TupleCertError
from tuplecert.models import Run
from tuplecert.schemas import RunReport, SearchRequest
from tuplecert.search import SearchConfig, StrategyKind
from tuplecert.utils import digest

router = APIRouter()

# Search for a compatible interpretation
@router.post("/search/", response_model=RunReport)
def create_search(request: SearchRequest, db: Session = Depends(get_db)):
    cfg = SearchConfig(
        k_max=request.kmax,
        coeff_bound=request.coeff_bound,
        strategy=StrategyKind(request.strategy),
        seed=request.seed,
        time_budget=request.time_budget,
    )
    try:
        report = run_search(request.trs, cfg, {"trs": digest(request.trs)})
    except TupleCertError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    db.add(Run.from_report(report))
    db.commit()
    return report
