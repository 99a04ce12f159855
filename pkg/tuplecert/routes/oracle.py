from fastapi import APIRouter, HTTPException, Depends
from sqlalchemy.orm import Session

from tuplecert.commands import run_oracle
from tuplecert.database import get_db
from tuplecert.errors import TupleCertError
from tuplecert.models import Run
from tuplecert.schemas import OracleRequest, RunReport
from tuplecert.utils import digest

router = APIRouter()

# Tabulate irc by exhaustive rewriting
@router.post("/oracle/", response_model=RunReport)
def create_oracle(request: OracleRequest, db: Session = Depends(get_db)):
    try:
        report = run_oracle(
            request.trs, request.relation, request.max_size, request.budget, request.start, {"trs": digest(request.trs)}
        )
    except TupleCertError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    db.add(Run.from_report(report))
    db.commit()
    return report
