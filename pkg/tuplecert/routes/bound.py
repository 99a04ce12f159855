from fastapi import APIRouter, HTTPException, Depends
from sqlalchemy.orm import Session

from tuplecert.commands import run_bound
from tuplecert.database import get_db
from tuplecert.errors import TupleCertError
from tuplecert.models import Run
from tuplecert.schemas import BoundRequest, RunReport
from tuplecert.utils import digest

router = APIRouter()

# Classify an interpretation and derive its irc bound
@router.post("/bound/", response_model=RunReport)
def create_bound(request: BoundRequest, db: Session = Depends(get_db)):
    inputs = {"trs": digest(request.trs), "interpretation": digest(request.interpretation)}
    try:
        report = run_bound(request.trs, request.interpretation, inputs)
    except TupleCertError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    db.add(Run.from_report(report))
    db.commit()
    return report
