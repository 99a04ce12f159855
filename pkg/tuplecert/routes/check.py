from fastapi import APIRouter, HTTPException, Depends
from sqlalchemy.orm import Session

from tuplecert.commands import run_check
from tuplecert.database import get_db
from tuplecert.errors import TupleCertError
from tuplecert.models import Run
from tuplecert.schemas import CheckRequest, RunReport
from tuplecert.utils import digest

router = APIRouter()

# Check a TRS against an interpretation
@router.post("/check/", response_model=RunReport)
def create_check(request: CheckRequest, db: Session = Depends(get_db)):
    inputs = {"trs": digest(request.trs), "interpretation": digest(request.interpretation)}
    try:
        report = run_check(request.trs, request.interpretation, inputs)
    except TupleCertError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    db.add(Run.from_report(report))
    db.commit()
    return report
