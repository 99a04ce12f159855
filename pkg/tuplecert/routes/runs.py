from fastapi import APIRouter, HTTPException, Depends
from sqlalchemy.orm import Session
from typing import List, Optional

from tuplecert.database import get_db
from tuplecert.models import Run
from tuplecert.schemas import RunResponse

router = APIRouter()

# Get all runs, newest first
@router.get("/runs/", response_model=List[RunResponse])
def get_runs(command: Optional[str] = None, skip: int = 0, limit: int = 100, db: Session = Depends(get_db)):
    query = db.query(Run)
    if command:
        query = query.filter(Run.command == command)
    return query.order_by(Run.id.desc()).offset(skip).limit(limit).all()

# Get a specific run by ID
@router.get("/runs/{run_id}", response_model=RunResponse)
def get_run(run_id: int, db: Session = Depends(get_db)):
    run = db.query(Run).filter(Run.id == run_id).first()
    if not run:
        raise HTTPException(status_code=404, detail="Run not found")
    return run
