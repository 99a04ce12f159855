import json

from sqlalchemy import Column, Integer, String, Text, DateTime, func

from tuplecert.database import Base
from tuplecert.schemas import RunReport

# Runs
class Run(Base):
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String, nullable=False, index=True)
    inputs = Column(Text, nullable=False)  # JSON object: file name -> sha256
    verdict = Column(String, nullable=False)
    exit_code = Column(Integer, nullable=False)
    seed = Column(Integer)
    elapsed_ms = Column(Integer, nullable=False, default=0)
    report = Column(Text, nullable=False, default="")
    created_at = Column(DateTime, nullable=False, server_default=func.now())

    @classmethod
    def from_report(cls, report: RunReport) -> "Run":
        return cls(
            command=report.command,
            inputs=json.dumps(report.inputs, sort_keys=True),
            verdict=report.verdict,
            exit_code=report.exit_code,
            seed=report.seed,
            elapsed_ms=report.elapsed_ms,
            report=report.report,
        )
