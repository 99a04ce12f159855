import hashlib
from pathlib import Path
from typing import Union


def digest(content: Union[bytes, str]) -> str:
    if isinstance(content, str):
        content = content.encode("utf-8")
    return hashlib.sha256(content).hexdigest()


def read_input(path: Union[str, Path]) -> tuple[str, str]:
    """(text, sha256) of an input file."""
    data = Path(path).read_bytes()
    return data.decode("utf-8"), digest(data)
