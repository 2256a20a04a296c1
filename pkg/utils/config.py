# Process settings; NO_COLOR is the only environment variable read, and only a non-empty value counts
import os
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    no_color: bool = False
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, verbose: bool = False) -> "Settings":
        environ = os.environ if environ is None else environ
        return cls(no_color=bool(environ.get("NO_COLOR")), log_level="INFO" if verbose else "WARNING")
