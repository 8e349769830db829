"""The Config module.

This module provides the following classes:
- OutputFormat
- RunConfig
"""

__all__ = ["OutputFormat", "RunConfig"]

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import Field

from holdermap.schemas import BaseModel


class OutputFormat(str, Enum):
    """Enum class for the file formats the command line writes."""

    JSON = "json"
    """"""
    CSV = "csv"
    """"""


class RunConfig(BaseModel):
    """Validated flags of one command line invocation.

    Attributes:
        subcommand: Name of the subcommand.
        inputs: Input files, all of which must exist.
        s: Chain energy exponent.
        u: Net tree radius ratio.
        r: Cover radius.
        tol: Comparison tolerance.
        budget: Node budget of exact searches.
        depth: Construction or test depth.
        output: Output file, standard output when absent.
        format: Output format.
        seed: Seed of random generators.
        threads: Worker threads.
    """

    subcommand: str
    inputs: list[Path] = Field(default_factory=list)
    s: Optional[float] = Field(default=None, gt=0)
    u: Optional[float] = Field(default=None, gt=0, lt=1)
    r: Optional[float] = Field(default=None, gt=0)
    tol: float = Field(default=1e-9, gt=0)
    budget: Optional[int] = Field(default=None, ge=1)
    depth: Optional[int] = Field(default=None, ge=0)
    output: Optional[Path] = None
    format: OutputFormat = OutputFormat.JSON
    seed: int = 0
    threads: int = Field(default=1, ge=1)
