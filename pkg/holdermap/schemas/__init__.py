"""holdermap.schemas package entry file.

This module provides the following classes:
- BaseModel

This module provides the following types:
- FloatArray
"""

__all__ = ["BaseModel", "FloatArray"]

from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel as PydanticModel, BeforeValidator, PlainSerializer


def _as_float_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    array.flags.writeable = False
    return array


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_float_array),
    PlainSerializer(lambda x: x.tolist(), return_type=list),
]
"""A read-only float64 numpy array, serialized as nested lists."""


class BaseModel(
    PydanticModel,
    populate_by_name=True,
    frozen=True,
    extra="forbid",
    arbitrary_types_allowed=True,
):
    """Base model for holdermap records."""
