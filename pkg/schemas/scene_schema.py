from typing import Annotated, List, Literal, Optional, Tuple, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

Triple = Tuple[float, float, float]


class LoopSpecBase(BaseModel):
    model_config = ConfigDict(extra="forbid")

    current: float = 1.0
    label: Optional[str] = None
    resample: Optional[float] = Field(default=None, gt=0, description="Target segment length")

    @model_validator(mode="before")
    @classmethod
    def default_current(cls, data):
        if isinstance(data, dict) and "current" not in data:
            logger.warning(f"Loop '{data.get('label', data.get('type', '?'))}' has no current, using 1.0")
            data = {**data, "current": 1.0}
        return data


class PolylineLoopSpec(LoopSpecBase):
    type: Literal["polyline"]
    vertices: List[Triple]


class CircleLoopSpec(LoopSpecBase):
    type: Literal["circle"]
    center: Triple = (0.0, 0.0, 0.0)
    normal: Triple = (0.0, 0.0, 1.0)
    radius: float
    segments: int = 256


class RectangleLoopSpec(LoopSpecBase):
    type: Literal["rectangle"]
    center: Triple = (0.0, 0.0, 0.0)
    u_axis: Triple = (1.0, 0.0, 0.0)
    v_axis: Triple = (0.0, 1.0, 0.0)
    width: float
    height: float
    segments_per_side: int = 1


LoopSpec = Annotated[
    Union[PolylineLoopSpec, CircleLoopSpec, RectangleLoopSpec],
    Field(discriminator="type"),
]


class SceneTransformSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rotation_axis: Triple = (0.0, 0.0, 1.0)
    rotation_deg: float = 0.0
    translation: Triple = (0.0, 0.0, 0.0)


class SceneSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    loops: List[LoopSpec] = Field(min_length=1)
    transform: Optional[SceneTransformSpec] = None
    description: Optional[str] = None
