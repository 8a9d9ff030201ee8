from typing import List, Optional

from pydantic import BaseModel, field_validator, model_validator


class StateSpec(BaseModel):
    """Exactly one of `amplitudes` ([re, im] pairs for |00>,|01>,|10>,|11>) or `schmidt_lambda0`.

    Example documents:
        {"amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]]}
        {"schmidt_lambda0": 0.75}
    """
    amplitudes: Optional[List[List[float]]] = None
    schmidt_lambda0: Optional[float] = None

    @field_validator("amplitudes")
    @classmethod
    def four_pairs(cls, value: Optional[List[List[float]]]) -> Optional[List[List[float]]]:
        if value is None:
            return value
        if len(value) != 4:
            raise ValueError(f"amplitudes needs 4 [re, im] pairs, got {len(value)}")
        for i, pair in enumerate(value):
            if len(pair) != 2:
                raise ValueError(f"amplitudes[{i}] must be a [re, im] pair")
        return value

    @field_validator("schmidt_lambda0")
    @classmethod
    def lambda0_range(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.5 <= value <= 1.0:
            raise ValueError(f"schmidt_lambda0 must lie in [0.5, 1], got {value}")
        return value

    @model_validator(mode="after")
    def exactly_one(self) -> "StateSpec":
        if (self.amplitudes is None) == (self.schmidt_lambda0 is None):
            raise ValueError("give exactly one of amplitudes or schmidt_lambda0")
        return self

    def complex_amplitudes(self) -> List[complex]:
        return [complex(re, im) for re, im in self.amplitudes or []]

    class Config:
        extra = "forbid"
        allow_inf_nan = False
