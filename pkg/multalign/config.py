# Licensed under the MIT License.
"""
Configuration data model
"""

from typing import Optional, Tuple

from pydantic import BaseModel, confloat, conint, validator


MATCHERS = ("simple", "maxweight", "union", "maxoverlap")
MATCHER_CHOICES = (*MATCHERS, "all", "dense")

Probability = confloat(ge=0.0, le=1.0)


def default_grid() -> Tuple[float, ...]:
    """Five evenly spaced probabilities over [0, 0.5]"""
    return (0.0, 0.125, 0.25, 0.375, 0.5)


class MsdConfig(BaseModel):
    """
    Parameters for the multimodal similarity decomposition
    """

    alpha: confloat(gt=0.0, lt=1.0) = 0.9
    iterations: conint(ge=1) = 10

    class Config:
        """Model configuration"""

        frozen = True


class SyntheticConfig(BaseModel):
    """
    Parameters for synthetic multimodal problem generation
    """

    base_nodes: conint(ge=1) = 12
    copies: conint(ge=1) = 3
    avg_degree: confloat(ge=0.0) = 3.0
    modes: conint(ge=1) = 6
    vertex_del_p: Probability = 0.0
    edge_del_q: Probability = 0.0
    trials: conint(ge=1) = 50
    seed: conint(ge=0, lt=2**64) = 0

    @validator("avg_degree")
    def check_degree(cls, value, values):
        """An Erdos-Renyi edge probability must not exceed 1"""

        base_nodes = values.get("base_nodes")
        if base_nodes and base_nodes > 1 and value > base_nodes - 1:
            raise ValueError(
                f"Average degree {value} is impossible with {base_nodes} base nodes"
            )

        return value

    class Config:
        """Model configuration"""

        validate_assignment = True


class ExperimentConfig(BaseModel):
    """
    Parameters for the recovery grid, adding-modes, and mode-ordering experiments
    """

    p_values: Tuple[Probability, ...] = default_grid()
    q_values: Tuple[Probability, ...] = default_grid()
    mode_counts: Tuple[conint(ge=1), ...] = tuple(range(1, 11))
    adding_modes_settings: Tuple[Tuple[Probability, Probability], ...] = ((0.1, 0.2), (0.2, 0.1))
    ordering_steps: Optional[Tuple[conint(ge=1), ...]] = None
    jobs: conint(ge=1) = 1


class BasicConfig(BaseModel):
    """
    Minimal configuration model
    """

    msd: MsdConfig = MsdConfig()
    matcher: str = "all"

    @validator("matcher")
    def check_matcher(cls, value: str):
        """Validate matcher selector"""

        if value not in MATCHER_CHOICES:
            raise ValueError(f"Unknown matcher '{value}', expected one of {MATCHER_CHOICES}")

        return value

    class Config:
        """Model configuration"""

        validate_assignment = True


class FullConfig(BasicConfig):
    """
    Full configuration model, usually loaded from a YAML file
    """

    synthetic: SyntheticConfig = SyntheticConfig()
    experiment: ExperimentConfig = ExperimentConfig()
