from enum import Enum
from typing import List

from pydantic import BaseModel, Field


class ClusteringStep(str, Enum):
    ASSIGNMENT = 'assignment'
    UPDATE = 'update'


class StopReason(str, Enum):
    FIXED_POINT = 'fixed_point'
    TOLERANCE = 'tolerance'
    MAX_ITERS = 'max_iters'


class LossRecord(BaseModel):
    iteration: int
    step: ClusteringStep
    loss: float


class ClusterRepair(BaseModel):
    iteration: int = Field(description="Iteration in which the empty cluster was refilled")
    cluster: int = Field(description="Index of the cluster that came up empty")
    point: int = Field(description="Row moved into the empty cluster as a singleton")
    source_cluster: int = Field(description="Cluster the row was taken from")


class ClusteringState(BaseModel):
    assignments: List[int] = Field(description="Cluster index of every row")
    centroids: List[List[float]] = Field(description="k x dimension matrix of cluster centroids")
    loss: float = Field(description="sum_i mu_i d_phi(x_i, c_a(i))")
    jensen_form_loss: float = Field(description="Mass-weighted sum of the per-cluster Jensen gap informations")
    iteration: int = Field(description="Number of update steps performed")
    stop_reason: StopReason
    restart: int = Field(default=0, description="Index of the initialization that produced this state")
    loss_trace: List[LossRecord] = Field(default_factory=list, description="Loss after every half-step")
    repairs: List[ClusterRepair] = Field(default_factory=list)
    clamped_centroids: List[int] = Field(default_factory=list,
                                         description="Clusters whose mean sat on the boundary and was pulled inside")
