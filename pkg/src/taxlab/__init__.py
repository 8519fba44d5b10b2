"""taxlab: turn taxonomy-valued entity data into distance spaces, metric
embeddings, clusterings (classical and simulated-variational), and small
classifiers, inside a reproducible session/artifact pipeline."""

from . import clustering, embedding, neural, optimize, pipeline, qsim, similarity, taxonomy
from .errors import (
    CapacityError,
    CorruptFileError,
    JobFailedError,
    UnknownIdError,
    ValidationError,
    VersionError,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CorruptFileError",
    "JobFailedError",
    "UnknownIdError",
    "ValidationError",
    "VersionError",
    "clustering",
    "embedding",
    "neural",
    "optimize",
    "pipeline",
    "qsim",
    "similarity",
    "taxonomy",
]
