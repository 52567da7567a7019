"""Sleep-consolidated semantic memory engine for conversational agents."""

from .errors import (
    BusyError,
    ConfigurationError,
    CorruptSnapshotError,
    InvalidArgumentError,
    MemoryError_,
    NotFoundError,
    ProtectedConceptError,
    UnsupportedVersionError,
)
from .model import (
    Clock,
    Concept,
    ConceptType,
    EngineConfig,
    Episode,
    Predicate,
    Relation,
    SimulatedClock,
    ValueVector,
    WallClock,
    make_concept_id,
)
from .encoding import HashEmbedder, RuleBasedExtractor, RemoteEmbedder, RemoteExtractor
from .engine import IngestReport, MemoryEngine
from .long_term_memory import MemoryGraph, RetrievalHit
from .persistence import load, save
from .sleep_cycle import SleepReport, SleepTrigger
from .valuation import SessionGoal
from .working_memory import WorkingMemory

__version__ = "0.1.0"

__all__ = [
    "BusyError",
    "Clock",
    "Concept",
    "ConceptType",
    "ConfigurationError",
    "CorruptSnapshotError",
    "EngineConfig",
    "Episode",
    "HashEmbedder",
    "IngestReport",
    "InvalidArgumentError",
    "MemoryEngine",
    "MemoryError_",
    "MemoryGraph",
    "NotFoundError",
    "Predicate",
    "ProtectedConceptError",
    "Relation",
    "RemoteEmbedder",
    "RemoteExtractor",
    "RetrievalHit",
    "RuleBasedExtractor",
    "SessionGoal",
    "SimulatedClock",
    "SleepReport",
    "SleepTrigger",
    "UnsupportedVersionError",
    "ValueVector",
    "WallClock",
    "WorkingMemory",
    "load",
    "make_concept_id",
    "save",
]
