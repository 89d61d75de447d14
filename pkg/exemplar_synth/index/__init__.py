"""Development database, standardization and exact nearest-neighbor search"""

from exemplar_synth.index.database import AudioLibrary
from exemplar_synth.index.database import AudioUnavailableError
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.database import DevEntry
from exemplar_synth.index.database import EmptyDatabaseError
from exemplar_synth.index.database import ModeFeatureSetMismatchError
from exemplar_synth.index.database import SourceFile
from exemplar_synth.index.database import build_database
from exemplar_synth.index.database import build_database_async
from exemplar_synth.index.database import build_database_from_waveforms
from exemplar_synth.index.database import extract_entries
from exemplar_synth.index.search import InvalidWeightsError
from exemplar_synth.index.search import NeighborCountError
from exemplar_synth.index.search import NeighborSet
from exemplar_synth.index.search import UnknownFeatureGroupError
from exemplar_synth.index.search import WeightVector
from exemplar_synth.index.search import knn
from exemplar_synth.index.search import select_nearest
from exemplar_synth.index.search import weighted_distance
from exemplar_synth.index.stats import DimensionMismatchError
from exemplar_synth.index.stats import NotEnoughVectorsError
from exemplar_synth.index.stats import StandardizationStats
from exemplar_synth.index.stats import compute_stats
from exemplar_synth.index.stats import standardize
from exemplar_synth.index.stats import unstandardize
from exemplar_synth.index.storage import DatabaseCorruptedError
from exemplar_synth.index.storage import load_database
from exemplar_synth.index.storage import save_database


__all__ = [
    "AudioLibrary",
    "AudioUnavailableError",
    "DatabaseCorruptedError",
    "DatabaseMode",
    "DevDatabase",
    "DevEntry",
    "DimensionMismatchError",
    "EmptyDatabaseError",
    "InvalidWeightsError",
    "ModeFeatureSetMismatchError",
    "NeighborCountError",
    "NeighborSet",
    "NotEnoughVectorsError",
    "SourceFile",
    "StandardizationStats",
    "UnknownFeatureGroupError",
    "WeightVector",
    "build_database",
    "build_database_async",
    "build_database_from_waveforms",
    "compute_stats",
    "extract_entries",
    "knn",
    "load_database",
    "save_database",
    "select_nearest",
    "standardize",
    "unstandardize",
    "weighted_distance",
]
