"""
Module with database persistence as a directory:
manifest.json (mode, feature set, STFT params, stats, file table),
features.f64 (N x M little-endian float64, row-major) and
entries.jsonl (one entry per line).
"""

import json
from pathlib import Path

import numpy as np
from loguru import logger
from pydantic import BaseModel
from pydantic import ValidationError

from exemplar_synth.dsp.types import StftParams
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.index.database import AudioLibrary
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.database import DevEntry
from exemplar_synth.index.database import SourceFile
from exemplar_synth.index.stats import StandardizationStats


logger.debug('Initialize exemplar_synth.index.storage')


MANIFEST_NAME = 'manifest.json'
FEATURES_NAME = 'features.f64'
ENTRIES_NAME = 'entries.jsonl'
SCHEMA_VERSION = 1


class DatabaseCorruptedError(Exception):
    def __init__(self, directory: Path | str, reason: str):
        super().__init__(f"Database at {directory} can not be loaded: {reason}")


class StatsSchema(BaseModel):
    mu: list[float]
    sigma: list[float]
    degenerate: list[bool]


class SourceFileSchema(BaseModel):
    id: str
    path: str | None = None
    genre: str | None = None
    speaker: str | None = None


class DatabaseManifest(BaseModel):
    schema_version: int = SCHEMA_VERSION
    mode: DatabaseMode
    feature_set: FeatureSet
    stft: StftParams
    sample_rate: int
    count: int
    dimension: int
    stats: StatsSchema
    files: list[SourceFileSchema]


class EntrySchema(BaseModel):
    source_file: str
    start: int
    length: int


def save_database(db: DevDatabase, directory: Path | str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = DatabaseManifest(
        mode=db.mode,
        feature_set=db.feature_set,
        stft=db.params,
        sample_rate=db.sample_rate,
        count=db.size,
        dimension=db.dimension,
        stats=StatsSchema(
            mu=db.stats.mu.tolist(),
            sigma=db.stats.sigma.tolist(),
            degenerate=db.stats.degenerate.tolist(),
        ),
        files=[SourceFileSchema(**vars(f)) for f in db.files],
    )
    (directory / MANIFEST_NAME).write_text(
        manifest.model_dump_json(indent=2),
        encoding='utf-8'
    )
    (directory / FEATURES_NAME).write_bytes(
        np.ascontiguousarray(db.features, dtype='<f8').tobytes()
    )
    with (directory / ENTRIES_NAME).open('w', encoding='utf-8') as stream:
        for entry in db.entries:
            stream.write(
                json.dumps({
                    'source_file': entry.source_file,
                    'start': entry.start,
                    'length': entry.length,
                }) + '\n'
            )
    logger.info(f'Saved database ({db.size} entries) to {directory}')
    return directory


def load_database(directory: Path | str) -> DevDatabase:
    directory = Path(directory)
    try:
        manifest = DatabaseManifest.model_validate_json(
            (directory / MANIFEST_NAME).read_text(encoding='utf-8')
        )
        with (directory / ENTRIES_NAME).open(encoding='utf-8') as stream:
            entries = [
                DevEntry(**EntrySchema.model_validate_json(line).model_dump())
                for line in stream if line.strip()
            ]
        raw_bytes = (directory / FEATURES_NAME).read_bytes()
    except (OSError, ValidationError) as e:
        raise DatabaseCorruptedError(directory, str(e)) from e

    if manifest.schema_version != SCHEMA_VERSION:
        raise DatabaseCorruptedError(
            directory, f'unsupported schema version {manifest.schema_version}'
        )
    expected = manifest.count * manifest.dimension * 8
    if len(entries) != manifest.count or len(raw_bytes) != expected:
        raise DatabaseCorruptedError(
            directory,
            f'expected {manifest.count} entries and {expected} feature bytes, '
            f'found {len(entries)} entries and {len(raw_bytes)} bytes'
        )

    features = np.frombuffer(raw_bytes, dtype='<f8').astype(np.float64)
    features = features.reshape(manifest.count, manifest.dimension)
    files = tuple(SourceFile(**f.model_dump()) for f in manifest.files)
    db = DevDatabase(
        features=features,
        entries=tuple(entries),
        stats=StandardizationStats(
            np.array(manifest.stats.mu, dtype=np.float64),
            np.array(manifest.stats.sigma, dtype=np.float64),
            np.array(manifest.stats.degenerate, dtype=bool),
        ),
        mode=manifest.mode,
        feature_set=manifest.feature_set,
        params=manifest.stft,
        sample_rate=manifest.sample_rate,
        files=files,
        audio=AudioLibrary(files),
    )
    logger.info(f'Loaded database ({db.size} entries) from {directory}')
    return db
