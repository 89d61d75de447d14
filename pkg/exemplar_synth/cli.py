"""
Command line entry point.

    exemplar-synth extract TRACK.wav -o TRACK.json [--features {3,8,11,21}]
    exemplar-synth build-db CORPUS... -o DB_DIR --mode {frame,segment} [--features ...]
    exemplar-synth synth --db DB_DIR --target TARGET.{wav,json} -o OUT.wav [--method ...]
    exemplar-synth eval --reference REF.wav --estimate OUT.wav
    exemplar-synth experiment CORPUS_DIR --csv trials.csv --summary summary.json [...]

Exit codes: 0 on success, 2 on usage errors and missing input files,
1 on any other error.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from loguru import logger

from exemplar_synth.audio_io.analysis import analysis_document_from_features
from exemplar_synth.audio_io.analysis import frame_feature_document
from exemplar_synth.audio_io.analysis import write_analysis_document
from exemplar_synth.audio_io.wav import read_wav
from exemplar_synth.audio_io.wav import write_wav
from exemplar_synth.config import get_settings
from exemplar_synth.dsp.stft import magnitude_spectrogram
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.evaluation.corpus import load_corpus
from exemplar_synth.evaluation.experiment import ExperimentSpec
from exemplar_synth.evaluation.experiment import all_feature_combos
from exemplar_synth.evaluation.experiment import run_experiment
from exemplar_synth.evaluation.metrics import mse_db
from exemplar_synth.evaluation.metrics import relative_error_db
from exemplar_synth.evaluation.metrics import spectrogram_kl
from exemplar_synth.features.frame import frame_features
from exemplar_synth.features.segment import segment_features
from exemplar_synth.features.segment import segment_onsets
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import SourceFile
from exemplar_synth.index.database import build_database
from exemplar_synth.index.database import pad_to
from exemplar_synth.index.search import WeightVector
from exemplar_synth.index.storage import load_database
from exemplar_synth.index.storage import save_database
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.config import SynthMethod
from exemplar_synth.synth.engine import synthesize
from exemplar_synth.synth.target import target_from_analysis
from exemplar_synth.synth.target import target_from_waveform


class MissingInputError(Exception):
    def __init__(self, path: Path | str):
        super().__init__(f"Input not found: {path}")


def configure_logging(level: str | None = None):
    logger.remove()
    logger.add(sys.stderr, level=(level or get_settings().log_level).upper())


def _existing(path: str) -> Path:
    resolved = Path(path)
    if not resolved.exists():
        raise MissingInputError(path)
    return resolved


def _stft_params(args: argparse.Namespace) -> StftParams:
    settings = get_settings()
    return StftParams(
        frame_len=args.frame_len or settings.frame_len,
        hop=args.hop or settings.hop,
        window=args.window or settings.window,
    )


def _add_stft_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--frame-len', type=int, default=None)
    parser.add_argument('--hop', type=int, default=None)
    parser.add_argument('--window', choices=['hann', 'rectangular'], default=None)


def _parse_weight(value: str) -> tuple[int, float]:
    """'j=w' with 1-based feature index j"""
    try:
        index, weight = value.split('=', 1)
        return int(index), float(weight)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'expected j=w with integer j and real w, got {value!r}'
        ) from None


def cmd_extract(args: argparse.Namespace) -> int:
    path = _existing(args.input)
    w = read_wav(path)
    params = _stft_params(args)
    if args.features:
        features = frame_features(w, params, args.features)
        document = frame_feature_document(features, w.sample_rate, path.stem)
    else:
        segments = segment_onsets(w, params, path.stem)
        vectors = segment_features(w, segments, params)
        document = analysis_document_from_features(segments, vectors, w.sample_rate, path.stem)
    write_analysis_document(document, args.output)
    logger.info(f'Wrote features of {path} to {args.output}')
    return 0


def _corpus_sources(inputs: Sequence[str], mode: DatabaseMode, labels_from_dirs: bool) -> list[SourceFile]:
    sources = []
    for item in inputs:
        root = _existing(item)
        paths = sorted(root.rglob('*.wav')) if root.is_dir() else [root]
        for path in paths:
            label = path.parent.name if labels_from_dirs and path.parent != root else None
            sources.append(
                SourceFile(
                    id=str(path),
                    path=str(path.resolve()),
                    genre=label if mode is DatabaseMode.SEGMENT else None,
                    speaker=label if mode is DatabaseMode.FRAME else None,
                )
            )
    return sources


def cmd_build_db(args: argparse.Namespace) -> int:
    mode = DatabaseMode(args.mode)
    feature_set = args.features or ('msd27' if mode is DatabaseMode.SEGMENT else '8')
    sources = _corpus_sources(args.corpus, mode, args.labels_from_dirs)
    db = build_database(sources, mode, feature_set, _stft_params(args), args.workers)
    save_database(db, args.output)
    return 0


def _synth_config(args: argparse.Namespace, dimension: int) -> SynthConfig:
    weights = None
    if args.use or args.weight:
        groups = [g for g in (args.use or 'chroma,timbre,loudness').split(',') if g.strip()]
        if dimension == 27:
            base = WeightVector.from_groups(groups, dimension=dimension).w
        else:
            base = WeightVector.ones(dimension).w
        base = base.copy()
        for index, value in args.weight or []:
            if not 1 <= index <= dimension:
                raise ValueError(f'--weight index {index} outside 1..{dimension}')
            base[index - 1] = value
        weights = tuple(float(v) for v in WeightVector(base).w)
    overrides = {
        'method': SynthMethod(args.method),
        'weights': weights,
        'transition': args.transition,
        'gain': args.gain,
        'crossfade_ms': args.crossfade_ms,
        'gl_seed': args.seed,
    }
    if args.P is not None:
        overrides['P'] = args.P
    if args.lambda_v is not None:
        overrides['lambda_v'] = args.lambda_v
    if args.gl_iters is not None:
        overrides['gl_iters'] = args.gl_iters
    return SynthConfig.from_settings(**overrides)


def cmd_synth(args: argparse.Namespace) -> int:
    db = load_database(_existing(args.db))
    target_path = _existing(args.target)
    if target_path.suffix.lower() == '.json':
        target = target_from_analysis(target_path, db.sample_rate)
    else:
        target = target_from_waveform(read_wav(target_path), db)
    cfg = _synth_config(args, db.dimension)
    result = synthesize(target, db, cfg)
    write_wav(result.waveform, args.output)
    logger.info(
        f'Wrote {args.output}: {len(result.waveform)} samples '
        f'({result.waveform.duration:.3f} s)'
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    reference = read_wav(_existing(args.reference))
    estimate = read_wav(_existing(args.estimate))
    params = _stft_params(args)
    length = min(len(reference), len(estimate))
    if len(reference) != len(estimate):
        logger.warning(
            f'Lengths differ ({len(reference)} and {len(estimate)} samples), '
            f'scoring the first {length}'
        )

    def spectrogram(w: Waveform):
        trimmed = Waveform(w.samples[:length], w.sample_rate)
        return magnitude_spectrogram(pad_to(trimmed, params.frame_len), params)

    s, s_hat = spectrogram(reference), spectrogram(estimate)
    scores = {
        'relative_error_db': relative_error_db(s, s_hat),
        'mse_db': mse_db(s, s_hat),
        'kl': spectrogram_kl(s, s_hat),
    }
    print(json.dumps(scores, indent=2))
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    mode = DatabaseMode(args.mode)
    if args.M:
        M_values = tuple(args.M)
    elif mode is DatabaseMode.SEGMENT:
        M_values = all_feature_combos()
    else:
        M_values = ('3', '8')
    if args.methods:
        methods = tuple(SynthMethod(m) for m in args.methods)
    elif mode is DatabaseMode.SEGMENT:
        methods = (SynthMethod.ADD_MEDIAN, SynthMethod.ADD_MEAN, SynthMethod.ADD_MAX)
    else:
        methods = (SynthMethod.FRAME_MEDIAN,)
    spec = ExperimentSpec(
        mode=mode,
        M_values=M_values,
        N_values=tuple(args.N or (1000,)),
        P_values=tuple(args.P or (get_settings().neighbors,)),
        methods=methods,
        trials=args.trials,
        split_seed=args.seed,
        genre_exclusion=not args.no_genre_exclusion,
        test_frames=args.test_frames,
        test_segments=args.test_segments,
        excerpt_seconds=args.excerpt_seconds,
        stft=_stft_params(args),
    )
    label = 'genre' if mode is DatabaseMode.SEGMENT else 'speaker'
    corpus = load_corpus(_existing(args.corpus), args.labels_from_dirs, label)
    report = run_experiment(spec, corpus, args.workers)
    report.write_csv(args.csv)
    if args.summary:
        report.write_summary(args.summary)
    for cell in report.summary():
        logger.info(
            f'{cell.method} M={cell.feature_combo} N={cell.N} P={cell.P}: '
            f'{cell.relative_error_db:.3f} dB, KL {cell.kl:.4f}'
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='exemplar-synth',
        description='Audio synthesis from features with a development database'
    )
    parser.add_argument('--log-level', default=None)
    commands = parser.add_subparsers(dest='command', required=True)

    extract = commands.add_parser('extract', help='analyze a WAV file into feature JSON')
    extract.add_argument('input')
    extract.add_argument('-o', '--output', required=True)
    extract.add_argument('--features', choices=['3', '8', '11', '21'], default=None)
    _add_stft_flags(extract)
    extract.set_defaults(handler=cmd_extract)

    build = commands.add_parser('build-db', help='build and save a development database')
    build.add_argument('corpus', nargs='+', help='WAV files or directories')
    build.add_argument('-o', '--output', required=True)
    build.add_argument('--mode', choices=[m.value for m in DatabaseMode], default='segment')
    build.add_argument('--features', choices=[s.value for s in FeatureSet], default=None)
    build.add_argument('--labels-from-dirs', action='store_true')
    build.add_argument('--workers', type=int, default=None)
    _add_stft_flags(build)
    build.set_defaults(handler=cmd_build_db)

    synth = commands.add_parser('synth', help='synthesize a target from a database')
    synth.add_argument('--db', required=True)
    synth.add_argument('--target', required=True, help='WAV audio or analysis JSON')
    synth.add_argument('-o', '--output', required=True)
    synth.add_argument('--method', choices=[m.value for m in SynthMethod], default='cross-plain')
    synth.add_argument('--P', type=int, default=None)
    synth.add_argument('--use', default=None, help='feature groups, e.g. chroma,timbre')
    synth.add_argument('--weight', type=_parse_weight, action='append', help='j=w, 1-based')
    synth.add_argument('--lambda-v', type=float, default=None)
    synth.add_argument('--transition', choices=['same-file', 'feature'], default='same-file')
    synth.add_argument('--gain', choices=['peak', 'loudness'], default='peak')
    synth.add_argument('--crossfade-ms', type=float, default=0.0)
    synth.add_argument('--gl-iters', type=int, default=None)
    synth.add_argument('--seed', type=int, default=0)
    synth.set_defaults(handler=cmd_synth)

    evaluate = commands.add_parser('eval', help='score an estimate against its reference')
    evaluate.add_argument('--reference', required=True)
    evaluate.add_argument('--estimate', required=True)
    _add_stft_flags(evaluate)
    evaluate.set_defaults(handler=cmd_eval)

    experiment = commands.add_parser('experiment', help='run the parameter-grid experiment')
    experiment.add_argument('corpus')
    experiment.add_argument('--csv', required=True)
    experiment.add_argument('--summary', default=None)
    experiment.add_argument('--mode', choices=[m.value for m in DatabaseMode], default='frame')
    experiment.add_argument('--M', nargs='+', default=None, help='feature sets or group combinations')
    experiment.add_argument('--N', nargs='+', type=int, default=None)
    experiment.add_argument('--P', nargs='+', type=int, default=None)
    experiment.add_argument('--methods', nargs='+', choices=[m.value for m in SynthMethod], default=None)
    experiment.add_argument('--trials', type=int, default=25)
    experiment.add_argument('--seed', type=int, default=0)
    experiment.add_argument('--test-frames', type=int, default=100)
    experiment.add_argument('--test-segments', type=int, default=20)
    experiment.add_argument('--excerpt-seconds', type=float, default=10.0)
    experiment.add_argument('--no-genre-exclusion', action='store_true')
    experiment.add_argument('--labels-from-dirs', action='store_true')
    experiment.add_argument('--workers', type=int, default=None)
    _add_stft_flags(experiment)
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except MissingInputError as e:
        logger.error(str(e))
        return 2
    except Exception as e:
        logger.error(f'{type(e).__name__}: {e}')
        return 1


def run():
    sys.exit(cli_main())


if __name__ == '__main__':
    run()
