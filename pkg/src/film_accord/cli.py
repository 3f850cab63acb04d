"""Batch command-line entry points for every pipeline stage.

Human-readable tables go to stdout by default; ``--format structured`` emits
JSON that round-trips through the module readers. Exit codes: 0 success,
1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analytics import (
    emotion_distribution,
    genre_emotion_matrix,
    rank_series,
    survey_emotion_correlation,
)
from .catalog_ingest import CatalogError, load_catalog, load_catalogs, record_from_dict
from .channels import ColorEmotionKB, EmotionLexicon
from .consensus import (
    DEFAULT_MEAN_THRESHOLD,
    evaluate_entries,
    load_feedback_batch,
)
from .emotion_model import (
    DEFAULT_THRESHOLD,
    EMOTIONS,
    ChannelWeights,
    EmotionScores,
    round2,
)
from .fuzzy_inference import default_system, load_fis
from .recommender import GroupRequest, movie_profile, prediction_accuracy, recommend

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}", EXIT_VALIDATION) from None


def _load_fis_arg(path: str | None):
    if path is None:
        return default_system()
    if not Path(path).exists():
        raise CliError(f"{path}: no such file", EXIT_IO)
    try:
        return load_fis(path)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None


def _load_catalog_arg(paths):
    for path in paths:
        if not Path(path).exists():
            raise CliError(f"{path}: no such file", EXIT_IO)
    try:
        return load_catalogs(paths)
    except CatalogError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None


def _weights_arg(value) -> ChannelWeights:
    """Accept 'p,m,d' flag text or a [p, m, d] list from a request file."""
    if value is None:
        return ChannelWeights()
    try:
        parts = value.split(",") if isinstance(value, str) else list(value)
        p, m, d = (float(v) for v in parts)
        return ChannelWeights(poster=p, soundtrack=m, description=d)
    except (TypeError, ValueError) as exc:
        raise CliError(f"weights expect 'poster,soundtrack,description': {exc}", EXIT_VALIDATION) from None


def _scores_table(rows: list[tuple[str, EmotionScores]]) -> str:
    header = "movie".ljust(24) + "".join(e.value.rjust(10) for e in EMOTIONS)
    lines = [header]
    for label, scores in rows:
        rounded = scores.rounded()
        lines.append(label[:24].ljust(24) + "".join(f"{rounded[e.value]:10.2f}" for e in EMOTIONS))
    return "\n".join(lines)


def _emit(args, structured: dict, human: str) -> None:
    if args.format == "structured":
        print(json.dumps(structured, indent=2))
    else:
        print(human)


# --- subcommands -------------------------------------------------------------


def _cmd_analyze(args) -> int:
    raw = _read_json(args.movie_file)
    if isinstance(raw, dict) and "records" in raw:
        raise CliError(f"{args.movie_file}: expected a single movie document, got a catalog", EXIT_VALIDATION)
    try:
        record, _ = record_from_dict(raw, where=args.movie_file)
    except CatalogError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    weights = _weights_arg(args.weights)
    try:
        profile = movie_profile(record, weights, EmotionLexicon.default(), ColorEmotionKB.default())
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    structured = {"id": record.id, "title": record.title, "profile": profile.as_dict()}
    _emit(args, structured, _scores_table([(record.title, profile)]))
    return EXIT_OK


def _cmd_recommend(args) -> int:
    group = _read_json(args.group)
    catalog = _load_catalog_arg(args.catalog)
    weights = _weights_arg(args.weights or group.get("weights"))
    threshold = args.threshold if args.threshold is not None else group.get("threshold", DEFAULT_THRESHOLD)
    try:
        participants = []
        for item in group["participants"]:
            favorite = item["favorite"]
            if isinstance(favorite, dict):
                record, _ = record_from_dict(favorite, where=f"{args.group}: inline favorite")
            else:
                record = catalog.get(str(favorite))
            participants.append((str(item["id"]), record))
        candidates = tuple(catalog.get(str(mid)) for mid in group["candidates"])
        request = GroupRequest(
            participants=tuple(participants),
            candidates=candidates,
            threshold=float(threshold),
            weights=weights,
            genre_filter=args.genre_filter,
        )
        ranking = recommend(request, EmotionLexicon.default(), ColorEmotionKB.default())
    except (KeyError, CatalogError, ValueError) as exc:
        raise CliError(f"{args.group}: {exc}", EXIT_VALIDATION) from None
    structured = ranking.as_dict()
    lines = ["rank  movie                     score  genre-affinity"]
    for i, entry in enumerate(ranking.entries, 1):
        lines.append(f"{i:<5d} {entry.movie_id:<24s} {round2(entry.score):5.2f}  {entry.genre_affinity}")
    _emit(args, structured, "\n".join(lines))
    return EXIT_OK


def _cmd_consensus(args) -> int:
    if not Path(args.feedback).exists():
        raise CliError(f"{args.feedback}: no such file", EXIT_IO)
    fis = _load_fis_arg(args.fis)
    try:
        entries = load_feedback_batch(args.feedback)
        report = evaluate_entries(entries, fis, mean_threshold=args.mean_threshold)
    except ValueError as exc:
        raise CliError(f"{args.feedback}: {exc}", EXIT_VALIDATION) from None
    body = report.as_dict()
    lines = ["participant        agreement  confidence  feedback"]
    for entry, value in zip(entries, body["feedback_values"]):
        lines.append(
            f"{entry.participant:<18s} {entry.agreement:9.1f}  {entry.confidence:10.1f}  {value:8.2f}"
        )
    lines.append(f"iqr: {body['iqr']:.2f}")
    lines.append(f"mean: {body['mean']:.2f}")
    lines.append(f"verdict: {body['verdict']}")
    lines.append(f"level: {body['level']}")
    _emit(args, body, "\n".join(lines))
    return EXIT_OK


def _parse_scores_list(raw, where: str) -> list[EmotionScores]:
    if not isinstance(raw, list):
        raise CliError(f"{where}: expected a JSON list of score sets", EXIT_VALIDATION)
    out = []
    for i, item in enumerate(raw):
        scores = item.get("scores", item) if isinstance(item, dict) else item
        try:
            out.append(EmotionScores.from_mapping(scores, where=f"{where}[{i}]"))
        except (ValueError, AttributeError, TypeError) as exc:
            raise CliError(f"{where}[{i}]: {exc}", EXIT_VALIDATION) from None
    return out


def _cmd_accuracy(args) -> int:
    predicted = _parse_scores_list(_read_json(args.predicted), args.predicted)
    human = _parse_scores_list(_read_json(args.human), args.human)
    try:
        values, mean = prediction_accuracy(predicted, human, threshold=args.threshold)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    structured = {"jaccard": [round2(v) for v in values], "mean": round2(mean)}
    lines = [f"movie {i + 1}: {round2(v):.2f}" for i, v in enumerate(values)]
    lines.append(f"mean: {round2(mean):.2f}")
    _emit(args, structured, "\n".join(lines))
    return EXIT_OK


def _cmd_corpus_stats(args) -> int:
    catalog = _load_catalog_arg(args.catalog)
    try:
        catalog.validate_ranked()
        series = {e.value: rank_series(catalog, e) for e in EMOTIONS}
        matrix = genre_emotion_matrix(catalog)
        distribution = emotion_distribution(catalog, threshold=args.threshold)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None

    structured: dict = {
        "rank_series": {
            name: {"mean": round2(s.mean), "points": [[r, round2(v)] for r, v in s.points]}
            for name, s in series.items()
        },
        "genre_emotion_matrix": {
            genre: {e: round2(v) for e, v in row.items()} for genre, row in matrix.items()
        },
        "emotion_distribution": {e.value: round2(p) for e, p in distribution.items()},
    }

    lines = ["# emotion means along popularity ranking"]
    for name, s in series.items():
        lines.append(f"{name:<10s} mean {round2(s.mean):.2f}")
    lines.append("")
    lines.append("# genre x emotion mean scores")
    lines.append("genre".ljust(16) + "".join(e.value.rjust(10) for e in EMOTIONS))
    for genre, row in matrix.items():
        lines.append(genre[:16].ljust(16) + "".join(f"{round2(row[e.value]):10.2f}" for e in EMOTIONS))
    lines.append("")
    lines.append(f"# emotion distribution (score > {args.threshold})")
    for e, p in distribution.items():
        lines.append(f"{e.value:<10s} {round2(p):.2f}")

    if args.survey:
        rows = _read_json(args.survey)
        try:
            corr = survey_emotion_correlation(rows)
        except ValueError as exc:
            raise CliError(f"{args.survey}: {exc}", EXIT_VALIDATION) from None
        structured["survey_correlation"] = {
            a: {b: (round2(v) if v is not None else None) for b, v in row.items()}
            for a, row in corr.items()
        }
        lines.append("")
        lines.append("# survey emotion correlation")
        lines.append("".ljust(10) + "".join(e.value.rjust(10) for e in EMOTIONS))
        for a in EMOTIONS:
            cells = []
            for b in EMOTIONS:
                v = corr[a.value][b.value]
                cells.append("   undef  " if v is None else f"{round2(v):10.2f}")
            lines.append(a.value.ljust(10) + "".join(cells))

    _emit(args, structured, "\n".join(lines))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service_api import ServiceConfig, create_app

    catalog = _load_catalog_arg(args.catalog)
    fis = _load_fis_arg(args.fis)
    config = ServiceConfig(
        weights=_weights_arg(args.weights),
        threshold=args.threshold if args.threshold is not None else DEFAULT_THRESHOLD,
        mean_threshold=args.mean_threshold,
        cors_origins=tuple(args.cors_origin) if args.cors_origin else ("*",),
        state_file=args.state_file,
    )
    app = create_app(
        catalog,
        fis,
        EmotionLexicon.default(),
        ColorEmotionKB.default(),
        config,
        ui_dir=args.ui,
    )
    host, _, port = args.listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="film-accord",
        description="Group movie recommendation and consensus evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("table", "structured"), default="table",
                       help="output style (structured = JSON)")

    p = sub.add_parser("analyze", help="fused emotion profile for one movie file")
    p.add_argument("movie_file")
    p.add_argument("--weights", help="poster,soundtrack,description channel weights")
    add_format(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("recommend", help="rank a candidate pool for a group")
    p.add_argument("--group", required=True, help="group request JSON file")
    p.add_argument("--catalog", required=True, action="append", help="catalog file (repeatable)")
    p.add_argument("--weights")
    p.add_argument("--threshold", type=float)
    p.add_argument("--genre-filter", action="store_true",
                   help="drop candidates sharing no genre with any favorite")
    add_format(p)
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("consensus", help="evaluate a feedback batch file")
    p.add_argument("--feedback", required=True)
    p.add_argument("--fis", help="inference system definition file")
    p.add_argument("--mean-threshold", type=float, default=DEFAULT_MEAN_THRESHOLD)
    add_format(p)
    p.set_defaults(func=_cmd_consensus)

    p = sub.add_parser("accuracy", help="set similarity between predicted and human scores")
    p.add_argument("--predicted", required=True)
    p.add_argument("--human", required=True)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    add_format(p)
    p.set_defaults(func=_cmd_accuracy)

    p = sub.add_parser("corpus-stats", help="rank series, genre matrix and emotion distribution")
    p.add_argument("--catalog", required=True, action="append")
    p.add_argument("--threshold", type=float, default=0.2)
    p.add_argument("--survey", help="survey response matrix JSON for the correlation block")
    add_format(p)
    p.set_defaults(func=_cmd_corpus_stats)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--catalog", required=True, action="append")
    p.add_argument("--fis")
    p.add_argument("--weights")
    p.add_argument("--threshold", type=float)
    p.add_argument("--mean-threshold", type=float, default=DEFAULT_MEAN_THRESHOLD)
    p.add_argument("--cors-origin", action="append")
    p.add_argument("--state-file")
    p.add_argument("--ui", help="directory with the built web UI to serve")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
