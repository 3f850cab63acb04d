"""Movie metadata loading, validation, persistence and (optional) fetching.

The design is file-first: every analysis and test path runs from catalog
files on disk. The metadata-service client exists for pulling fresh records
from a TMDB-style HTTP API, but nothing downstream requires the network.

Catalog files are JSON documents with a ``schema: 1`` header::

    {"schema": 1, "records": [{"id": ..., "title": ..., ...}, ...]}

Each record mirrors :class:`MovieRecord`, plus a ``provenance`` tag telling
whether the row came from a file, a fetch, or a synthetic fixture.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import requests

from .channels import PosterImage, validate_segment_labels
from .emotion_model import EmotionScores

API_KEY_ENV = "FILM_ACCORD_API_KEY"
SCHEMA_VERSION = 1
PROVENANCES = ("file", "fetched", "synthetic-fixture")


class CatalogError(ValueError):
    """Invalid catalog content; message carries record and field context."""


class PosterDecodeError(ValueError):
    """Poster file unreadable or not a supported raster format."""


class MetadataServiceError(RuntimeError):
    """Base class for fetch-client failures."""


class MovieNotFoundError(MetadataServiceError):
    pass


class RateLimitedError(MetadataServiceError):
    pass


class ResponseDecodeError(MetadataServiceError):
    """Service answered, but the body is missing or mistypes a field."""


@dataclass(frozen=True)
class ChannelScores:
    """Cached per-channel scores, used to replay published table rows."""

    poster: Optional[EmotionScores] = None
    soundtrack: Optional[EmotionScores] = None
    description: Optional[EmotionScores] = None


@dataclass(frozen=True)
class MovieRecord:
    id: str
    title: str
    overview: str = ""
    genres: tuple[str, ...] = ()
    poster_path: Optional[str] = None
    poster_palette: Optional[tuple[tuple[int, int, int], ...]] = None
    soundtrack_labels: Optional[tuple[int, ...]] = None
    popularity_rank: Optional[int] = None
    cached_channels: Optional[ChannelScores] = None
    cached_profile: Optional[EmotionScores] = None

    def __post_init__(self):
        if not self.id:
            raise CatalogError("record with empty id")
        if not self.title:
            raise CatalogError(f"record {self.id!r}: empty title")
        for genre in self.genres:
            if not genre or not genre.strip():
                raise CatalogError(f"record {self.id!r}: blank genre entry")
        if self.soundtrack_labels is not None:
            try:
                validate_segment_labels(self.soundtrack_labels)
            except ValueError as exc:
                raise CatalogError(f"record {self.id!r}: soundtrack_labels: {exc}") from None
        if self.popularity_rank is not None and self.popularity_rank < 1:
            raise CatalogError(f"record {self.id!r}: popularity_rank must be positive")

    def inline_poster(self) -> Optional[PosterImage]:
        """Poster pixels from the inline palette, one pixel per palette color."""
        if self.poster_palette is None:
            return None
        return PosterImage.from_rows([list(self.poster_palette)])


@dataclass
class Catalog:
    """Id-keyed movie collection with per-record provenance."""

    records: dict[str, MovieRecord] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def add(self, record: MovieRecord, provenance: str) -> None:
        if provenance not in PROVENANCES:
            raise CatalogError(f"record {record.id!r}: unknown provenance {provenance!r}")
        if record.id in self.records:
            raise CatalogError(f"duplicate movie id {record.id!r}")
        self.records[record.id] = record
        self.provenance[record.id] = provenance

    def get(self, movie_id: str) -> MovieRecord:
        try:
            return self.records[movie_id]
        except KeyError:
            raise KeyError(f"unknown movie id {movie_id!r}") from None

    def __contains__(self, movie_id: str) -> bool:
        return movie_id in self.records

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records.values())

    def merge(self, other: "Catalog") -> None:
        for record in other:
            self.add(record, other.provenance[record.id])

    def validate_ranked(self) -> None:
        """Popularity ranks, where present, must be unique."""
        seen: dict[int, str] = {}
        for record in self:
            rank = record.popularity_rank
            if rank is None:
                continue
            if rank in seen:
                raise CatalogError(
                    f"record {record.id!r}: popularity_rank {rank} already used by {seen[rank]!r}"
                )
            seen[rank] = record.id


def _scores_from(raw, where: str) -> EmotionScores:
    if not isinstance(raw, dict):
        raise CatalogError(f"{where}: emotion scores must be an object")
    try:
        return EmotionScores.from_mapping(raw, where=where)
    except ValueError as exc:
        raise CatalogError(str(exc)) from None


def record_from_dict(raw: dict, where: str = "record") -> tuple[MovieRecord, str]:
    """Build one validated record (plus provenance) from parsed JSON."""
    try:
        movie_id = str(raw["id"])
        title = str(raw["title"])
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"{where}: missing field {exc}") from None
    ctx = f"record {movie_id!r}"

    poster = raw.get("poster")
    poster_path = None
    poster_palette = None
    if isinstance(poster, str):
        poster_path = poster
    elif isinstance(poster, dict) and "palette" in poster:
        try:
            poster_palette = tuple(tuple(int(v) for v in rgb) for rgb in poster["palette"])
        except (TypeError, ValueError):
            raise CatalogError(f"{ctx}: poster palette must be [[r,g,b], ...]") from None
    elif poster is not None:
        raise CatalogError(f"{ctx}: poster must be a path string or {{'palette': ...}}")

    cached = None
    if raw.get("cached_channels") is not None:
        cc = raw["cached_channels"]
        if not isinstance(cc, dict):
            raise CatalogError(f"{ctx}: cached_channels must be an object")
        cached = ChannelScores(
            poster=_scores_from(cc["poster"], f"{ctx}: cached poster scores") if "poster" in cc else None,
            soundtrack=_scores_from(cc["soundtrack"], f"{ctx}: cached soundtrack scores") if "soundtrack" in cc else None,
            description=_scores_from(cc["description"], f"{ctx}: cached description scores") if "description" in cc else None,
        )

    profile = None
    if raw.get("cached_profile") is not None:
        profile = _scores_from(raw["cached_profile"], f"{ctx}: cached profile")

    labels = raw.get("soundtrack_labels")
    try:
        record = MovieRecord(
            id=movie_id,
            title=title,
            overview=str(raw.get("overview", "")),
            genres=tuple(str(g) for g in raw.get("genres", [])),
            poster_path=poster_path,
            poster_palette=poster_palette,
            soundtrack_labels=tuple(int(v) for v in labels) if labels is not None else None,
            popularity_rank=int(raw["popularity_rank"]) if raw.get("popularity_rank") is not None else None,
            cached_channels=cached,
            cached_profile=profile,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise CatalogError(f"{ctx}: {exc}") from None
    provenance = raw.get("provenance", "file")
    return record, provenance


def record_to_dict(record: MovieRecord, provenance: str) -> dict:
    out: dict = {"id": record.id, "title": record.title}
    if record.overview:
        out["overview"] = record.overview
    if record.genres:
        out["genres"] = list(record.genres)
    if record.poster_path is not None:
        out["poster"] = record.poster_path
    elif record.poster_palette is not None:
        out["poster"] = {"palette": [list(rgb) for rgb in record.poster_palette]}
    if record.soundtrack_labels is not None:
        out["soundtrack_labels"] = list(record.soundtrack_labels)
    if record.popularity_rank is not None:
        out["popularity_rank"] = record.popularity_rank
    if record.cached_channels is not None:
        cc = {}
        for name in ("poster", "soundtrack", "description"):
            scores = getattr(record.cached_channels, name)
            if scores is not None:
                cc[name] = scores.as_dict()
        out["cached_channels"] = cc
    if record.cached_profile is not None:
        out["cached_profile"] = record.cached_profile.as_dict()
    out["provenance"] = provenance
    return out


def load_catalog(path: str | Path) -> Catalog:
    """Parse and validate a catalog file; every complaint names its record."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"{path}: parse error at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, dict) or raw.get("schema") != SCHEMA_VERSION:
        raise CatalogError(f"{path}: expected a catalog document with schema: {SCHEMA_VERSION}")
    catalog = Catalog()
    for i, item in enumerate(raw.get("records", [])):
        record, provenance = record_from_dict(item, where=f"{path}: record {i}")
        try:
            catalog.add(record, provenance)
        except CatalogError as exc:
            raise CatalogError(f"{path}: {exc}") from None
    return catalog


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    doc = {
        "schema": SCHEMA_VERSION,
        "records": [record_to_dict(r, catalog.provenance[r.id]) for r in catalog],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_catalogs(paths: Iterable[str | Path]) -> Catalog:
    merged = Catalog()
    for path in paths:
        merged.merge(load_catalog(path))
    return merged


# --- poster decoding -------------------------------------------------------

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def decode_poster(path: str | Path) -> PosterImage:
    """Decode a poster file to raw RGB.

    PNG is handled through Pillow; a plain-text P3 PPM is supported so tests
    and fixtures can carry posters without binary blobs.
    """
    path = Path(path)
    try:
        head = path.open("rb").read(8)
    except OSError as exc:
        raise PosterDecodeError(f"{path}: unreadable: {exc}") from None
    if head.startswith(_PNG_MAGIC):
        return _decode_png(path)
    if head[:2] == b"P3":
        return _decode_ppm_text(path)
    raise PosterDecodeError(f"{path}: unsupported poster format (expected PNG or text PPM)")


def _decode_png(path: Path) -> PosterImage:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            return PosterImage(width=rgb.width, height=rgb.height, pixels=rgb.tobytes())
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise PosterDecodeError(f"{path}: corrupt PNG: {exc}") from None


def _decode_ppm_text(path: Path) -> PosterImage:
    try:
        tokens = []
        for line in path.read_text("ascii").splitlines():
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    except (OSError, UnicodeDecodeError) as exc:
        raise PosterDecodeError(f"{path}: unreadable PPM: {exc}") from None
    try:
        if tokens[0] != "P3":
            raise PosterDecodeError(f"{path}: not a P3 PPM")
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
        values = [int(t) for t in tokens[4:]]
        if maxval != 255:
            raise PosterDecodeError(f"{path}: only maxval 255 supported")
        if len(values) != width * height * 3:
            raise PosterDecodeError(
                f"{path}: truncated PPM: {len(values)} samples for {width}x{height}"
            )
        if any(not 0 <= v <= 255 for v in values):
            raise PosterDecodeError(f"{path}: sample out of range")
        return PosterImage(width=width, height=height, pixels=bytes(values))
    except (IndexError, ValueError) as exc:
        raise PosterDecodeError(f"{path}: truncated or malformed PPM: {exc}") from None


# --- metadata-service client ------------------------------------------------


class MetadataClient:
    """HTTP client for a TMDB-style movie metadata service.

    Endpoints: GET <base>/movie/<id> and GET <base>/search?q=<title>.
    The credential comes from the FILM_ACCORD_API_KEY environment variable
    unless passed explicitly. At most ``max_in_flight`` requests run
    concurrently against the host.
    """

    def __init__(self, base_url: str, api_key: Optional[str] = None,
                 max_in_flight: int = 4, timeout: float = 10.0,
                 session: Optional[requests.Session] = None):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.timeout = timeout
        self._throttle = threading.BoundedSemaphore(max_in_flight)
        self._session = session or requests.Session()

    def _get(self, path: str, params: Optional[dict] = None) -> dict:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        with self._throttle:
            try:
                response = self._session.get(
                    f"{self.base_url}{path}", params=params, headers=headers,
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                raise MetadataServiceError(f"request to {path} failed: {exc}") from None
        if response.status_code == 404:
            raise MovieNotFoundError(f"{path}: not found")
        if response.status_code == 429:
            raise RateLimitedError(f"{path}: rate limited")
        if response.status_code != 200:
            raise MetadataServiceError(f"{path}: unexpected status {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise ResponseDecodeError(f"{path}: body is not JSON: {exc}") from None

    def get_movie(self, movie_id: str) -> dict:
        return self._get(f"/movie/{movie_id}")

    def search(self, title: str) -> list[dict]:
        body = self._get("/search", params={"q": title})
        results = body.get("results")
        if not isinstance(results, list):
            raise ResponseDecodeError("search: missing 'results' list")
        return results


def _record_from_service(body: dict) -> MovieRecord:
    for required in ("id", "title", "overview", "genres"):
        if required not in body:
            raise ResponseDecodeError(f"movie body missing field {required!r}")
    if not isinstance(body["genres"], list):
        raise ResponseDecodeError("movie body field 'genres' must be a list")
    try:
        return MovieRecord(
            id=str(body["id"]),
            title=str(body["title"]),
            overview=str(body["overview"]),
            genres=tuple(str(g) for g in body["genres"]),
            poster_path=body.get("poster"),
            # Segment classification is external: fetched records carry no labels.
            soundtrack_labels=None,
            popularity_rank=int(body["popularity_rank"]) if body.get("popularity_rank") else None,
        )
    except (CatalogError, TypeError, ValueError) as exc:
        raise ResponseDecodeError(f"movie body invalid: {exc}") from None


def fetch_movie(client: MetadataClient, title_query: str) -> tuple[MovieRecord, str]:
    """Search the service and return the best-matching validated record.

    Returns (record, provenance) with provenance always "fetched". Failures
    raise typed errors; a partially valid body never yields a record.
    """
    results = client.search(title_query)
    if not results:
        raise MovieNotFoundError(f"no match for title {title_query!r}")
    first = results[0]
    if "id" not in first:
        raise ResponseDecodeError("search result missing field 'id'")
    body = client.get_movie(str(first["id"]))
    return _record_from_service(body), "fetched"
