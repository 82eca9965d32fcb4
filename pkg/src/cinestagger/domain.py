"""Core data model for staggered-showtime scheduling instances.

An instance describes one or more clusters of neighbouring theatre
locations: the screens in each location, the films on offer with their
daily showtime configurations, and an attendance forecast for playing a
given film configuration on a given screen.

Representation choices that everything downstream relies on:

* Times are minutes since midnight, exact integers.  ``"HH:MM"`` strings
  in instance files may run past ``23:59`` (up to ``27:59``) so that late
  shows crossing midnight stay on the same scheduling day.
* Attendance coefficients are stored as integer milliunits (fixed
  denominator of 1000), so objective values and optimality comparisons
  are exact integer arithmetic end to end.
* Screens are re-indexed to ``1..S`` in file order on load; the original
  document id is kept on each screen and written back on serialization.

Instances are immutable after loading and safe to share across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

MILLI = 1000          # fixed scaling denominator for attendance coefficients
MAX_MINUTES = 1679    # 27:59 -- latest representable time of day

_TIME_RE = re.compile(r"^(\d{1,2}):([0-5]\d)$")


class InstanceError(Exception):
    """Base class for instance loading problems."""


class InstanceFormatError(InstanceError):
    """The document is structurally unusable: bad JSON, missing or
    mistyped keys, unparsable times or coefficients."""


class InstanceDataError(InstanceError):
    """The document parsed but violates instance invariants."""

    def __init__(self, violations: Iterable["Violation"]):
        self.violations = list(violations)
        super().__init__("\n".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Violation:
    """One failed invariant, with the offending entity named in the message."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def parse_hhmm(text: str) -> int:
    """Parse an ``"HH:MM"`` string to minutes since midnight.

    Hours may exceed 23 (up to 27:59) for showtimes that cross midnight.
    """
    match = _TIME_RE.match(text.strip()) if isinstance(text, str) else None
    if match is None:
        raise InstanceFormatError(f"bad time {text!r}: expected \"HH:MM\"")
    minutes = int(match.group(1)) * 60 + int(match.group(2))
    if minutes > MAX_MINUTES:
        raise InstanceFormatError(
            f"time {text!r} is past {format_hhmm(MAX_MINUTES)}"
        )
    return minutes


def format_hhmm(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def parse_attendance(value) -> int:
    """Parse an attendance coefficient to exact integer milliunits.

    Accepts ints, Decimals (json parsed with ``parse_float=Decimal``) and
    decimal strings.  More than three decimal places cannot be represented
    on the fixed denominator and is rejected.
    """
    if isinstance(value, bool):
        raise InstanceFormatError(f"bad attendance value {value!r}")
    if isinstance(value, int):
        return value * MILLI
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, (str, Decimal)):
        try:
            milli = Decimal(value) * MILLI
        except InvalidOperation:
            raise InstanceFormatError(f"bad attendance value {value!r}") from None
        if milli != milli.to_integral_value():
            raise InstanceFormatError(
                f"attendance {value} has more than 3 decimal places"
            )
        return int(milli)
    raise InstanceFormatError(f"bad attendance value {value!r}")


def format_attendance(milli: int) -> str:
    """Render milliunits as an exact decimal string, e.g. 226500 -> "226.5"."""
    sign = "-" if milli < 0 else ""
    units, rem = divmod(abs(milli), MILLI)
    if rem == 0:
        return f"{sign}{units}"
    return f"{sign}{units}." + f"{rem:03d}".rstrip("0")


def attendance_to_json(milli: int):
    """Milliunits back to a JSON number (int when integral)."""
    if milli % MILLI == 0:
        return milli // MILLI
    return float(format_attendance(milli))


@dataclass(frozen=True)
class Film:
    film_id: int
    title: str
    runtime_minutes: int


@dataclass(frozen=True)
class Location:
    location_id: int
    name: str
    cluster_id: str
    open_time: int        # first possible showtime, minutes since midnight
    last_showtime: int    # latest allowed start time


@dataclass(frozen=True)
class Screen:
    screen_id: int                      # 1..S after loader re-indexing
    location_id: int
    external_id: Optional[int] = None   # id in the source document

    @property
    def source_id(self) -> int:
        return self.screen_id if self.external_id is None else self.external_id


@dataclass(frozen=True)
class ShowtimeConfiguration:
    film_id: int
    config_index: int
    showtimes: Tuple[int, ...]

    def key(self) -> Tuple[int, int]:
        return (self.film_id, self.config_index)


@dataclass(frozen=True)
class ForecastMatrix:
    """Predicted attendance per (screen, film, configuration), in milliunits."""

    entries: Dict[Tuple[int, int, int], int]

    def get(self, screen_id: int, film_id: int, config_index: int) -> int:
        return self.entries[(screen_id, film_id, config_index)]


@dataclass
class ClusterInstance:
    """One cluster of neighbouring locations: the unit the optimizer solves."""

    cluster_id: str
    locations: Tuple[Location, ...]
    screens: Tuple[Screen, ...]
    films: Tuple[Film, ...]
    configurations: Tuple[ShowtimeConfiguration, ...]
    stagger_interval_minutes: int
    forecast: ForecastMatrix

    @property
    def screen_count(self) -> int:
        return len(self.screens)

    @property
    def configuration_count(self) -> int:
        return len(self.configurations)

    @cached_property
    def film_by_id(self) -> Dict[int, Film]:
        return {f.film_id: f for f in self.films}

    @cached_property
    def location_by_id(self) -> Dict[int, Location]:
        return {l.location_id: l for l in self.locations}

    @cached_property
    def screen_by_id(self) -> Dict[int, Screen]:
        return {s.screen_id: s for s in self.screens}

    @cached_property
    def configuration_by_key(self) -> Dict[Tuple[int, int], ShowtimeConfiguration]:
        return {c.key(): c for c in self.configurations}

    def window(self) -> Tuple[int, int]:
        """Widest operating window over the cluster's locations."""
        return (
            min(l.open_time for l in self.locations),
            max(l.last_showtime for l in self.locations),
        )


@dataclass
class MultiClusterInstance:
    clusters: Tuple[ClusterInstance, ...]

    @property
    def cluster_ids(self) -> Tuple[str, ...]:
        return tuple(c.cluster_id for c in self.clusters)

    @property
    def total_screens(self) -> int:
        return sum(c.screen_count for c in self.clusters)

    def cluster(self, cluster_id: str) -> ClusterInstance:
        for c in self.clusters:
            if c.cluster_id == cluster_id:
                return c
        raise KeyError(cluster_id)


Instance = Union[ClusterInstance, MultiClusterInstance]


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise InstanceFormatError(f"{context}: missing key {key!r}")
    return obj[key]


def _require_int(value, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"{context}: expected an integer, got {value!r}")
    return value


def _require_str(value, context: str) -> str:
    if not isinstance(value, str):
        raise InstanceFormatError(f"{context}: expected a string, got {value!r}")
    return value


def _cluster_key(value, context: str) -> str:
    if isinstance(value, bool):
        raise InstanceFormatError(f"{context}: bad cluster_id {value!r}")
    if isinstance(value, int):
        return str(value)
    return _require_str(value, context)


def parse_document(obj, allow_partial: bool = False) -> MultiClusterInstance:
    """Build a (not yet validated) instance from a parsed JSON document.

    Structural problems raise :class:`InstanceFormatError`; broken
    references and duplicate identifiers raise :class:`InstanceDataError`.
    With ``allow_partial`` the ``forecast`` block may be missing or
    incomplete (used by ``generate-configs`` before forecasts exist).
    """
    if not isinstance(obj, dict):
        raise InstanceFormatError("instance document must be a JSON object")

    stagger = _require_int(
        _require(obj, "stagger_interval_minutes", "document"),
        "stagger_interval_minutes",
    )

    locations = []
    for entry in _as_list(_require(obj, "locations", "document"), "locations"):
        loc_id = _require_int(_require(entry, "id", "location"), "location id")
        locations.append(
            Location(
                location_id=loc_id,
                name=_require_str(_require(entry, "name", f"location {loc_id}"), f"location {loc_id} name"),
                cluster_id=_cluster_key(_require(entry, "cluster_id", f"location {loc_id}"), f"location {loc_id}"),
                open_time=parse_hhmm(_require(entry, "open_time", f"location {loc_id}")),
                last_showtime=parse_hhmm(_require(entry, "last_showtime", f"location {loc_id}")),
            )
        )
    if not locations:
        raise InstanceDataError([Violation("no_locations", "document defines no locations")])
    location_by_id = {}
    for loc in locations:
        if loc.location_id in location_by_id:
            raise InstanceDataError(
                [Violation("duplicate_location_id", f"location id {loc.location_id} appears more than once")]
            )
        location_by_id[loc.location_id] = loc

    screens = []
    seen_external = set()
    for position, entry in enumerate(_as_list(_require(obj, "screens", "document"), "screens"), start=1):
        ext_id = _require_int(_require(entry, "id", "screen"), "screen id")
        loc_id = _require_int(_require(entry, "location_id", f"screen {ext_id}"), f"screen {ext_id} location_id")
        if ext_id in seen_external:
            raise InstanceDataError(
                [Violation("duplicate_screen_id", f"screen id {ext_id} appears more than once")]
            )
        seen_external.add(ext_id)
        if loc_id not in location_by_id:
            raise InstanceDataError(
                [Violation("unknown_location", f"screen {ext_id} references unknown location {loc_id}")]
            )
        # re-index to 1..S in file order, keeping the document id around
        screens.append(Screen(screen_id=position, location_id=loc_id, external_id=ext_id))
    external_to_internal = {s.external_id: s.screen_id for s in screens}

    films = []
    film_scope: Dict[int, Optional[str]] = {}
    for entry in _as_list(_require(obj, "films", "document"), "films"):
        film_id = _require_int(_require(entry, "id", "film"), "film id")
        if film_id in film_scope:
            raise InstanceDataError(
                [Violation("duplicate_film_id", f"film id {film_id} appears more than once")]
            )
        films.append(
            Film(
                film_id=film_id,
                title=_require_str(_require(entry, "title", f"film {film_id}"), f"film {film_id} title"),
                runtime_minutes=_require_int(
                    _require(entry, "runtime_minutes", f"film {film_id}"), f"film {film_id} runtime"
                ),
            )
        )
        # films may be scoped to one cluster; unscoped films play in every cluster
        film_scope[film_id] = (
            _cluster_key(entry["cluster_id"], f"film {film_id}") if "cluster_id" in entry else None
        )

    configurations = []
    for entry in _as_list(obj.get("configurations", []), "configurations"):
        film_id = _require_int(_require(entry, "film_id", "configuration"), "configuration film_id")
        config_index = _require_int(
            _require(entry, "config_index", f"film {film_id} configuration"), "config_index"
        )
        if film_id not in film_scope:
            raise InstanceDataError(
                [Violation("unknown_film", f"configuration {config_index} references unknown film {film_id}")]
            )
        raw_times = _as_list(
            _require(entry, "showtimes", f"film {film_id} config {config_index}"),
            f"film {film_id} config {config_index} showtimes",
        )
        configurations.append(
            ShowtimeConfiguration(
                film_id=film_id,
                config_index=config_index,
                showtimes=tuple(parse_hhmm(t) for t in raw_times),
            )
        )

    forecast_raw = obj.get("forecast")
    if forecast_raw is None:
        if not allow_partial:
            raise InstanceFormatError("document: missing key 'forecast'")
        forecast_raw = []
    forecast_entries: Dict[Tuple[int, int, int], int] = {}
    for entry in _as_list(forecast_raw, "forecast"):
        ext_sid = _require_int(_require(entry, "screen_id", "forecast entry"), "forecast screen_id")
        film_id = _require_int(_require(entry, "film_id", "forecast entry"), "forecast film_id")
        config_index = _require_int(_require(entry, "config_index", "forecast entry"), "forecast config_index")
        triple = f"(screen {ext_sid}, film {film_id}, config {config_index})"
        if ext_sid not in external_to_internal:
            raise InstanceDataError(
                [Violation("unknown_screen", f"forecast entry {triple} references an unknown screen")]
            )
        if film_id not in film_scope:
            raise InstanceDataError(
                [Violation("unknown_film", f"forecast entry {triple} references an unknown film")]
            )
        key = (external_to_internal[ext_sid], film_id, config_index)
        if key in forecast_entries:
            raise InstanceDataError(
                [Violation("duplicate_forecast_entry", f"forecast entry {triple} appears more than once")]
            )
        forecast_entries[key] = parse_attendance(_require(entry, "attendance", f"forecast entry {triple}"))

    cluster_ids = sorted({loc.cluster_id for loc in locations})
    clusters = []
    for cluster_id in cluster_ids:
        cluster_locations = tuple(l for l in locations if l.cluster_id == cluster_id)
        location_ids = {l.location_id for l in cluster_locations}
        cluster_screens = tuple(s for s in screens if s.location_id in location_ids)
        cluster_films = tuple(
            f for f in films if film_scope[f.film_id] in (None, cluster_id)
        )
        film_ids = {f.film_id for f in cluster_films}
        cluster_configs = tuple(c for c in configurations if c.film_id in film_ids)
        if not configurations:
            cluster_configs = _generate_default_configurations(
                cluster_films, cluster_locations, stagger
            )
        screen_ids = {s.screen_id for s in cluster_screens}
        cluster_forecast = {
            k: v for k, v in forecast_entries.items() if k[0] in screen_ids
        }
        clusters.append(
            ClusterInstance(
                cluster_id=cluster_id,
                locations=cluster_locations,
                screens=cluster_screens,
                films=cluster_films,
                configurations=cluster_configs,
                stagger_interval_minutes=stagger,
                forecast=ForecastMatrix(cluster_forecast),
            )
        )

    # forecast rows must pair a screen with a film playing in its cluster
    claimed = set()
    for cluster in clusters:
        claimed.update(
            k for k in cluster.forecast.entries
            if k[1] in {f.film_id for f in cluster.films}
        )
    for key in forecast_entries:
        if key not in claimed:
            sid, film_id, config_index = key
            raise InstanceDataError(
                [
                    Violation(
                        "unknown_film",
                        f"forecast entry (screen {sid}, film {film_id}, config {config_index})"
                        " pairs a screen with a film outside its cluster",
                    )
                ]
            )

    return MultiClusterInstance(clusters=tuple(clusters))


def _as_list(value, context: str) -> list:
    if not isinstance(value, list):
        raise InstanceFormatError(f"{context}: expected a list, got {type(value).__name__}")
    for item in value:
        if context.endswith("showtimes"):
            break
        if not isinstance(item, dict):
            raise InstanceFormatError(f"{context}: entries must be objects")
    return value


def _generate_default_configurations(films, locations, stagger):
    # deferred import: confgen builds on the types above
    from .confgen import generate_configurations

    window = (
        min(l.open_time for l in locations),
        max(l.last_showtime for l in locations),
    )
    configs = []
    for film in sorted(films, key=lambda f: f.film_id):
        configs.extend(generate_configurations(film, window, stagger))
    return tuple(configs)


def load_instance(source: Union[str, Path, dict], allow_partial: bool = False) -> Instance:
    """Load and validate an instance document.

    ``source`` is a filesystem path or an already-parsed document dict.
    Returns a :class:`ClusterInstance` for single-cluster documents, a
    :class:`MultiClusterInstance` otherwise.  Raises
    :class:`InstanceFormatError` for unusable documents and
    :class:`InstanceDataError` (carrying all violations) for invalid ones.
    """
    if not isinstance(source, (str, Path)):
        obj = source
    else:
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InstanceFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
        try:
            obj = json.loads(text, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from exc

    instance = parse_document(obj, allow_partial=allow_partial)
    violations = validate_instance(instance, check_forecast=not allow_partial)
    if violations:
        raise InstanceDataError(violations)
    if len(instance.clusters) == 1:
        return instance.clusters[0]
    return instance


def validate_instance(instance: Instance, check_forecast: bool = True) -> List[Violation]:
    """Check every instance invariant; returns one violation per failure.

    Violations are data, not errors: an empty list means the instance is
    well-formed.
    """
    if isinstance(instance, MultiClusterInstance):
        violations = []
        seen_cluster_ids = set()
        all_screen_ids: List[int] = []
        for cluster in instance.clusters:
            if cluster.cluster_id in seen_cluster_ids:
                violations.append(
                    Violation("duplicate_cluster_id", f"cluster id {cluster.cluster_id!r} appears more than once")
                )
            seen_cluster_ids.add(cluster.cluster_id)
            all_screen_ids.extend(s.screen_id for s in cluster.screens)
            violations.extend(
                _validate_cluster(cluster, require_contiguous=False, check_forecast=check_forecast)
            )
        if len(set(all_screen_ids)) != len(all_screen_ids):
            violations.append(
                Violation("duplicate_screen_id", "screen ids are not globally unique across clusters")
            )
        elif all_screen_ids and set(all_screen_ids) != set(range(1, len(all_screen_ids) + 1)):
            violations.append(
                Violation(
                    "noncontiguous_screen_ids",
                    f"screen ids must form 1..{len(all_screen_ids)}, got {sorted(all_screen_ids)}",
                )
            )
        return violations
    return _validate_cluster(instance, require_contiguous=True, check_forecast=check_forecast)


def _validate_cluster(cluster: ClusterInstance, require_contiguous: bool, check_forecast: bool) -> List[Violation]:
    v: List[Violation] = []

    if cluster.stagger_interval_minutes < 1:
        v.append(
            Violation("bad_stagger_interval", f"stagger interval must be >= 1, got {cluster.stagger_interval_minutes}")
        )
    if not cluster.cluster_id:
        v.append(Violation("empty_cluster_id", "cluster id is empty"))

    if not cluster.locations:
        v.append(Violation("no_locations", f"cluster {cluster.cluster_id!r} has no locations"))
    seen_locations = set()
    for loc in cluster.locations:
        if loc.location_id in seen_locations:
            v.append(Violation("duplicate_location_id", f"location id {loc.location_id} appears more than once"))
        seen_locations.add(loc.location_id)
        if not loc.cluster_id:
            v.append(Violation("empty_cluster_id", f"location {loc.location_id} has an empty cluster id"))
        elif loc.cluster_id != cluster.cluster_id:
            v.append(
                Violation(
                    "location_outside_cluster",
                    f"location {loc.location_id} belongs to cluster {loc.cluster_id!r},"
                    f" not {cluster.cluster_id!r}",
                )
            )
        if loc.open_time > loc.last_showtime:
            v.append(
                Violation(
                    "window_inverted",
                    f"location {loc.location_id}: open time {format_hhmm(loc.open_time)}"
                    f" is after last showtime {format_hhmm(loc.last_showtime)}",
                )
            )
        for t in (loc.open_time, loc.last_showtime):
            if not 0 <= t <= MAX_MINUTES:
                v.append(Violation("time_out_of_range", f"location {loc.location_id}: time {t} out of range"))

    seen_screens = set()
    for screen in cluster.screens:
        if screen.screen_id in seen_screens:
            v.append(Violation("duplicate_screen_id", f"screen id {screen.screen_id} appears more than once"))
        seen_screens.add(screen.screen_id)
        if screen.location_id not in seen_locations:
            v.append(
                Violation(
                    "screen_outside_cluster",
                    f"screen {screen.screen_id} references location {screen.location_id}"
                    f" outside cluster {cluster.cluster_id!r}",
                )
            )
    if require_contiguous and cluster.screens:
        expected = set(range(1, cluster.screen_count + 1))
        if seen_screens != expected:
            v.append(
                Violation(
                    "noncontiguous_screen_ids",
                    f"screen ids must form 1..{cluster.screen_count}, got {sorted(seen_screens)}",
                )
            )

    if not cluster.films:
        v.append(Violation("no_films", f"cluster {cluster.cluster_id!r} has no films"))
    seen_films = set()
    for film in cluster.films:
        if film.film_id in seen_films:
            v.append(Violation("duplicate_film_id", f"film id {film.film_id} appears more than once"))
        seen_films.add(film.film_id)
        if film.runtime_minutes < 1:
            v.append(
                Violation("bad_runtime", f"film {film.film_id}: runtime must be >= 1, got {film.runtime_minutes}")
            )
        if film.film_id < 1:
            v.append(Violation("bad_film_id", f"film id {film.film_id} must be positive"))

    window = cluster.window() if cluster.locations else (0, MAX_MINUTES)
    films_with_configs = set()
    seen_config_keys = set()
    for config in cluster.configurations:
        label = f"film {config.film_id} config {config.config_index}"
        if config.key() in seen_config_keys:
            v.append(Violation("duplicate_config_index", f"{label} appears more than once"))
        seen_config_keys.add(config.key())
        if config.film_id not in seen_films:
            v.append(Violation("unknown_film", f"{label} references an unknown film"))
        films_with_configs.add(config.film_id)
        if config.config_index < 1:
            v.append(Violation("bad_config_index", f"{label}: config index must be positive"))
        if not config.showtimes:
            v.append(Violation("empty_configuration", f"{label} has no showtimes"))
        elif any(b <= a for a, b in zip(config.showtimes, config.showtimes[1:])):
            v.append(
                Violation(
                    "non_increasing_showtimes",
                    f"{label}: showtimes {[format_hhmm(t) for t in config.showtimes]}"
                    " are not strictly increasing",
                )
            )
        for t in config.showtimes:
            if not window[0] <= t <= window[1]:
                v.append(
                    Violation(
                        "showtime_outside_window",
                        f"{label}: showtime {format_hhmm(t)} is outside the cluster window"
                        f" {format_hhmm(window[0])}..{format_hhmm(window[1])}",
                    )
                )
    for film in cluster.films:
        if film.film_id not in films_with_configs:
            v.append(
                Violation("film_without_configurations", f"film {film.film_id} has no showtime configurations")
            )

    for (sid, film_id, config_index), milli in cluster.forecast.entries.items():
        if milli < 0:
            v.append(
                Violation(
                    "negative_coefficient",
                    f"forecast entry (screen {sid}, film {film_id}, config {config_index})"
                    f" is negative ({format_attendance(milli)})",
                )
            )
        if (film_id, config_index) not in seen_config_keys:
            v.append(
                Violation(
                    "unknown_configuration",
                    f"forecast entry (screen {sid}, film {film_id}, config {config_index})"
                    " references an unknown configuration",
                )
            )
        if sid not in seen_screens:
            v.append(
                Violation(
                    "unknown_screen",
                    f"forecast entry (screen {sid}, film {film_id}, config {config_index})"
                    " references an unknown screen",
                )
            )
    if check_forecast:
        for screen in cluster.screens:
            for config in cluster.configurations:
                key = (screen.screen_id, config.film_id, config.config_index)
                if key not in cluster.forecast.entries:
                    v.append(
                        Violation(
                            "missing_forecast_entry",
                            f"no forecast entry for (screen {screen.screen_id},"
                            f" film {config.film_id}, config {config.config_index})",
                        )
                    )
    return v


def serialize_instance(instance: Instance) -> dict:
    """Instance back to the document shape accepted by :func:`load_instance`."""
    clusters = instance.clusters if isinstance(instance, MultiClusterInstance) else (instance,)

    staggers = {c.stagger_interval_minutes for c in clusters}
    if len(staggers) != 1:
        raise ValueError("cannot serialize clusters with different stagger intervals into one document")

    doc: dict = {"stagger_interval_minutes": staggers.pop()}
    doc["locations"] = [
        {
            "id": loc.location_id,
            "name": loc.name,
            "cluster_id": loc.cluster_id,
            "open_time": format_hhmm(loc.open_time),
            "last_showtime": format_hhmm(loc.last_showtime),
        }
        for cluster in clusters
        for loc in cluster.locations
    ]

    screens = sorted(
        (s for cluster in clusters for s in cluster.screens), key=lambda s: s.screen_id
    )
    doc["screens"] = [{"id": s.source_id, "location_id": s.location_id} for s in screens]

    # films playing in every cluster are written once unscoped; films seen in
    # exactly one cluster carry that cluster's id
    film_clusters: Dict[int, List[str]] = {}
    film_objects: Dict[int, Film] = {}
    for cluster in clusters:
        for film in cluster.films:
            film_clusters.setdefault(film.film_id, []).append(cluster.cluster_id)
            film_objects[film.film_id] = film
    doc["films"] = []
    for film_id in sorted(film_clusters):
        film = film_objects[film_id]
        entry = {"id": film.film_id, "title": film.title, "runtime_minutes": film.runtime_minutes}
        owners = film_clusters[film_id]
        if len(owners) == 1 and len(clusters) > 1:
            entry["cluster_id"] = owners[0]
        elif len(owners) != len(clusters):
            raise ValueError(
                f"film {film_id} plays in {len(owners)} of {len(clusters)} clusters;"
                " only global or single-cluster films serialize"
            )
        doc["films"].append(entry)

    seen_configs = set()
    doc["configurations"] = []
    for cluster in clusters:
        for config in cluster.configurations:
            if config.key() in seen_configs:
                continue
            seen_configs.add(config.key())
            doc["configurations"].append(
                {
                    "film_id": config.film_id,
                    "config_index": config.config_index,
                    "showtimes": [format_hhmm(t) for t in config.showtimes],
                }
            )
    doc["configurations"].sort(key=lambda c: (c["film_id"], c["config_index"]))

    internal_to_external = {s.screen_id: s.source_id for s in screens}
    rows = sorted(
        (key, milli)
        for cluster in clusters
        for key, milli in cluster.forecast.entries.items()
    )
    doc["forecast"] = [
        {
            "screen_id": internal_to_external[sid],
            "film_id": film_id,
            "config_index": config_index,
            "attendance": attendance_to_json(milli),
        }
        for (sid, film_id, config_index), milli in rows
    ]
    return doc


def dumps_instance(instance: Instance) -> str:
    """Serialize to canonical JSON text (byte-deterministic for equal instances)."""
    return json.dumps(serialize_instance(instance), indent=2) + "\n"


def as_multi(instance: Instance) -> MultiClusterInstance:
    if isinstance(instance, MultiClusterInstance):
        return instance
    return MultiClusterInstance(clusters=(instance,))
