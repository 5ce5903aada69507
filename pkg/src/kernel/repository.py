"""Filesystem-backed storage for inputs, scenarios and reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Optional


class DataStore:
    """Locations of the lab inputs, scenarios and reports, with a JSON read cache."""

    def __init__(self, base_dir: Path | str | None = None):
        default_base = Path(__file__).resolve().parents[2]
        if base_dir is None:
            resolved_base = default_base
        else:
            resolved_base = Path(base_dir).expanduser()
            if not resolved_base.is_absolute():
                resolved_base = default_base / resolved_base
        resolved_base = resolved_base.resolve()
        self.base_dir = resolved_base
        self._base_anchor = resolved_base
        self.data_dir = self.base_dir / "data"
        self.reports_dir = self.data_dir / "reports"
        self.scenarios_dir = self.data_dir / "scenarios"
        self._json_cache: dict[Path, tuple[int, object]] = {}

    def _coerce_path(self, value: Path | str, relative_to: Path) -> Path:
        path = Path(value).expanduser()
        if not path.is_absolute():
            path = relative_to / path
        return path.resolve()

    def ensure_dirs(self) -> None:
        self.reports_dir.mkdir(parents=True, exist_ok=True)

    def configure_paths(self, paths: dict | None) -> None:
        """Apply path overrides from configuration."""

        if not isinstance(paths, dict):
            return

        base_override = paths.get("base_dir")
        if base_override is not None:
            base_dir = self._coerce_path(base_override, self._base_anchor)
        else:
            base_dir = self._base_anchor
        self.base_dir = base_dir

        data_dir = base_dir / "data"
        if paths.get("data_dir") is not None:
            data_dir = self._coerce_path(paths["data_dir"], base_dir)
        self.data_dir = data_dir

        reports_value = paths.get("reports_dir") or paths.get("reports")
        scenarios_value = paths.get("scenarios_dir") or paths.get("scenarios")
        self.reports_dir = (
            self._coerce_path(reports_value, base_dir) if reports_value is not None else data_dir / "reports"
        )
        self.scenarios_dir = (
            self._coerce_path(scenarios_value, base_dir) if scenarios_value is not None else data_dir / "scenarios"
        )
        self._json_cache.clear()

    # ------------------------------------------------------------------
    # JSON files
    # ------------------------------------------------------------------
    def read_json(self, path: Path) -> Optional[object]:
        if not path.exists():
            return None
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle)

    def write_json(self, path: Path, data: object) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            json.dump(data, handle, ensure_ascii=False, indent=2, sort_keys=True)
            handle.write("\n")

    def load_cached(self, path: Path | str) -> object:
        """Read a JSON input, reusing the parsed value while the file is unchanged."""

        resolved = self._coerce_path(path, Path.cwd())
        try:
            mtime = resolved.stat().st_mtime_ns
        except FileNotFoundError:
            self._json_cache.pop(resolved, None)
            raise FileNotFoundError(f"Input not found: {resolved}")

        cached = self._json_cache.get(resolved)
        if cached is not None and cached[0] == mtime:
            return cached[1]

        data = self.read_json(resolved)
        self._json_cache[resolved] = (mtime, data)
        return data

    # ------------------------------------------------------------------
    # Reports and scenarios
    # ------------------------------------------------------------------
    def report_path(self, name: str) -> Path:
        return self.reports_dir / f"{name}.json"

    def scenario_path(self, name: str) -> Path:
        return self.scenarios_dir / f"{name}.json"

    def save_report(self, name: str, data: object) -> Path:
        self.ensure_dirs()
        path = self.report_path(name)
        self.write_json(path, data)
        return path

    def iter_scenarios(self) -> Iterable[Path]:
        if not self.scenarios_dir.exists():
            return
        yield from sorted(self.scenarios_dir.glob("*.json"))
