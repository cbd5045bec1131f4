"""Run configuration shared by the CLI subcommands."""
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .features import FEATURE_SETS
from .learner import DEFAULT_GRID


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    lexicon_dir: str | None = None
    vectors: str | None = None
    model: str | None = None
    seed: int = 0
    c_grid: tuple = DEFAULT_GRID
    C: float = 0.05
    folds: int = 10
    train_fraction: float = 0.7
    feature_set: str = "full"
    workers: int = 1
    output_dir: str | None = None
    data: dict = field(default_factory=dict)  # named input files, free-form

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
        if "c_grid" in raw:
            raw["c_grid"] = tuple(raw["c_grid"])
        return cls(**raw)

    def override(self, **values):
        """Copy with every non-None value replaced."""
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update({k: v for k, v in values.items() if v is not None and k in current})
        return RunConfig(**current)

    def check(self):
        if self.feature_set not in FEATURE_SETS:
            raise ConfigError(f"unknown feature set {self.feature_set!r}")
        if not self.c_grid or any(c <= 0 for c in self.c_grid):
            raise ConfigError("c_grid must hold positive values")
        if self.C <= 0:
            raise ConfigError("C must be positive")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if not 0 < self.train_fraction < 1:
            raise ConfigError("train_fraction must lie strictly between 0 and 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def require(self, *names):
        """Fail fast when a needed path setting is missing or does not exist."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"--{name.replace('_', '-')} is required")
            path = Path(value)
            ok = path.is_dir() if name == "lexicon_dir" else path.is_file()
            if not ok:
                raise ConfigError(f"{name.replace('_', ' ')} not found: {value}")
        return self

    def output(self, path):
        if self.output_dir is None or Path(path).is_absolute():
            return Path(path)
        out = Path(self.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        return out / path
