"""
Run configuration: the merged YAML of `translate`/`resume`, validated before
anything starts.
"""
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from corpus.languages import TARGET_LANGUAGES, UnknownLanguage, check_targets
from pipeline.core import ConfigError
from utils import file_digest, sha256_obj



# Provider settings that change how fast, not what, gets translated
_EXECUTION_PROVIDER_KEYS = ("rate", "burst", "timeout", "delay", "api_key_env")


@dataclass
class RunConfig:
    source: str
    run_id: str = "default"
    runs_dir: str = "runs"
    stem: str | None = None
    languages: list = field(default_factory=lambda: list(TARGET_LANGUAGES))
    preamble_id: int = 6
    theta: float = 0.3
    validate: bool = True
    provider: dict = field(default_factory=lambda: {"name": "pseudo"})
    filter: dict = field(default_factory=lambda: {"name": "blocklist"})
    parallelism: int = 8
    checkpoint_every: int = 100
    retry: dict = field(default_factory=lambda: {"max_attempts": 3, "base": 1.0,
                                                 "max_wait": 60.0})
    seed: int = 0
    progress: bool = True
    tracking: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate_fields()

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        known = { f.name for f in fields(cls) }
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"Unknown run config key(s) {unknown}, chose from {sorted(known)}.")
        if not d.get("source"):
            raise ConfigError("`source` must name the English dataset to translate.")
        return cls(**d)

    def validate_fields(self):
        try:
            self.languages = check_targets(self.languages or [])
        except (UnknownLanguage, ValueError) as err:
            raise ConfigError(f"languages: {err}") from None
        if not isinstance(self.preamble_id, int) or isinstance(self.preamble_id, bool):
            raise ConfigError(f"preamble_id must be an integer, got {self.preamble_id!r}.")
        if not isinstance(self.theta, (int, float)) or not 0 <= self.theta <= 1:
            raise ConfigError(f"theta must be in [0, 1], got {self.theta!r}.")
        for key in ("parallelism", "checkpoint_every"):
            val = getattr(self, key)
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise ConfigError(f"{key} must be an integer >= 1, got {val!r}.")
        if not isinstance(self.provider, dict) or "name" not in self.provider:
            raise ConfigError("provider must be a mapping with a `name`.")
        if not isinstance(self.filter, dict) or "name" not in self.filter:
            raise ConfigError("filter must be a mapping with a `name`.")
        if not isinstance(self.retry, dict) or self.retry.get("max_attempts", 3) < 1:
            raise ConfigError("retry.max_attempts must be at least 1.")
        if not self.run_id or Path(self.run_id).name != self.run_id:
            raise ConfigError(f"run_id must be a plain directory name, got {self.run_id!r}.")

    @property
    def run_dir(self):
        return Path(self.runs_dir).joinpath(self.run_id)

    @property
    def dataset_stem(self):
        if self.stem:
            return self.stem
        name = Path(self.source).name
        return name[:-len(".en.json")] if name.endswith(".en.json") else Path(name).stem

    def to_dict(self):
        return asdict(self)

    def identity(self):
        """ The fields outputs depend on, with the source and blocklist content hashes """
        provider = { k: v for k, v in self.provider.items() if k not in _EXECUTION_PROVIDER_KEYS }
        filter_ = dict(self.filter)
        if filter_.get("path") and Path(filter_["path"]).exists():
            filter_["sha256"] = file_digest(filter_.pop("path"))
        return {"languages": self.languages, "preamble_id": self.preamble_id,
                "theta": self.theta, "validate": self.validate, "provider": provider,
                "filter": filter_, "stem": self.dataset_stem,
                "source_sha256": file_digest(self.source)}

    def config_hash(self):
        try:
            return sha256_obj(self.identity())
        except FileNotFoundError as err:
            raise ConfigError(f"source: {err}") from None
