import json
from dataclasses import asdict, dataclass
from pathlib import Path

import config
from errors import ConfigError

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """Everything needed to replay a run: command, resolved settings and master seed."""

    command: str
    config: dict
    master_seed: int
    output_dir: str
    artifact_version: str = config.ARTIFACT_VERSION

    def write(self, out_dir: Path) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("manifest", f"cannot read {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("manifest", "expected a JSON object")
        missing = {"command", "config", "master_seed", "output_dir"} - data.keys()
        if missing:
            raise ConfigError("manifest", f"missing keys {sorted(missing)}")
        version = data.get("artifact_version", config.ARTIFACT_VERSION)
        if version != config.ARTIFACT_VERSION:
            raise ConfigError("manifest.artifact_version", f"written by {version}, this is {config.ARTIFACT_VERSION}")
        return cls(data["command"], data["config"], int(data["master_seed"]), data["output_dir"], version)
