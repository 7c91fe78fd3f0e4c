"""
Run configuration: INI files (or an earlier manifest.json) resolved against
the defaults in config.py.

    [bench]
    profile = desk
    input_dims = 2, 10
    noise_stds = 0.1
    methods = vnn, mcd

Every key is optional. Precedence: config.py defaults < profile < file < flags.
"""
import configparser
import itertools
from dataclasses import dataclass
from pathlib import Path

import config
from bench import BenchConfig, build_grid
from errors import ConfigError
from models import MethodConfig, TrainingConfig
from models.methods import RELEVANT_FIELDS
from tensor import ACTIVATIONS
from .manifest import RunManifest

COMMAND_SECTIONS = {
    "bench-uq": ("bench", "training", "methods", "oracle"),
    "classify": ("classify", "methods"),
    "gp-check": (),
}
GRID_KEYS = ("input_dims", "data_ratios", "noise_stds", "seeds")


def _items(value) -> list:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _list_of(cast):
    def parse(value):
        return [cast(v) for v in _items(value)]
    return parse


def _boolean(value) -> bool:
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _schema() -> dict[str, dict[str, tuple]]:
    desk = config.PROFILES["desk"]
    return {
        "bench": {
            "profile": (str, "desk"),
            "input_dims": (_list_of(int), desk["input_dims"]),
            "data_ratios": (_list_of(int), desk["data_ratios"]),
            "noise_stds": (_list_of(float), desk["noise_stds"]),
            "seeds": (_list_of(int), desk["seeds"]),
            "n_test": (int, config.N_TEST),
            "mc_samples": (int, config.MC_SAMPLES),
            "methods": (_list_of(str), config.BENCH_METHODS),
        },
        "training": {
            "loss": (str, "mse"),
            "optimizer": (str, config.OPTIMIZER),
            "learning_rate": (float, config.LEARNING_RATE),
            "weight_decay": (float, config.WEIGHT_DECAY),
            "epochs": (int, config.EPOCHS),
            "batch_size": (int, config.BATCH_SIZE),
        },
        "methods": {
            "dropout_rate": (float, config.DROPOUT_RATE),
            "prior_std": (float, config.PRIOR_STD),
            "kl_weight": (float, config.KL_WEIGHT),
            "ensemble_size": (int, config.ENSEMBLE_SIZE),
            "index_dim": (int, config.INDEX_DIM),
        },
        "oracle": {
            "depth": (int, config.NNGP_DEPTH),
            "weight_variance": (float, config.NNGP_WEIGHT_VARIANCE),
            "bias_variance": (float, config.NNGP_BIAS_VARIANCE),
            "hidden_width": (int, config.HIDDEN_WIDTH),
        },
        "classify": {
            "methods": (_list_of(str), config.CLASSIFY_METHODS),
            "architectures": (_list_of(str), config.CLASSIFY_ARCHITECTURES),
            "epochs": (int, config.CLASSIFY_EPOCHS),
            "mc_samples": (int, config.CLASSIFY_MC_SAMPLES),
            "train_size": (int, config.MNIST_TRAIN_SIZE),
            "test_size": (int, config.MNIST_TEST_SIZE),
            "validation_fraction": (float, config.VALIDATION_FRACTION),
            "batch_size": (int, config.BATCH_SIZE),
            "optimizer": (str, config.OPTIMIZER),
            "learning_rate": (_list_of(float), config.CLASSIFY_LEARNING_RATES),
            "weight_decay": (float, config.WEIGHT_DECAY),
            "activation": (str, config.CLASSIFY_ACTIVATION),
            "save_checkpoints": (_boolean, True),
        },
    }


def _read_ini(path: Path) -> dict[str, dict[str, str]]:
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as e:
        raise ConfigError("config", str(e).splitlines()[0]) from e
    return {section: dict(parser[section]) for section in parser.sections()}


def load_raw(command: str, path: Path | None) -> tuple[dict, int | None]:
    """Section -> key -> value from an INI file or a manifest, plus the manifest's seed."""
    if path is None:
        return {}, None
    path = Path(path)
    if path.suffix == ".json":
        manifest = RunManifest.load(path)
        if manifest.command != command:
            raise ConfigError("manifest.command", f"manifest is for '{manifest.command}', not '{command}'")
        return manifest.config, manifest.master_seed
    return _read_ini(path), None


def resolve(command: str, raw: dict, profile: str | None = None) -> dict:
    """Typed settings for every section the command reads, all defaults materialized."""
    schema = _schema()
    if command == "classify":
        # classify searches over every listed method hyperparameter
        schema["methods"] = {key: (_list_of(cast), [default]) for key, (cast, default) in schema["methods"].items()}
    sections = COMMAND_SECTIONS[command]
    for section in raw:
        if section not in sections:
            raise ConfigError(section, f"unknown section for {command}")

    resolved = {}
    for section in sections:
        given = raw.get(section, {})
        for key in given:
            if key not in schema[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
        values = {}
        for key, (cast, default) in schema[section].items():
            if key not in given:
                values[key] = list(default) if isinstance(default, list) else default
                continue
            try:
                values[key] = cast(given[key])
            except (TypeError, ValueError) as e:
                raise ConfigError(f"{section}.{key}", f"invalid value {given[key]!r}: {e}") from e
        resolved[section] = values

    if "bench" in resolved:
        _apply_profile(resolved["bench"], raw.get("bench", {}), profile)
    return resolved


def _apply_profile(bench: dict, given: dict, flag: str | None):
    name = flag or bench["profile"]
    if name not in config.PROFILES:
        raise ConfigError("bench.profile", f"unknown profile '{name}', expected one of {sorted(config.PROFILES)}")
    bench["profile"] = name
    for key in GRID_KEYS:
        # a --profile flag replaces the grid, a profile key only sets defaults
        if flag is not None or key not in given:
            bench[key] = list(config.PROFILES[name][key])


def bench_grid(resolved: dict) -> list[BenchConfig]:
    bench, oracle = resolved["bench"], resolved["oracle"]
    names = bench["methods"]
    if len(set(names)) != len(names):
        raise ConfigError("bench.methods", "duplicate method")
    methods = tuple(MethodConfig(name, **resolved["methods"]) for name in names)
    training = TrainingConfig(**resolved["training"])
    training.make_optimizer()
    return build_grid(
        bench["input_dims"],
        bench["data_ratios"],
        bench["noise_stds"],
        n_test=bench["n_test"],
        seeds=tuple(bench["seeds"]),
        mc_samples=bench["mc_samples"],
        methods=methods,
        training=training,
        oracle_depth=oracle["depth"],
        weight_variance=oracle["weight_variance"],
        bias_variance=oracle["bias_variance"],
        hidden_width=oracle["hidden_width"],
    )


@dataclass(frozen=True)
class GridPoint:
    """One hyperparameter setting of a classification method."""

    method: MethodConfig
    training: TrainingConfig
    index: int

    @property
    def hparams(self) -> str:
        values = {"lr": self.training.learning_rate}
        values.update((name, getattr(self.method, name)) for name in RELEVANT_FIELDS[self.method.method])
        return " ".join(f"{name}={value}" for name, value in values.items())


def classify_grid(resolved: dict) -> list[GridPoint]:
    """Learning rates × the method's own hyperparameter lists, in config order per method."""
    c, grid = resolved["classify"], resolved["methods"]
    if c["activation"] not in ACTIVATIONS:
        raise ConfigError("classify.activation", f"unknown activation '{c['activation']}', expected one of {ACTIVATIONS}")
    if len(set(c["methods"])) != len(c["methods"]):
        raise ConfigError("classify.methods", "duplicate method")
    if not c["learning_rate"]:
        raise ConfigError("classify.learning_rate", "needs at least one value")
    for key, values in grid.items():
        if not values:
            raise ConfigError(f"methods.{key}", "needs at least one value")

    points = []
    for name in c["methods"]:
        MethodConfig(name)
        fields = RELEVANT_FIELDS[name]
        combos = itertools.product(c["learning_rate"], *(grid[f] for f in fields))
        for index, (lr, *values) in enumerate(combos):
            training = TrainingConfig(
                loss="cross_entropy",
                optimizer=c["optimizer"],
                learning_rate=lr,
                weight_decay=c["weight_decay"],
                epochs=c["epochs"],
                batch_size=c["batch_size"],
            )
            training.make_optimizer()
            points.append(GridPoint(MethodConfig(name, **dict(zip(fields, values))), training, index))
    return points
