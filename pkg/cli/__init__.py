from .commands import cmd_bench_uq, cmd_classify, cmd_gp_check
from .formatter import Formatter
from .manifest import RunManifest

__all__ = ["cmd_bench_uq", "cmd_classify", "cmd_gp_check", "Formatter", "RunManifest"]
