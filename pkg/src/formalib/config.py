"""Service and CLI configuration: JSON file plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .depgraph import DEFAULT_DIRECTIVE_KINDS

ENV_LISTEN = "FORMALIB_LISTEN"
ENV_DATA_DIR = "FORMALIB_DATA_DIR"


@dataclass(frozen=True)
class Config:
    listen: str = "127.0.0.1:8080"
    data_dir: Path = Path("data")
    directive_kinds: frozenset[str] = DEFAULT_DIRECTIVE_KINDS
    lsi_k: int = 150

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def load_config(path: str | Path | None = None) -> Config:
    """Read a JSON config file; the environment wins for listen/data dir."""
    raw: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    listen = os.environ.get(ENV_LISTEN) or raw.get("listen") or "127.0.0.1:8080"
    data_dir = Path(os.environ.get(ENV_DATA_DIR) or raw.get("data_dir") or "data")
    kinds = frozenset(raw.get("directive_kinds") or DEFAULT_DIRECTIVE_KINDS)
    lsi_k = int(raw.get("lsi_k") or 150)
    return Config(listen=listen, data_dir=data_dir, directive_kinds=kinds, lsi_k=lsi_k)
