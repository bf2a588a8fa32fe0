"""Pre-provisioned users with token credentials and a block flag.

There is no self-registration: an operator writes ``users.json`` (or uses
:func:`provision_user`) and hands out tokens.  Only a SHA-256 digest of each
token is stored.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, asdict
from pathlib import Path


@dataclass
class User:
    id: str
    name: str
    role: str  # "admin" | "editor"
    token_hash: str
    blocked: bool = False


def hash_token(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


class UserRegistry:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._write_lock = threading.Lock()

    def _load(self) -> list[User]:
        if not self.path.exists():
            return []
        return [User(**u) for u in json.loads(self.path.read_text(encoding="utf-8"))]

    def _save(self, users: list[User]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(
            json.dumps([asdict(u) for u in users], indent=2) + "\n", encoding="utf-8"
        )

    def all(self) -> list[User]:
        return self._load()

    def get(self, user_id: str) -> User | None:
        return next((u for u in self._load() if u.id == user_id), None)

    def by_token(self, token: str) -> User | None:
        digest = hash_token(token)
        return next((u for u in self._load() if u.token_hash == digest), None)

    def blocked_ids(self) -> set[str]:
        return {u.id for u in self._load() if u.blocked}

    def set_blocked(self, user_id: str, blocked: bool) -> User | None:
        with self._write_lock:
            users = self._load()
            for user in users:
                if user.id == user_id:
                    user.blocked = blocked
                    self._save(users)
                    return user
            return None

    def provision(self, user_id: str, name: str, role: str, token: str) -> User:
        with self._write_lock:
            users = self._load()
            if any(u.id == user_id for u in users):
                raise ValueError(f"user already exists: {user_id}")
            user = User(id=user_id, name=name, role=role, token_hash=hash_token(token))
            users.append(user)
            self._save(users)
            return user
