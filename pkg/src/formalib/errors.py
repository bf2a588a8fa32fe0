"""Exception types shared across the platform."""

from __future__ import annotations


class FormalibError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArticleName(FormalibError):
    """Name does not match the article naming rules."""

    def __init__(self, value: str):
        super().__init__(f"invalid article name: {value!r}")
        self.value = value


class MalformedEnvironment(FormalibError):
    """The environment section of an article cannot be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnterminatedBlock(FormalibError):
    """A block opened in the article body never closes."""

    def __init__(self, kind: str, line: int):
        super().__init__(f"line {line}: '{kind}' block has no matching 'end;'")
        self.kind = kind
        self.line = line


class UnknownAnchor(FormalibError):
    def __init__(self, anchor: str):
        super().__init__(f"unknown anchor: {anchor}")
        self.anchor = anchor


class UnknownArticle(FormalibError):
    def __init__(self, name: str):
        super().__init__(f"unknown article: {name}")
        self.name = name


class CyclicDependency(FormalibError):
    """The corpus dependency relation contains a cycle.

    ``cycle`` is a witness as an ordered node list whose first and last
    entries coincide, e.g. ``["A", "B", "A"]``.
    """

    def __init__(self, cycle: list[str]):
        super().__init__("cyclic dependency: " + " -> ".join(cycle))
        self.cycle = cycle


class NotADag(FormalibError):
    pass


class UnknownNode(FormalibError):
    def __init__(self, name: str):
        super().__init__(f"unknown node: {name}")
        self.name = name


class UnknownRevision(FormalibError):
    def __init__(self, anchor: str, revision_id: int):
        super().__init__(f"anchor {anchor} has no revision {revision_id}")
        self.anchor = anchor
        self.revision_id = revision_id


class UserBlocked(FormalibError):
    def __init__(self, user: str):
        super().__init__(f"user is blocked: {user}")
        self.user = user


class StripMismatch(FormalibError):
    """Annotated text does not strip back to the expected pristine text."""


class EmptyCorpus(FormalibError):
    pass


class RankTooLarge(FormalibError):
    def __init__(self, k: int, limit: int):
        super().__init__(f"rank {k} exceeds limit {limit}")
        self.k = k
        self.limit = limit


class ConvergenceFailure(FormalibError):
    def __init__(self, component: int, iterations: int):
        super().__init__(
            f"singular triplet {component} did not converge within {iterations} iterations"
        )
        self.component = component
        self.iterations = iterations
