"""Exception taxonomy shared by every extenlab module.

Each operation raises the narrowest class that applies; the CLI maps
these onto its exit codes (3 for bad input, 4 for inconsistencies).
"""


class ExtenlabError(Exception):
    """Base class for all library errors."""


class InvalidArgument(ExtenlabError):
    """Argument outside an operation's documented domain."""


class DomainMismatch(ExtenlabError):
    """Two maps (or a map and a pair) do not live over the same net."""


class DegenerateSeparation(ExtenlabError):
    """Urysohn construction with d(Z, Y \\ V) = 0."""


class ExtensionFailure(ExtenlabError):
    """A weighted-average extension left the retraction's neighborhood."""


class GluingMismatch(ExtenlabError):
    """Homotopy endpoint disagrees with the map it should glue onto."""


class EpsilonTooLarge(ExtenlabError):
    """Maps too far apart for the requested homotopy construction."""


class DiameterTooLarge(ExtenlabError):
    """Image diameter exceeds the small-extension precondition."""


class LoopTooCoarse(ExtenlabError):
    """Loop has an angular step >= pi, so winding is ill-defined."""


class NotCoveredRefusal(ExtenlabError):
    """Requested instance is not one the library can vouch for.

    Raised instead of guessing: explicit extensions exist only for
    instances known extendible, obstructions only for instances known
    non-extendible.
    """


class UnknownName(InvalidArgument):
    """Catalog lookup (space, pair, family, example) failed."""
