"""Retrieval errors."""


from toolforge.core.util.errors import ToolForgeError


class EmptyHub(ToolForgeError, ValueError):
    """Cannot index a hub with no API."""


class VectorsMissing(ToolForgeError, ValueError):
    """Embedding retrieval requested on an index without vectors."""


class EmptyRelevantSet(ToolForgeError, ValueError):
    """NDCG is undefined without relevant items."""


class UnknownApiKey(ToolForgeError, KeyError):
    """An instruction cites a (tool, API) key the hub does not have."""


class NotEnoughNegatives(ToolForgeError, ValueError):
    """The hub has too few non-relevant APIs to draw the requested negatives."""
