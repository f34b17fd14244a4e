"""A finite model of cohesion: reflexive graphs over finite sets."""

from .graphs import *  # noqa: F401,F403
from .graphs import __all__ as _graphs_all
from .modality import *  # noqa: F401,F403
from .modality import __all__ as _modality_all
from .verify import *  # noqa: F401,F403
from .verify import __all__ as _verify_all

__all__ = [*_graphs_all, *_modality_all, *_verify_all]
