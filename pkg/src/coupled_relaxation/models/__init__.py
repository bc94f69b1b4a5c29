from .psystem import *
from .scalar import *

__all__ = [
	*psystem.__all__,
	*scalar.__all__
]
