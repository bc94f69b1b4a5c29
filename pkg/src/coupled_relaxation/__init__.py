from .__about__ import *
from .api import *
from .config import *
from .core import *
from .diagnostics import *
from .exceptions import *
from .models import *
from .riemann import *
from .scheme import *
from .tables import *

__all__ = [
	*__about__.__all__,
	*api.__all__,
	*config.__all__,
	*core.__all__,
	*diagnostics.__all__,
	*exceptions.__all__,
	*models.__all__,
	*riemann.__all__,
	*scheme.__all__,
	*tables.__all__
]
