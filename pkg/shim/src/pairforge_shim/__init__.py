"""HTTP shim exposing pretrained translation and paraphrase models.

Speaks the pairforge provider wire protocol:

* ``POST /translate``  ``{"text", "src", "tgt"}`` -> ``{"text"}``
* ``POST /paraphrase`` ``{"text", "n"}``          -> ``{"texts"}``
* ``GET /health``                                  -> ``{"status": "ok"}``
"""

__version__ = "0.1.0"

from .backends import Backend, EchoBackend, TransformersBackend
from .config import ShimConfig
from .service import create_app
