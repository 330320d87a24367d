"""Run the shim service: ``python -m pairforge_shim`` or ``pairforge-shim``."""

from __future__ import annotations

import argparse
import sys

import uvicorn

from .backends import BackendError, EchoBackend, TransformersBackend
from .config import ShimConfig
from .service import create_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairforge-shim", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8008)
    parser.add_argument(
        "--backend", choices=["transformers", "echo"], default="transformers",
        help="'transformers' serves the configured pretrained models; "
             "'echo' is a deterministic stand-in for development and tests",
    )
    parser.add_argument("--en-de", dest="en_de", help="translation model id (en->de)")
    parser.add_argument("--de-en", dest="de_en", help="translation model id (de->en)")
    parser.add_argument("--paraphrase-model", dest="paraphrase_model")
    parser.add_argument("--max-chars", dest="max_chars", type=int, default=2000)
    parser.add_argument("--beams", type=int, default=4)
    parser.add_argument("--sample", action="store_true", help="sampling decode (non-deterministic)")
    parser.add_argument("--device", default="cpu")
    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    defaults = ShimConfig()
    config = ShimConfig(
        translation_model_en_de=args.en_de or defaults.translation_model_en_de,
        translation_model_de_en=args.de_en or defaults.translation_model_de_en,
        paraphrase_model=args.paraphrase_model or defaults.paraphrase_model,
        port=args.port,
        host=args.host,
        max_input_chars=args.max_chars,
        device=args.device,
        num_beams=args.beams,
        sample=args.sample,
    )
    if args.backend == "echo":
        backend = EchoBackend()
    else:
        try:
            backend = TransformersBackend(config)
        except BackendError as exc:
            print(f"error: {exc}", file=sys.stderr)
            sys.exit(1)
    uvicorn.run(create_app(backend, config), host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
