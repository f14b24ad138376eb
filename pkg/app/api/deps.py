"""
Shared argument handling for the commands.

Inputs are either inline text or paths to existing .kat / .whl / .json files.
Command-line flags override the --config file, which overrides settings.
"""

import logging
import os
from argparse import Namespace

from app.core.config import settings
from app.core.errors import KatError
from app.models.expressions import MixedExpr
from app.models.schemas import AlphabetConfig, OutputFormat, RunConfig
from app.models.strings import EMPTY, Alphabet, ExprType, Subset
from app.services.parser import parse, parse_type

logger = logging.getLogger(__name__)


def read_source(value: str) -> str:
    if os.path.isfile(value):
        logger.debug("reading input from %s", value)
        with open(value, encoding="utf-8") as handle:
            return handle.read()
    return value


def load_alphabet_config(args: Namespace) -> AlphabetConfig:
    config = AlphabetConfig()
    if getattr(args, "config", None):
        config = AlphabetConfig.model_validate_json(read_source(args.config))
    if args.tests is not None:
        config.tests = AlphabetConfig(tests=args.tests).tests
    if args.progs is not None:
        config.progs = AlphabetConfig(progs=args.progs).progs
    return config


def load_run_config(args: Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        alphabet=load_alphabet_config(args),
        inputs=list(getattr(args, "inputs", []) or []),
        format=args.format or settings.DEFAULT_FORMAT,
        expr_type=args.type,
        max_len=settings.DEFAULT_MAX_LEN if args.max_len is None else args.max_len,
        state_cap=settings.DEFAULT_STATE_CAP if args.state_cap is None else args.state_cap,
        pending=args.pending,
    )


def get_alphabet(cfg: RunConfig) -> Alphabet:
    return Alphabet.of(cfg.alphabet.tests, cfg.alphabet.progs)


def require_inputs(cfg: RunConfig, count: int) -> None:
    if len(cfg.inputs) != count:
        raise KatError(f"{cfg.command} expects {count} input(s), got {len(cfg.inputs)}")


def get_expression(value: str, alphabet: Alphabet) -> MixedExpr:
    return parse(read_source(value), alphabet)


def get_type(cfg: RunConfig, alphabet: Alphabet) -> ExprType:
    """The --type flag, or all tests -> {} when it is absent."""
    if cfg.expr_type is None:
        return ExprType(alphabet.full, EMPTY)
    return parse_type(cfg.expr_type, alphabet)


def get_pending(cfg: RunConfig, alphabet: Alphabet) -> Subset:
    if cfg.pending is None:
        return alphabet.full
    text = cfg.pending.strip()
    if not text.startswith("{"):
        text = "{" + text + "}"
    return alphabet.parse_subset(text)


def reject_format(cfg: RunConfig, *formats: OutputFormat) -> None:
    if cfg.format in formats:
        raise KatError(f"{cfg.command} has no {cfg.format.value} output")


def emit(text: str) -> None:
    print(text)
