import argparse

from app.api.endpoints import accepts, automaton, compiler, derive, equiv, inferred_types, language
from app.core.config import settings
from app.models.schemas import OutputFormat

ENDPOINTS = [equiv, derive, automaton, language, compiler, accepts, inferred_types]


def common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tests", help="primitive tests in order, e.g. b,c")
    common.add_argument("--progs", help="primitive programs, e.g. p,q")
    common.add_argument("--config", metavar="FILE", help='JSON alphabet file: {"tests": [...], "progs": [...]}')
    common.add_argument("--type", help="expression type, e.g. '{b}->{}'")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--max-len", type=int, default=None)
    common.add_argument("--state-cap", type=int, default=None)
    common.add_argument("--pending", help="pending tests for compile, e.g. '{b}'")
    common.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.PROJECT_NAME,
        description="Equivalence, derivatives and automata for typed mixed expressions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = [common_parser()]
    for endpoint in ENDPOINTS:
        endpoint.register(subparsers, parents)
    return parser
