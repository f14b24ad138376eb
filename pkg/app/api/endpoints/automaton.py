"""
Derivative automaton of an expression, or re-export of an imported automaton.

Text and DOT output are both DOT.
"""

import logging

from app.api.deps import emit, get_alphabet, get_expression, get_type, load_run_config, read_source, require_inputs
from app.models.schemas import AutomatonSchema, OutputFormat
from app.services.automata_service import DerivativeAutomatonBuilder, validate
from app.services.exporters import (
    automaton_from_schema,
    automaton_to_schema,
    derivative_automaton_to_schema,
    dump_json,
    to_dot,
)

logger = logging.getLogger(__name__)


def register(subparsers, parents):
    parser = subparsers.add_parser("automaton", parents=parents, help="build or re-export a mixed automaton")
    parser.add_argument("inputs", nargs="*", help="one expression (inline or .kat file)")
    parser.add_argument("--import", dest="import_path", metavar="FILE", help="load a JSON automaton instead")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """Build the derivative automaton of an expression, or validate and re-export an imported one"""
    cfg = load_run_config(args)
    if args.import_path:
        schema = AutomatonSchema.model_validate_json(read_source(args.import_path))
        m = automaton_from_schema(schema)
        validate(m)
        logger.info("imported automaton is valid")
        start, legend = schema.start, schema.legend
    else:
        require_inputs(cfg, 1)
        alphabet = get_alphabet(cfg)
        e = get_expression(cfg.inputs[0], alphabet)
        built = DerivativeAutomatonBuilder(alphabet).build(e, get_type(cfg, alphabet), cfg.state_cap)
        schema = derivative_automaton_to_schema(built)
        m, start, legend = built.automaton, built.start, schema.legend

    if cfg.format == OutputFormat.JSON:
        emit(dump_json(automaton_to_schema(m, start, legend)))
    else:
        emit("".join(to_dot(m, legend, start)).rstrip("\n"))
    return 0
