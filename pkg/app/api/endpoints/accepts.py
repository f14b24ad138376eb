from app.api.deps import emit, get_alphabet, get_expression, get_type, load_run_config, reject_format
from app.core.errors import KatError
from app.models.schemas import MembershipSchema, OutputFormat
from app.models.strings import parse_string
from app.services.automata_service import DerivativeAutomatonBuilder, accepts
from app.services.exporters import dump_json


def register(subparsers, parents):
    parser = subparsers.add_parser("accepts", parents=parents, help="membership of a mixed string")
    parser.add_argument("inputs", nargs="*", help="expression (inline or .kat file) then string, e.g. '{b}p{~b}'")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """Check whether a mixed string is in the language of an expression"""
    cfg = load_run_config(args)
    reject_format(cfg, OutputFormat.DOT)
    if len(cfg.inputs) != 2:
        raise KatError(f"accepts expects an expression and a string, got {len(cfg.inputs)} input(s)")
    alphabet = get_alphabet(cfg)
    e = get_expression(cfg.inputs[0], alphabet)
    sigma = parse_string(cfg.inputs[1], alphabet)
    t = get_type(cfg, alphabet)
    built = DerivativeAutomatonBuilder(alphabet).build(e, t, cfg.state_cap)
    accepted = accepts(built.automaton, built.start, sigma)
    if cfg.format == OutputFormat.JSON:
        emit(dump_json(MembershipSchema(string=sigma.format(alphabet), type=t.format(alphabet), accepted=accepted)))
    else:
        emit("accepted" if accepted else "rejected")
    return 0 if accepted else 1
