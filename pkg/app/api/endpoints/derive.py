from app.api.deps import emit, get_alphabet, get_expression, get_type, load_run_config, reject_format, require_inputs
from app.core.errors import KatError
from app.models.expressions import pretty
from app.models.schemas import DerivativeSchema, OutputFormat
from app.services.derivatives import d_hat, derived_type
from app.services.exporters import dump_json, parse_symbol, symbol_text
from app.services.normal_form import normalize
from app.services.type_system import TypeChecker


def register(subparsers, parents):
    parser = subparsers.add_parser("derive", parents=parents, help="derivative of an expression by one symbol")
    parser.add_argument("inputs", nargs="*", help="one expression (inline or .kat file)")
    parser.add_argument("--by", required=True, metavar="SYMBOL", help="program name, b or ~b")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """Print the normalized derivative of an expression by one symbol"""
    cfg = load_run_config(args)
    reject_format(cfg, OutputFormat.DOT)
    require_inputs(cfg, 1)
    alphabet = get_alphabet(cfg)
    e = get_expression(cfg.inputs[0], alphabet)
    t = get_type(cfg, alphabet)
    try:
        symbol = parse_symbol(args.by, alphabet)
    except KatError as exc:
        raise KatError(f"--by: {exc.message}") from exc

    derivation = TypeChecker(alphabet).check_type(e, t)
    derivative = normalize(d_hat(derivation, symbol))
    if cfg.format == OutputFormat.JSON:
        emit(dump_json(DerivativeSchema(
            expression=pretty(e),
            symbol=symbol_text(symbol),
            type=t.format(alphabet),
            derivative=pretty(derivative),
            derived_type=derived_type(t, symbol, alphabet).format(alphabet),
        )))
    else:
        emit(pretty(derivative))
    return 0
