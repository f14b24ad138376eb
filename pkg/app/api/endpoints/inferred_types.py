from app.api.deps import emit, get_alphabet, get_expression, load_run_config, reject_format, require_inputs
from app.models.expressions import pretty
from app.models.schemas import OutputFormat, TypesSchema
from app.services.exporters import dump_json
from app.services.type_system import TypeChecker


def register(subparsers, parents):
    parser = subparsers.add_parser("types", parents=parents, help="every type of an expression")
    parser.add_argument("inputs", nargs="*", help="one expression (inline or .kat file)")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """List every type of an expression in canonical order"""
    cfg = load_run_config(args)
    reject_format(cfg, OutputFormat.DOT)
    require_inputs(cfg, 1)
    alphabet = get_alphabet(cfg)
    e = get_expression(cfg.inputs[0], alphabet)
    found = sorted(
        TypeChecker(alphabet).infer_types(e),
        key=lambda t: (alphabet.subset_order(t.source), alphabet.subset_order(t.target)),
    )
    lines = [t.format(alphabet) for t in found]
    if cfg.format == OutputFormat.JSON:
        emit(dump_json(TypesSchema(expression=pretty(e), types=lines)))
    else:
        for line in lines:
            emit(line)
    return 0
