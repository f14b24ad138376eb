from app.api.deps import emit, get_alphabet, get_pending, load_run_config, read_source, reject_format, require_inputs
from app.models.expressions import pretty
from app.models.programs import format_program
from app.models.schemas import CompiledSchema, OutputFormat
from app.models.strings import ExprType
from app.services.exporters import dump_json
from app.services.while_compiler import WhileCompiler, parse_program


def register(subparsers, parents):
    parser = subparsers.add_parser("compile", parents=parents, help="compile a while-program to an expression")
    parser.add_argument("inputs", nargs="*", help="one program (inline or .whl file)")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """Compile a while-program under a pending set of tests"""
    cfg = load_run_config(args)
    reject_format(cfg, OutputFormat.DOT)
    require_inputs(cfg, 1)
    alphabet = get_alphabet(cfg)
    prog = parse_program(read_source(cfg.inputs[0]), alphabet)
    pending = get_pending(cfg, alphabet)
    result = WhileCompiler(alphabet).compile(prog, pending)
    t = ExprType(pending, result.out_pending).format(alphabet)
    if cfg.format == OutputFormat.JSON:
        emit(dump_json(CompiledSchema(
            program=format_program(prog, alphabet), expression=pretty(result.expr), type=t
        )))
    else:
        emit(pretty(result.expr))
        emit(f"type: {t}")
    return 0
