from app.api.deps import emit, get_alphabet, get_expression, get_type, load_run_config, reject_format, require_inputs
from app.models.expressions import pretty
from app.models.schemas import LanguageSchema, OutputFormat
from app.services.exporters import dump_json
from app.services.language_oracle import LanguageOracle


def register(subparsers, parents):
    parser = subparsers.add_parser("enum", parents=parents, help="list the bounded language of an expression")
    parser.add_argument("inputs", nargs="*", help="one expression (inline or .kat file)")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """List the strings of an expression up to the length bound"""
    cfg = load_run_config(args)
    reject_format(cfg, OutputFormat.DOT)
    require_inputs(cfg, 1)
    alphabet = get_alphabet(cfg)
    e = get_expression(cfg.inputs[0], alphabet)
    t = get_type(cfg, alphabet)
    language = LanguageOracle(alphabet).m_bounded(e, t, cfg.max_len)
    if cfg.format == OutputFormat.JSON:
        emit(dump_json(LanguageSchema(
            expression=pretty(e), type=t.format(alphabet), max_len=cfg.max_len, strings=language.lines()
        )))
    else:
        for line in language.lines():
            emit(line)
    return 0
