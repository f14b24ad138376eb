from app.api.deps import (
    emit,
    get_alphabet,
    get_expression,
    get_type,
    load_run_config,
    read_source,
    reject_format,
)
from app.core.errors import KatError
from app.models.schemas import CertificateCheckSchema, CertificateSchema, OutputFormat
from app.services.equivalence_service import EquivalenceService, Equivalent
from app.services.exporters import dump_json


def register(subparsers, parents):
    parser = subparsers.add_parser("equiv", parents=parents, help="decide equivalence of two expressions")
    parser.add_argument("inputs", nargs="*", help="two expressions (inline or .kat files)")
    parser.add_argument("--check", metavar="FILE", help="verify a certificate written by an earlier run")
    parser.set_defaults(handler=run)


def run(args) -> int:
    """Decide equivalence of two expressions, or check a saved certificate"""
    cfg = load_run_config(args)
    reject_format(cfg, OutputFormat.DOT)
    alphabet = get_alphabet(cfg)
    service = EquivalenceService(alphabet)
    if args.check:
        return _check(cfg, args.check, service)

    if len(cfg.inputs) != 2:
        raise KatError(f"equiv expects 2 inputs, got {len(cfg.inputs)}")
    e1, e2 = (get_expression(value, alphabet) for value in cfg.inputs)
    t = get_type(cfg, alphabet)
    verdict = service.decide_equiv(e1, e2, t, cfg.state_cap)

    if cfg.format == OutputFormat.JSON:
        emit(dump_json(service.verdict_to_schema(verdict, t)))
    elif isinstance(verdict, Equivalent):
        schema = service.certificate_to_schema(verdict.certificate)
        emit("equivalent")
        emit(f"type: {schema.type}")
        emit(f"pairs: {verdict.certificate.pair_count()}")
        for key, pairs in schema.pairs.items():
            for left, right in pairs:
                emit(f"{key}  {left}  |  {right}")
    else:
        emit("inequivalent")
        emit(f"type: {t.format(alphabet)}")
        emit(f"counterexample: {verdict.counterexample.format(alphabet)}")
        emit(f"accepted by: {verdict.side.value}")
    return 0 if isinstance(verdict, Equivalent) else 1


def _check(cfg, path: str, service: EquivalenceService) -> int:
    """Validate a certificate file against the current alphabet and optional root pair"""
    schema = CertificateSchema.model_validate_json(read_source(path))
    alphabet = service.alphabet
    if (schema.tests and tuple(schema.tests) != alphabet.tests) or (
        schema.programs and tuple(schema.programs) != alphabet.programs
    ):
        raise KatError("certificate was written for a different alphabet")
    root = None
    if cfg.inputs:
        if len(cfg.inputs) != 2:
            raise KatError(f"equiv --check takes 0 or 2 inputs, got {len(cfg.inputs)}")
        root = tuple(get_expression(value, alphabet) for value in cfg.inputs)
    certificate = service.certificate_from_schema(schema, root)
    valid = service.check_certificate(certificate)
    if cfg.format == OutputFormat.JSON:
        emit(dump_json(CertificateCheckSchema(
            type=schema.type, pair_count=certificate.pair_count(), valid=valid
        )))
    else:
        emit("certificate valid" if valid else "certificate invalid")
    return 0 if valid else 1
