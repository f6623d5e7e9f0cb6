"""
Command-line entry point.

Every subcommand parses its flags into a JobConfig, dispatches to the
services and prints either a short text summary or, with --json, the
pydantic document. Logging goes to stderr so stdout carries only output.

Exit codes: 0 success (found, linked, agreement), 3 not found within
bounds or a discrepancy, 2 usage or precondition errors.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence
import argparse
import json
import logging
import re
import sys

from pydantic import BaseModel, ValidationError

from app.config import settings
from app.exceptions import LinkageToolkitError, UnsupportedRankError
from app.models.chain_model import BlockQuery, StepConvention
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight
from app.repositories.root_system_repository import root_system_repository
from app.schemas.charge_schemas import AffineWeightResponse, L0Response, ScalarResponse
from app.schemas.common_schemas import HorizonSchema, format_scalar, weight_json
from app.schemas.job_schemas import JobConfig
from app.schemas.linkage_schemas import (
    BlockPartitionResponse,
    BlockSchema,
    CheckStarResponse,
    LinkageClassResponse,
    LinkResponse,
    StarChainSchema,
    SubquotientSchema,
    SubquotientsResponse,
)
from app.schemas.root_system_schemas import RootSystemResponse
from app.schemas.selftest_schemas import SelftestResponse
from app.schemas.shapovalov_schemas import (
    ShapovalovReportResponse,
    SingularVectorSchema,
    SingularVectorsResponse,
    VerifyKKResponse,
)
from app.services.block_service import BlockRelation, block_partition, box_weights
from app.services.charge_service import (
    affine_highest_weight,
    casimir_eigenvalue,
    l0_eigenvalue_prediction,
    phi,
)
from app.services.linkage_service import default_query, linkage_class, linked, satisfies_star, subquotient_candidates
from app.services.selftest_service import SelftestConfig, SelftestService, selftest_passed
from app.services.shapovalov_service import get_shapovalov_service

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3

# Values such as -2/1 or -1,1/2 that argparse would read as options.
NEGATIVE_VALUE = re.compile(r"^-\d[\d/,;. -]*$")
SWITCHES = {"--allow-empty-chain", "--json"}

COMMANDS = (
    "root-system",
    "check-star",
    "linked",
    "linkage-class",
    "blocks",
    "subquotients",
    "phi",
    "casimir",
    "affine-weight",
    "l0",
    "shapovalov",
    "singular-vectors",
    "verify-kk",
    "selftest",
)


@dataclass
class CommandResult:
    exit_code: int
    payload: BaseModel
    text: str


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rs", dest="root_system", help="Dynkin code such as A1, B2, G2")
    common.add_argument("--level", help='Level κ as "p/q" or "generic"')
    common.add_argument("--from", dest="source", help="Source weight, e.g. 3/1 or 1,-1/2")
    common.add_argument("--to", dest="target", help="Target weight")
    common.add_argument("--weight", help="Weight λ")
    common.add_argument("--hw", dest="highest_weight", help="Highest weight of a Verma module")
    common.add_argument("--weights", help='Weight list "w1;w2;..."')
    common.add_argument("--max-chain", dest="max_chain_len", type=int, help="Chain or trail length bound")
    common.add_argument("--max-m", dest="max_m", type=int, help="Largest loop index m")
    common.add_argument("--box", type=int, help="Coordinate bound (blocks: enumerate the box)")
    common.add_argument("--max-depth", dest="max_depth", type=int, help="Loop depth bound of chains")
    common.add_argument("--depth", type=int, help="Oracle depth cap, or grading level for l0")
    common.add_argument("--height", type=int, help="Oracle height cap")
    common.add_argument(
        "--convention",
        choices=[c.value for c in StepConvention],
        default=StepConvention.REFLECTION.value,
        help="Target of an affine (⋆)-step",
    )
    common.add_argument("--allow-empty-chain", action="store_true", help="Let the empty chain certify [λ, λ]")
    common.add_argument("--relation", choices=[r.value for r in BlockRelation], default="linked")
    common.add_argument("--p", type=int, help="Numerator of κ for the rational relation")
    common.add_argument("--q", type=int, help="Denominator of κ for the rational relation")
    common.add_argument("--scale", type=int, default=1, help="Coroot lattice scale for the coarse relation")
    common.add_argument("--l0-convention", dest="l0_convention", choices=["aw", "ph"])
    common.add_argument("--suite", dest="suites", action="append", default=[], help="Selftest suite (repeatable)")
    common.add_argument("--json", dest="json_output", action="store_true", help="Print JSON on stdout")
    common.add_argument("--out", help="Also write the JSON document to this file")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-linkage",
        description="Exact Kac-Kazhdan linkage, blocks and Shapovalov oracle for affine algebras",
    )
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common])
    return parser


def attach_negative_values(argv: Sequence[str]) -> List[str]:
    """Join "--flag -2/1" into "--flag=-2/1"."""
    out: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        if (
            token.startswith("--")
            and "=" not in token
            and token not in SWITCHES
            and nxt is not None
            and NEGATIVE_VALUE.match(nxt)
        ):
            out.append(f"{token}={nxt}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def parse_job(argv: Sequence[str]) -> JobConfig:
    """Parse a command line into a validated JobConfig."""
    args = build_parser().parse_args(attach_negative_values(argv))
    values = vars(args)
    values.pop("log_level", None)
    weights = values.pop("weights")
    values["weights"] = [w for w in weights.split(";") if w.strip()] if weights else []
    values["convention"] = StepConvention(values["convention"])
    return JobConfig(**{k: v for k, v in values.items() if v is not None})


def _require(value, flag: str):
    if value is None:
        raise LinkageToolkitError(f"{flag} is required for this command")
    return value


def _root_system(config: JobConfig) -> RootSystem:
    return root_system_repository.find_by_code(_require(config.root_system, "--rs"))


def _level(config: JobConfig) -> Level:
    return Level.parse(_require(config.level, "--level"))


def _weight(text: Optional[str], flag: str) -> Weight:
    return Weight.parse(_require(text, flag))


def _query(config: JobConfig, rs: RootSystem, level: Level, use_box: bool = True) -> BlockQuery:
    return default_query(
        rs,
        level,
        max_chain_len=config.max_chain_len,
        max_m=config.max_m,
        weight_box=config.box if use_box else None,
        max_loop_depth=config.max_depth,
        allow_empty_chain=config.allow_empty_chain or None,
        step_convention=config.convention,
    )


def _describe_chain(chain: StarChainSchema) -> str:
    parts = [",".join(chain.source)]
    for step in chain.steps:
        parts.append(f"-[β=({','.join(step.beta)}) m={step.m} n={step.n}]-> {','.join(step.to)}")
    return " ".join(parts)


def cmd_root_system(config: JobConfig) -> CommandResult:
    rs = _root_system(config)
    payload = RootSystemResponse.from_root_system(rs)
    text = (
        f"{rs.code}: |Δ₊| = {len(rs.positive_roots)}, |W| = {rs.weyl_order}, "
        f"h = {rs.coxeter_number}, h∨ = {rs.dual_coxeter}, θ = {rs.highest_root}, ρ = {rs.rho}"
    )
    return CommandResult(EXIT_OK, payload, text)


def cmd_check_star(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.source, "--from")
    mu = _weight(config.target, "--to")
    query = _query(config, rs, level)
    chain = satisfies_star(rs, level, lam, mu, query)
    certificate = StarChainSchema.from_chain(chain) if chain is not None else None
    payload = CheckStarResponse(
        root_system=rs.code,
        level=level.to_json(),
        convention=query.step_convention,
        found=chain is not None,
        certificate=certificate,
        loop_depth=chain.loop_depth if chain is not None else None,
    )
    if chain is None:
        return CommandResult(EXIT_NOT_FOUND, payload, "no chain within bounds")
    text = f"chain of length {chain.length}: {_describe_chain(certificate)}"
    return CommandResult(EXIT_OK, payload, text)


def cmd_linked(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.source, "--from")
    mu = _weight(config.target, "--to")
    result = linked(rs, level, lam, mu, _query(config, rs, level))
    payload = LinkResponse.from_result(rs, level, result)
    if not result.linked:
        return CommandResult(EXIT_NOT_FOUND, payload, "not linked within bounds")
    lines = [f"linked by {len(result.trail)} moves"]
    for move in result.trail:
        extra = f" w#{move.weyl_index}" if move.weyl_index is not None else ""
        lines.append(f"  {move.kind.value}{extra}: {move.source} -> {move.target}")
    return CommandResult(EXIT_OK, payload, "\n".join(lines))


def cmd_linkage_class(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.weight, "--weight")
    result = linkage_class(rs, level, lam, _query(config, rs, level))
    payload = LinkageClassResponse.from_class(rs, level, result)
    text = "\n".join(str(w) for w in result.weights)
    if result.truncated:
        text += "\n(truncated by the move bound)"
    return CommandResult(EXIT_OK, payload, text)


def cmd_blocks(config: JobConfig) -> CommandResult:
    rs = _root_system(config)
    relation = BlockRelation(config.relation)
    if config.weights:
        weights = [Weight.parse(text) for text in config.weights]
    elif config.box is not None:
        weights = box_weights(rs.rank, config.box)
    else:
        raise LinkageToolkitError("blocks needs --weights or --box")
    level = Level.parse(config.level) if config.level is not None else None
    query = None
    if relation == BlockRelation.LINKED:
        level = _level(config)
        query = _query(config, rs, level, use_box=False)
    blocks = block_partition(
        rs, weights, relation, level=level, query=query, p=config.p, q=config.q, scale=config.scale
    )
    payload = BlockPartitionResponse(
        root_system=rs.code,
        relation=relation.value,
        blocks=[BlockSchema.from_block(b) for b in blocks],
    )
    lines = [f"{len(blocks)} blocks"]
    for block in blocks:
        lines.append(f"  {block.representative}: " + " ".join(str(w) for w in block.members))
    return CommandResult(EXIT_OK, payload, "\n".join(lines))


def cmd_subquotients(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.highest_weight or config.weight, "--hw")
    candidates = subquotient_candidates(rs, level, lam, _query(config, rs, level))
    payload = SubquotientsResponse(
        root_system=rs.code,
        level=level.to_json(),
        highest_weight=weight_json(lam),
        candidates=[SubquotientSchema.from_candidate(c) for c in candidates],
    )
    text = "\n".join(f"{c.weight} (depth {c.loop_depth})" for c in candidates) or "no candidates"
    return CommandResult(EXIT_OK, payload, text)


def _scalar_result(quantity: str, rs: RootSystem, level: Optional[Level], lam: Weight, value) -> CommandResult:
    payload = ScalarResponse(
        quantity=quantity,
        root_system=rs.code,
        level=level.to_json() if level is not None else None,
        weight=weight_json(lam),
        value=format_scalar(value),
    )
    return CommandResult(EXIT_OK, payload, payload.value)


def cmd_phi(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.weight, "--weight")
    return _scalar_result("phi", rs, level, lam, phi(rs, level, lam))


def cmd_casimir(config: JobConfig) -> CommandResult:
    rs = _root_system(config)
    lam = _weight(config.weight, "--weight")
    return _scalar_result("casimir", rs, None, lam, casimir_eigenvalue(rs, lam))


def cmd_affine_weight(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.weight, "--weight")
    payload = AffineWeightResponse.from_affine_weight(affine_highest_weight(rs, level, lam))
    text = f"{lam} + ({payload.level})Λ0 + ({payload.delta})δ"
    return CommandResult(EXIT_OK, payload, text)


def cmd_l0(config: JobConfig) -> CommandResult:
    rs, level = _root_system(config), _level(config)
    chi = _weight(config.weight, "--weight")
    depth = config.depth or 0
    convention = config.l0_convention or settings.l0_convention
    predicted = l0_eigenvalue_prediction(rs, level, chi, depth, convention)
    oracle_value = None
    try:
        oracle_value = get_shapovalov_service().highest_weight_l0(rs, level, chi - rs.rho) + depth
    except UnsupportedRankError as e:
        logger.info("No oracle value: %s", e)
    payload = L0Response(
        root_system=rs.code,
        level=level.to_json(),
        weight=weight_json(chi),
        depth=depth,
        convention=convention,
        predicted=format_scalar(predicted),
        oracle=format_scalar(oracle_value) if oracle_value is not None else None,
    )
    text = f"predicted ({convention}) {payload.predicted}"
    if payload.oracle is not None:
        text += f", oracle {payload.oracle}"
    return CommandResult(EXIT_OK, payload, text)


def _oracle_inputs(config: JobConfig):
    rs, level = _root_system(config), _level(config)
    lam = _weight(config.highest_weight or config.weight, "--hw")
    return rs, level, lam


def cmd_shapovalov(config: JobConfig) -> CommandResult:
    rs, level, lam = _oracle_inputs(config)
    report = get_shapovalov_service().shapovalov_report(rs, level, lam, config.depth, config.height)
    payload = ShapovalovReportResponse.from_report(rs.code, level.to_json(), report)
    lines = [f"{len(report.pieces)} pieces within depth {report.horizon.depth_cap}, height {report.horizon.height_cap}"]
    for piece in payload.pieces:
        lines.append(
            f"  d={piece.depth} ν=({','.join(piece.weight)}): dim {len(piece.basis)}, "
            f"det {piece.determinant}, kernel {piece.kernel_dim}"
        )
    return CommandResult(EXIT_OK, payload, "\n".join(lines))


def cmd_singular_vectors(config: JobConfig) -> CommandResult:
    rs, level, lam = _oracle_inputs(config)
    service = get_shapovalov_service()
    depth_cap = service.config.depth_cap if config.depth is None else config.depth
    height_cap = service.config.height_cap if config.height is None else config.height
    found = service.singular_vectors(rs, level, lam, depth_cap, height_cap)
    payload = SingularVectorsResponse(
        root_system=rs.code,
        level=level.to_json(),
        highest_weight=weight_json(lam),
        horizon=HorizonSchema(depth_cap=depth_cap, height_cap=height_cap),
        singular=[SingularVectorSchema.from_singular(sv) for sv in found],
    )
    text = "\n".join(f"d={sv.depth} ν={sv.weight}: kernel {sv.kernel_dim}" for sv in found) or "none"
    return CommandResult(EXIT_OK, payload, text)


def cmd_verify_kk(config: JobConfig) -> CommandResult:
    rs, level, lam = _oracle_inputs(config)
    query = _query(config, rs, level, use_box=False)
    report = get_shapovalov_service().verify_kk(
        rs, level, lam, depth_cap=config.depth, query=query, height_cap=config.height
    )
    payload = VerifyKKResponse.from_comparison(rs.code, level.to_json(), report)
    text = (
        f"singular {len(report.singular)}, predicted {len(report.predicted)}, "
        f"missing {len(report.missing)}, extra {len(report.extra)}, L0 {report.l0_convention}"
    )
    return CommandResult(EXIT_OK if report.agrees else EXIT_NOT_FOUND, payload, text)


def cmd_selftest(config: JobConfig) -> CommandResult:
    selftest_config = SelftestConfig()
    if config.suites:
        selftest_config.suites = tuple(config.suites)
    if config.depth is not None:
        selftest_config.grid_depth = config.depth
    results = SelftestService(selftest_config).run()
    payload = SelftestResponse.from_results(results)
    lines = [
        f"{name}: {'pass' if r.passed else 'FAIL'} ({r.cases} cases, {r.seconds:.1f}s)"
        for name, r in results.items()
    ]
    code = EXIT_OK if selftest_passed(results) else EXIT_NOT_FOUND
    return CommandResult(code, payload, "\n".join(lines))


HANDLERS: Dict[str, Callable[[JobConfig], CommandResult]] = {
    "root-system": cmd_root_system,
    "check-star": cmd_check_star,
    "linked": cmd_linked,
    "linkage-class": cmd_linkage_class,
    "blocks": cmd_blocks,
    "subquotients": cmd_subquotients,
    "phi": cmd_phi,
    "casimir": cmd_casimir,
    "affine-weight": cmd_affine_weight,
    "l0": cmd_l0,
    "shapovalov": cmd_shapovalov,
    "singular-vectors": cmd_singular_vectors,
    "verify-kk": cmd_verify_kk,
    "selftest": cmd_selftest,
}


def run_job(config: JobConfig) -> CommandResult:
    return HANDLERS[config.command](config)


def _configure_logging(level_name: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level_name.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args, _ = build_parser().parse_known_args(attach_negative_values(argv))
        _configure_logging(args.log_level)
        config = parse_job(argv)
        result = run_job(config)
    except SystemExit as e:
        return int(e.code or 0)
    except (LinkageToolkitError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    document = json.dumps(result.payload.model_dump(mode="json"), indent=2, ensure_ascii=False)
    if config.out:
        Path(config.out).write_text(document + "\n", encoding="utf-8")
        logger.info("Wrote %s", config.out)
    print(document if config.json_output else result.text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
