"""HTTP service exposing enumeration, evaluation, checking, reconstruction,
and conversion.

Handlers are plain functions on parsed JSON dicts so the CLI can call them
in-process; the FastAPI layer adds request validation and maps the library
errors onto status codes (422 input, 409 failed check, 422/500 otherwise).
"""

import random
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import jsonio
from .building import BuildingContext
from .distributions import (cochain_to_distribution, distribution_to_cochain)
from .errors import (DepthExceeded, FlowViolation, InputError, NotHarmonic,
                     PrecisionExhausted, WorkLimitExceeded)
from .harmonic import (check_all, check_flow, cochain_from_unit,
                       serialize_arrow)
from .jsonio import SCHEMA, stamp
from .reconstruct import extend_from_tree, reconstruct
from .units import vdp_closed, vdp_oracle

CHECK_FAILURE_ERRORS = (NotHarmonic, FlowViolation)
LIMIT_ERRORS = (PrecisionExhausted, WorkLimitExceeded, DepthExceeded)


class Config(BaseModel):
    r: int = Field(ge=2, le=6)
    q: int = Field(ge=2, le=16)
    depth: int = Field(ge=0, le=8)
    mode: str = "eqchar"
    seed: Optional[int] = None
    work_limit: int = 10 ** 6


def make_context(cfg):
    if cfg.mode not in ("eqchar", "mixed"):
        raise InputError("mode must be 'eqchar' or 'mixed'")
    try:
        return BuildingContext(cfg.r, cfg.q, cfg.depth, mode=cfg.mode)
    except ValueError as exc:
        raise InputError(str(exc))


def handle_enumerate(cfg):
    ctx = make_context(cfg)
    ball = ctx.enumerate_ball(cfg.depth, work_limit=cfg.work_limit)
    tree = ctx.special_structure(cfg.depth)
    vertices = []
    for key in sorted(ball.vertices):
        v = ball.vertices[key]
        vertices.append({"rep": v.rep.serialize(), "sed": list(v.sed),
                         "distance": ball.dist[key]})
    arrows = []
    for (a, b) in sorted(ball.arrows):
        if a < b:
            arrows.append(serialize_arrow(ball.arrows[(a, b)]))
    tree_nodes = []
    for level in tree.levels[1:]:
        for key in level:
            node = tree.nodes[key]
            tree_nodes.append({
                "class": [s.serialize() for s in node.class_rep],
                "k": node.level,
                "sed": list(node.vertex.sed),
            })
    return stamp({
        "config": cfg.model_dump(),
        "counts": {
            "vertices": len(vertices),
            "edges": len(arrows),
            "tree_nodes": len(tree_nodes),
        },
        "ball": {"depth": cfg.depth, "vertices": vertices, "arrows": arrows},
        "tree": {"depth": cfg.depth, "nodes": tree_nodes},
    })


def handle_eval(cfg, unit_obj):
    ctx = make_context(cfg)
    u = jsonio.parse_unit(ctx, unit_obj)
    ball = ctx.enumerate_ball(cfg.depth, work_limit=cfg.work_limit)
    phi = cochain_from_unit(ctx, u, ball)
    mismatches = []
    for (a, b), e in sorted(ball.arrows.items()):
        if a < b and vdp_closed(ctx, u, e) != phi.values[(a, b)]:
            mismatches.append(serialize_arrow(e))
    return stamp({
        "config": cfg.model_dump(),
        "cochain": phi.serialize(),
        "agreement": {"checked": sum(1 for (a, b) in ball.arrows if a < b),
                      "mismatches": mismatches},
    })


def handle_check(cfg, obj):
    ctx = make_context(cfg)
    jsonio.check_schema(obj)
    if "volumes" in obj or all("class" in e for e in obj.get("entries", [{}])):
        tree = ctx.special_structure(cfg.depth)
        psi = jsonio.parse_tree_cochain(ctx, tree, obj)
        reports = [check_flow(psi)]
    else:
        ball = ctx.enumerate_ball(cfg.depth, work_limit=cfg.work_limit)
        phi = jsonio.parse_cochain(ctx, ball, obj)
        reports = check_all(phi)
    return stamp({
        "config": cfg.model_dump(),
        "passed": all(rep.passed for rep in reports),
        "reports": [rep.serialize() for rep in reports],
    })


def _random_tree_cochain(ctx, tree, seed):
    """Seed-reproducible flow-valid tree cochain."""
    from .harmonic import TreeCochain
    rng = random.Random(seed)
    values = {}
    carry = {tree.root.key: None}
    for level in range(1, tree.n + 1):
        for key in tree.levels[level - 1]:
            node = tree.nodes[key]
            want = carry[key]
            vals = [rng.randrange(-3, 4) for _ in node.children[:-1]]
            vals.append((0 if want is None else want) - sum(vals))
            for c, m in zip(node.children, vals):
                values[c] = m
                carry[c] = m
    return TreeCochain(ctx, tree, values)


def handle_reconstruct(cfg, obj):
    ctx = make_context(cfg)
    ball = ctx.enumerate_ball(cfg.depth, work_limit=cfg.work_limit)
    tree = ctx.special_structure(cfg.depth)
    if obj is None:
        psi = _random_tree_cochain(ctx, tree, cfg.seed or 0)
        phi, fl = extend_from_tree(ctx, psi, ball)
    else:
        jsonio.check_schema(obj)
        entries = obj.get("entries", [])
        if entries and all("class" in e for e in entries):
            psi = jsonio.parse_tree_cochain(ctx, tree, obj)
            phi, fl = extend_from_tree(ctx, psi, ball)
        else:
            phi = jsonio.parse_cochain(ctx, ball, obj)
            fl = reconstruct(ctx, phi, tree)
    check = cochain_from_unit(ctx, fl.product(), ball)
    exact = check.values == phi.values
    return stamp({
        "config": cfg.model_dump(),
        "factor_list": fl.serialize(),
        "verification": {
            "exact_match": exact,
            "levels": [len(u.factors) for u in fl.levels],
        },
        "cochain": check.serialize(),
    })


def handle_convert(cfg, obj):
    ctx = make_context(cfg)
    jsonio.check_schema(obj)
    if "volumes" in obj:
        delta = jsonio.parse_distribution(ctx, obj)
        ball = ctx.enumerate_ball(delta.depth, work_limit=cfg.work_limit)
        phi = distribution_to_cochain(delta, ball)
        return stamp({"config": cfg.model_dump(), "cochain": phi.serialize()})
    ball = ctx.enumerate_ball(cfg.depth, work_limit=cfg.work_limit)
    phi = jsonio.parse_cochain(ctx, ball, obj)
    delta = cochain_to_distribution(phi)
    return stamp({
        "config": cfg.model_dump(),
        "distribution": delta.serialize(),
        "total_mass": delta.total_mass(),
    })


# -- FastAPI layer -----------------------------------------------------------


class EnumerateRequest(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    config: Config


class DocumentRequest(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    config: Config
    document: Optional[dict] = None


def _guard(fn, *args):
    try:
        return fn(*args)
    except InputError as exc:
        raise HTTPException(status_code=422, detail={"code": "input-error",
                                                     "message": str(exc)})
    except CHECK_FAILURE_ERRORS as exc:
        raise HTTPException(status_code=409, detail={"code": "check-failure",
                                                     "message": str(exc)})
    except LIMIT_ERRORS as exc:
        raise HTTPException(status_code=422,
                            detail={"code": "precision-or-limit",
                                    "message": str(exc)})


def create_app():
    app = FastAPI(title="vdp", version="1.0")

    @app.post("/enumerate")
    def enumerate_endpoint(req: EnumerateRequest):
        return _guard(handle_enumerate, req.config)

    @app.post("/eval")
    def eval_endpoint(req: DocumentRequest):
        if req.document is None:
            raise HTTPException(status_code=422,
                                detail={"code": "input-error",
                                        "message": "eval needs a unit document"})
        return _guard(handle_eval, req.config, req.document)

    @app.post("/check")
    def check_endpoint(req: DocumentRequest):
        if req.document is None:
            raise HTTPException(status_code=422,
                                detail={"code": "input-error",
                                        "message": "check needs a cochain document"})
        return _guard(handle_check, req.config, req.document)

    @app.post("/reconstruct")
    def reconstruct_endpoint(req: DocumentRequest):
        return _guard(handle_reconstruct, req.config, req.document)

    @app.post("/convert")
    def convert_endpoint(req: DocumentRequest):
        if req.document is None:
            raise HTTPException(status_code=422,
                                detail={"code": "input-error",
                                        "message": "convert needs a document"})
        return _guard(handle_convert, req.config, req.document)

    return app


app = create_app()
