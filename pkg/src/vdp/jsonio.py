"""JSON encoding and decoding of the core objects.

One object per document, with a schema version field "vdp-1".  Scalars are
digit strings (coefficient coordinates joined by ":" for non-prime q, digits
joined by ","), matching Scalar.serialize.
"""

from .errors import InputError
from .harmonic import Cochain, TreeCochain
from .ring import OMatrix
from .units import Hyperplane, MonomialUnit

SCHEMA = "vdp-1"


def check_schema(obj):
    if not isinstance(obj, dict):
        raise InputError("expected a JSON object")
    got = obj.get("schema", SCHEMA)
    if got != SCHEMA:
        raise InputError("unsupported schema %r" % (got,))
    return obj


def stamp(obj):
    out = {"schema": SCHEMA}
    out.update(obj)
    return out


def _parse_scalar(spec, s):
    try:
        return spec.parse_scalar(s)
    except (ValueError, AttributeError):
        raise InputError("bad scalar %r" % (s,))


def parse_covector(ctx, data):
    if not isinstance(data, list) or len(data) != ctx.r:
        raise InputError("covector needs %d coordinates" % ctx.r)
    return tuple(_parse_scalar(ctx.spec, s) for s in data)


def parse_unit(ctx, obj):
    check_schema(obj)
    factors = obj.get("factors")
    if not isinstance(factors, list):
        raise InputError("unit needs a 'factors' list")
    parsed = []
    for f in factors:
        if not isinstance(f, dict) or "y" not in f or "m" not in f:
            raise InputError("each factor needs 'y' and 'm'")
        if not isinstance(f["m"], int):
            raise InputError("multiplicity must be an integer")
        parsed.append((Hyperplane(ctx, parse_covector(ctx, f["y"])), f["m"]))
    try:
        return MonomialUnit(ctx, parsed)
    except ValueError as exc:
        raise InputError(str(exc))


def serialize_unit(u):
    return stamp(u.serialize())


def parse_vertex(ctx, data):
    rep = data.get("rep") if isinstance(data, dict) else None
    if not isinstance(rep, list) or len(rep) != ctx.r:
        raise InputError("vertex needs an r x r 'rep' matrix")
    rows = []
    for row in rep:
        if not isinstance(row, list) or len(row) != ctx.r:
            raise InputError("vertex rep rows must have length %d" % ctx.r)
        rows.append([_parse_scalar(ctx.spec, s) for s in row])
    return ctx.canonical_vertex(OMatrix(ctx.spec, rows))


def parse_cochain(ctx, ball, obj, mod=None):
    check_schema(obj)
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise InputError("cochain needs an 'entries' list")
    values = {}
    for ent in entries:
        if not isinstance(ent, dict) or "arrow" not in ent or "value" not in ent:
            raise InputError("each entry needs 'arrow' and 'value'")
        if not isinstance(ent["value"], int):
            raise InputError("cochain values must be integers")
        a = parse_vertex(ctx, ent["arrow"].get("from"))
        b = parse_vertex(ctx, ent["arrow"].get("to"))
        key = (a.key, b.key)
        if key not in ball.arrows:
            raise InputError("arrow outside the ball")
        values[key] = ent["value"]
        values[(b.key, a.key)] = -ent["value"]
    try:
        return Cochain(ctx, ball, values, mod=mod)
    except ValueError as exc:
        raise InputError(str(exc))


def serialize_cochain(phi):
    return stamp(phi.serialize())


def _class_node_key(ctx, tree, data):
    if not isinstance(data, dict) or "class" not in data or "k" not in data:
        raise InputError("each entry needs 'class' and 'k'")
    k = data["k"]
    if not isinstance(k, int) or not (1 <= k <= tree.n):
        raise InputError("level k outside [1, %d]" % tree.n)
    y = parse_covector(ctx, data["class"])
    key = (k, ctx.class_key(y, k))
    if key not in tree.nodes:
        raise InputError("unknown %d-class" % k)
    return key


def parse_tree_cochain(ctx, tree, obj, mod=None):
    check_schema(obj)
    entries = obj.get("entries")
    if not isinstance(entries, list):
        raise InputError("tree cochain needs an 'entries' list")
    values = {}
    for ent in entries:
        if "value" not in ent or not isinstance(ent["value"], int):
            raise InputError("tree cochain values must be integers")
        values[_class_node_key(ctx, tree, ent)] = ent["value"]
    try:
        return TreeCochain(ctx, tree, values, mod=mod)
    except ValueError as exc:
        raise InputError(str(exc))


def serialize_tree_cochain(psi):
    return stamp(psi.serialize())


def parse_distribution(ctx, obj, mod=None):
    from .distributions import Distribution
    check_schema(obj)
    depth = obj.get("depth")
    if not isinstance(depth, int) or depth < 0:
        raise InputError("distribution needs a nonnegative integer 'depth'")
    vols = obj.get("volumes")
    if not isinstance(vols, list):
        raise InputError("distribution needs a 'volumes' list")
    tree = ctx.special_structure(depth)
    values = {}
    for ent in vols:
        if "value" not in ent or not isinstance(ent["value"], int):
            raise InputError("volumes must be integers")
        values[_class_node_key(ctx, tree, ent)] = ent["value"]
    try:
        return Distribution(ctx, depth, values, mod=mod, tree=tree)
    except ValueError as exc:
        raise InputError(str(exc))


def serialize_distribution(delta):
    return stamp(delta.serialize())
