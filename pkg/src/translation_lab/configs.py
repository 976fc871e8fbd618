"""JSON definitions for groups and subsets, plus named built-ins."""

from __future__ import annotations

import json
from pathlib import Path

from .groups import (
    AmalgamContext,
    FiniteGroupContext,
    FiniteHnnSubgroup,
    FreeAbelianContext,
    FreeGroupContext,
    GroupContext,
    HnnContext,
    IntegerScaledSubgroup,
    amalgam_z4_z6,
    baumslag_solitar,
    free_group_as_hnn,
    free_product_of_two_integers,
)
from .subsets import (
    SubsetSpec,
    congruence_class,
    coordinate_halfspace,
    cyclic_translates,
    make_tree_halfspace,
    positive_cone,
    whole_group,
    words_not_starting_with,
)
from .universal import universal_b_words_spec, universal_z_spec


class ConfigError(ValueError):
    pass


BUILTIN_GROUPS = {
    "z": lambda: FreeAbelianContext(1),
    "z2": lambda: FreeAbelianContext(2),
    "f2": lambda: FreeGroupContext(2),
    "f3": lambda: FreeGroupContext(3),
    "z4*z6": amalgam_z4_z6,
    "z*z": free_product_of_two_integers,
    "bs12": lambda: baumslag_solitar(1, 2),
    "f2-hnn": free_group_as_hnn,
}


def _as_dict(source) -> dict:
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except OSError as err:
        raise ConfigError(f"cannot read config {source}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {source} is not valid JSON: {err}") from err


def load_group(source) -> GroupContext:
    """Instantiate a group from a builtin name, a JSON file path, or a dict."""
    if isinstance(source, str) and source in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[source]()
    data = _as_dict(source)
    try:
        return _group_from_dict(data)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"bad group definition: {err}") from err


def _group_from_dict(data: dict) -> GroupContext:
    kind = data["kind"]
    if kind == "free":
        return FreeGroupContext(int(data["rank"]), data.get("generators"))
    if kind == "free-abelian":
        return FreeAbelianContext(int(data["rank"]), data.get("generators"))
    if kind == "finite":
        return FiniteGroupContext(data["table"], data.get("names"), data.get("generators"))
    if kind == "amalgam":
        left = _group_from_dict(data["left"])
        right = _group_from_dict(data["right"])
        pairs = [
            (left.parse(str(a)), right.parse(str(b))) for a, b in data.get("pairs", [])
        ]
        return AmalgamContext(left, right, pairs, tuple(data.get("tags", ("G:", "S:"))))
    if kind == "hnn":
        base = _group_from_dict(data["base"])
        theta = data["theta"]
        if isinstance(theta, dict) and "multiplier" in theta:
            sub = IntegerScaledSubgroup(base, 1, int(theta["multiplier"]))
        elif isinstance(theta, dict) and "h_step" in theta:
            sub = IntegerScaledSubgroup(base, int(theta["h_step"]), int(theta["k_step"]))
        else:
            pairs = [(base.parse(str(a)), base.parse(str(b))) for a, b in theta]
            sub = FiniteHnnSubgroup(base, pairs)
        return HnnContext(base, sub, data.get("stable_letter", "t"))
    raise ConfigError(f"unknown group kind {kind!r}")


def load_subset(ctx: GroupContext, source) -> SubsetSpec:
    data = _as_dict(source) if not isinstance(source, dict) else source
    try:
        return _subset_from_dict(ctx, data)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"bad subset definition: {err}") from err


def _subset_from_dict(ctx: GroupContext, data: dict) -> SubsetSpec:
    kind = data["kind"]
    if kind == "interval":
        return coordinate_halfspace(ctx, int(data.get("coord", 0)), int(data.get("lo", 0)))
    if kind == "congruence":
        return congruence_class(
            ctx, int(data["modulus"]), int(data.get("residue", 0)), int(data.get("coord", 0))
        )
    if kind == "positive-cone":
        return positive_cone(ctx)
    if kind == "custom-first-letter":
        return words_not_starting_with(ctx, ctx.parse(data["exclude"]))
    if kind == "halfspace":
        return make_tree_halfspace(ctx, data["side"])
    if kind == "coset-union":
        base = _subset_from_dict(ctx, data["base"])
        return cyclic_translates(base, ctx.parse(data["translator"]))
    if kind == "universal":
        variant = data.get("variant", "z")
        if variant == "z":
            return universal_z_spec(ctx)
        if variant == "b-words":
            return universal_b_words_spec(
                ctx,
                int(data.get("max_radius", 1)),
                int(data.get("start", 2)),
                int(data.get("min_step", 4)),
            )
        raise ConfigError(f"unknown universal variant {variant!r}")
    if kind == "universal-all":
        return whole_group(ctx)
    raise ConfigError(f"unknown subset kind {kind!r}")
