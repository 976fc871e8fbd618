import pytest

from translation_lab.configs import ConfigError, load_group, load_subset


def test_builtin_names():
    for name in ("z", "z2", "f2", "z4*z6", "z*z", "bs12", "f2-hnn"):
        ctx = load_group(name)
        assert ctx.identity().word is not None


def test_finite_group_from_dict():
    ctx = load_group(
        {
            "kind": "finite",
            "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
            "names": ["0", "1", "2"],
        }
    )
    assert ctx.order == 3
    assert ctx.multiply(ctx.parse("1"), ctx.parse("2")).word == (0,)


def test_amalgam_from_dict():
    ctx = load_group(
        {
            "kind": "amalgam",
            "left": {"kind": "finite", "table": [[(i + j) % 4 for j in range(4)] for i in range(4)],
                     "names": ["0", "1", "2", "3"]},
            "right": {"kind": "finite", "table": [[(i + j) % 6 for j in range(6)] for i in range(6)],
                      "names": ["0", "1", "2", "3", "4", "5"]},
            "pairs": [["2", "3"]],
        }
    )
    assert ctx.subgroup_size() == 2
    b = load_subset(ctx, {"kind": "halfspace", "side": "G"})
    assert b.contains(ctx.identity())


def test_hnn_from_dict_with_multiplier():
    ctx = load_group(
        {
            "kind": "hnn",
            "base": {"kind": "free-abelian", "rank": 1, "generators": ["a"]},
            "theta": {"multiplier": 2},
        }
    )
    t = ctx.stable_letter(1)
    a = ctx.from_base(ctx.base.integer(1))
    assert ctx.multiply(ctx.multiply(t, a), ctx.stable_letter(-1)).word == ctx.from_base(
        ctx.base.integer(2)
    ).word


def test_hnn_from_dict_with_table():
    c4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    ctx = load_group(
        {
            "kind": "hnn",
            "base": {"kind": "finite", "table": c4, "names": ["0", "1", "2", "3"]},
            "theta": [["2", "2"]],
        }
    )
    # the order-2 subgroup is twisted identically, so t commutes with it
    h = ctx.from_base(ctx.base.parse("2"))
    t = ctx.stable_letter(1)
    assert ctx.multiply(t, h).word == ctx.multiply(h, t).word


def test_coset_union_subset():
    ctx = load_group("f2")
    x = load_subset(ctx, {"kind": "coset-union", "base": {"kind": "positive-cone"}, "translator": "A"})
    assert x.contains(ctx.parse("AA"))


def test_bad_group_kind():
    with pytest.raises(ConfigError):
        load_group({"kind": "nope"})


def test_bad_subset_kind():
    ctx = load_group("z")
    with pytest.raises(ConfigError):
        load_subset(ctx, {"kind": "nope"})


def test_missing_file():
    with pytest.raises(ConfigError):
        load_group("/nonexistent/path.json")
