"""Smoke test for the Python bindings: run from the repository root after
`pip install --no-build-isolation -e crates/python`."""

from pathlib import Path

import forwind

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def read(name: str) -> str:
    return (FIXTURES / name).read_text()


def main() -> None:
    bribe = read("bribe.game")
    assert forwind.validate(bribe) == []

    rat = forwind.solve(bribe)
    assert rat["schema"] == forwind.SCHEMA
    last = rat["rounds"][rat["fixed_point"]]["survivors"]
    assert [s["strategies"] for s in last] == [["B.I"], ["A"]]
    assert [o["node"] for o in rat["outcomes"]] == ["zBAI"]

    ann_r = read("bribe_ann_r.restrict")
    assert forwind.solve(bribe, "selective", ann_r)["empty"]
    strong = forwind.solve(bribe, "strong-delta", ann_r)
    assert [o["node"] for o in strong["outcomes"]] == ["zN"]

    cmp = forwind.compare(bribe, "selective", "strong-delta", ann_r)
    assert cmp["solutions"] == "disjoint"

    cleo = read("cleo.game")
    nw = forwind.solve(cleo, "selective", read("cleo_nw.restrict"))
    assert [o["node"] for o in nw["outcomes"]] == ["zONW"]

    code, out, _ = forwind.main(["--game", str(FIXTURES / "bribe.game")])
    assert code == 0 and out.startswith("game bribe is valid")

    try:
        forwind.solve("")
    except ValueError as e:
        assert "syntax" in str(e)
    else:
        raise AssertionError("empty game text was accepted")

    report = forwind.stability(cleo, read("cleo_stability.toml"))
    assert report["passed"], report
    print("python smoke test passed:", len(report["verdicts"]), "stability verdicts")


if __name__ == "__main__":
    main()
