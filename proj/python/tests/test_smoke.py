from fractions import Fraction

import pytest

import fdp


def test_tree_run_validates_within_8F():
    inst, witness = fdp.generate(7, vertices=10, requests=25, f_target=10)
    assert fdp.to_fraction(fdp.validate(inst, witness)["max_flow"]) <= 10
    schedule = fdp.run_tree(inst, 10)
    report = fdp.validate(inst, schedule)
    assert fdp.to_fraction(report["max_flow"]) <= 80
    assert fdp.run_tree(inst, 10, online=True) == schedule


def test_speeding_and_doubling():
    inst, _ = fdp.generate(3, vertices=8, k=2, capacity=2, requests=8, f_target=6, chords=2)
    schedule = fdp.run_speeding(inst, 6, eps="1/2", mode="exact")
    report = fdp.validate(inst, schedule, speed="3/2")
    assert fdp.to_fraction(report["max_flow"]) <= 2 * 8 * 6

    tree, _ = fdp.generate(4, vertices=6, requests=5, f_target=5)
    opt = fdp.to_fraction(fdp.optimal_max_flow(tree)["max_flow"])
    wrapped = fdp.run_doubling(tree)
    flow = fdp.to_fraction(fdp.validate(tree, wrapped["schedule"])["max_flow"])
    assert flow <= 64 * opt
    assert fdp.to_fraction(wrapped["final_F"]) <= 2 * opt


def test_gadget_certificate():
    inst = fdp.base_instance(2, "L")
    assert len(inst["vertices"]) == 37
    cert = fdp.certify_base_tour(3, "R")
    assert Fraction(cert["length"], cert["scale"]) == 49
    assert cert["lower_bound"] == cert["length"]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        fdp.base_instance(1)
    with pytest.raises(ValueError):
        fdp.validate("{not json", "{}")
    capped, _ = fdp.generate(1, capacity=2, requests=4)
    with pytest.raises(NotImplementedError):
        fdp.run_tree(capped, 10)


def test_cli_passthrough():
    code, out, _ = fdp.cli("gen", "--kind", "base", "--p", "2")
    assert code == 0 and '"depot"' in out
    code, _, _ = fdp.cli("nonsense")
    assert code == 2
