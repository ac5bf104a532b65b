from fractions import Fraction as F

import pytest

from packbounds.bounds import BoundReport, bound_L2d
from packbounds.certificate import read_certificate, verify_certificate, write_certificate
from packbounds.dff import UStep
from packbounds.model import normalize
from packbounds.scales import ConservativeScale, stretch

from conftest import load


@pytest.fixture
def nine_cert():
    inst = load("nine_cubes.txt")
    scale = ConservativeScale.of(UStep(2), UStep(2), UStep(2))
    return write_certificate(BoundReport("OPP-infeasibility", F(9, 8), scale), inst)


def test_round_trip(nine_cert):
    cert = read_certificate(nine_cert)
    assert cert.kind == "OPP-infeasibility" and cert.value == F(9, 8)
    assert len(cert.instance.boxes) == 9
    assert verify_certificate(nine_cert).ok


def test_wrong_value_rejected(nine_cert):
    result = verify_certificate(nine_cert.replace("value 9/8", "value 5/4"))
    assert not result.ok and result.recomputed == F(9, 8)


def test_non_dff_scale_rejected(nine_cert):
    tampered = nine_cert.replace("scale u(2) u(2) u(2)", "scale U(1/2) u(2) u(2)")
    # U(1/2) is dual feasible, so only the value check can catch this
    result = verify_certificate(tampered)
    assert not result.ok and "claimed value" in result.message


def test_volume_must_exceed_one(nine_cert):
    tampered = nine_cert.replace("value 9/8", "value 72/125").replace(
        "scale u(2) u(2) u(2)", "scale id id id")
    result = verify_certificate(tampered)
    assert not result.ok and "does not exceed 1" in result.message


def test_dropped_box_changes_value(nine_cert):
    tampered = nine_cert.replace("box 9 2/5 2/5 2/5\n", "")
    assert not verify_certificate(tampered).ok


@pytest.mark.parametrize("text", ["", "kind OBPP\nvalue 1\n", "bogus 1\n",
                                  "kind OBPP\nvalue 1\nscale id\ninstance\nd 1\ncontainer 1\n"])
def test_unreadable(text):
    assert not verify_certificate(text).ok


def test_l2d_certificate_carries_family():
    inst = load("obpp2_three.txt")
    text = write_certificate(bound_L2d(normalize(inst)), inst)
    cert = read_certificate(text)
    assert cert.family and cert.params
    assert verify_certificate(text).ok


def test_table_certificate_checked_exhaustively():
    inst = load("stretch_example.txt")
    scale = stretch(normalize(inst), None, "1", 0)
    text = write_certificate(BoundReport("OPP-infeasibility", F(71, 65), scale), inst)
    assert verify_certificate(text).ok
    # widen box 1 beyond the valid stretch: set {1, 2} becomes too wide
    bad = text.replace("size 1 3/5 7/13", "size 1 4/5 7/13").replace("value 71/65", "value 1")
    result = verify_certificate(bad)
    assert not result.ok and "feasible in dimension 1" in result.message


def test_spp_scale_must_keep_strip_axis():
    inst = load("obpp2_three.txt")
    scale = ConservativeScale.of(UStep(1), UStep(1))
    text = write_certificate(BoundReport("SPP", F(1), scale), inst)
    assert "strip axis" in verify_certificate(text).message
