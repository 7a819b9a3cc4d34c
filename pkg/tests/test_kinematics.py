import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpstrack.errors import DegenerateError, UnreachableError, ValidationError
from gpstrack.kinematics import (
    REACH_TOL,
    CubicProfile,
    ElbowBranch,
    JointConfig,
    Pose,
    RobotModel,
    angle_diff,
    eval_profile,
    fit_rest_to_rest,
    fk_positions,
    forward_kinematics,
    inverse_kinematics,
    joint_positions,
    wrist_center,
)

from oracles import fk_xy

ARM = RobotModel(0.4, 0.3, 0.3)
SQRT3 = math.sqrt(3.0)

angles = st.floats(-math.pi, math.pi, allow_nan=False)


def test_fk_fully_extended():
    p = forward_kinematics(ARM, JointConfig(0, 0, 0))
    assert (p.x, p.y, p.phi) == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)


def test_fk_vertical():
    p = forward_kinematics(ARM, JointConfig(math.pi / 2, 0, 0))
    assert (p.x, p.y, p.phi) == pytest.approx((0.0, 1.0, math.pi / 2), abs=1e-15)


def test_fk_reference_initial_configuration():
    # cos60 = 1/2, cos30 = sqrt3/2: x = 0.2 + 0.15 sqrt3 + 0.3, y = 0.2 sqrt3 + 0.15
    p = forward_kinematics(ARM, JointConfig.from_degrees(60, -30, -30))
    assert p.x == pytest.approx(0.5 + 0.15 * SQRT3, abs=1e-15)
    assert p.y == pytest.approx(0.2 * SQRT3 + 0.15, abs=1e-15)
    assert p.phi == pytest.approx(0.0, abs=1e-15)
    assert (round(p.x, 4), round(p.y, 4)) == (0.7598, 0.4964)


def test_fk_does_not_wrap_phi():
    p = forward_kinematics(ARM, JointConfig(3.0, 3.0, 3.0))
    assert p.phi == 9.0


@given(angles, angles, angles)
def test_fk_matches_scalar_oracle_and_batch(t1, t2, t3):
    p = forward_kinematics(ARM, JointConfig(t1, t2, t3))
    x, y = fk_xy((0.4, 0.3, 0.3), (t1, t2, t3))
    assert (p.x, p.y) == pytest.approx((x, y), abs=1e-14)
    batch = fk_positions(ARM, np.array([[t1, t2, t3]] * 3))
    assert np.array_equal(batch[1], [p.x, p.y])


def test_joint_positions_end_at_tool():
    q = JointConfig.from_degrees(60, -30, -30)
    pts = joint_positions(ARM, q)
    p = forward_kinematics(ARM, q)
    assert pts.shape == (4, 2)
    np.testing.assert_allclose(pts[-1], [p.x, p.y], atol=1e-15)
    np.testing.assert_allclose(pts[1], [0.2, 0.2 * SQRT3], atol=1e-15)


@pytest.mark.parametrize(
    "pose, expected",
    [
        (Pose(1.0, 0.0, 0.0), (0.7, 0.0)),
        (Pose(0.0, 1.0, math.pi / 2), (0.0, 0.7)),
        (Pose(0.7598, 0.4964, 0.0), (0.4598, 0.4964)),
    ],
)
def test_wrist_center(pose, expected):
    wc = wrist_center(ARM, pose)
    assert (wc.xn, wc.yn) == pytest.approx(expected, abs=1e-15)


def test_ik_recovers_reference_initial_configuration():
    q = JointConfig.from_degrees(60, -30, -30)
    sol = inverse_kinematics(ARM, forward_kinematics(ARM, q), ElbowBranch.MINUS)
    np.testing.assert_allclose(sol.degrees(), (60, -30, -30), atol=1e-9)


def test_ik_boundary_of_reach_both_branches_coincide():
    for branch in ElbowBranch:
        sol = inverse_kinematics(ARM, Pose(1.0, 0.0, 0.0), branch)
        assert tuple(sol) == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)


def test_ik_unreachable():
    with pytest.raises(UnreachableError):
        inverse_kinematics(ARM, Pose(10.0, 10.0, 0.0))


def test_ik_inner_hole_unreachable():
    # wrist center at the base, |l1 - l2| = 0.1
    with pytest.raises(UnreachableError):
        inverse_kinematics(ARM, Pose(0.3, 0.0, 0.0))


def test_ik_degenerate_when_equal_links():
    arm = RobotModel(0.3, 0.3, 0.3)
    with pytest.raises(DegenerateError):
        inverse_kinematics(arm, Pose(0.3, 0.0, 0.0))


def test_ik_clamps_radicand_within_tolerance():
    # wrist center a hair beyond full reach of the first two links
    eps = 1e-15
    sol = inverse_kinematics(ARM, Pose(1.0 + eps, 0.0, 0.0))
    assert sol.theta2 == 0.0


@given(angles, angles, angles)
def test_branch_duality(t1, t2, t3):
    pose = forward_kinematics(ARM, JointConfig(t1, t2, t3))
    plus = inverse_kinematics(ARM, pose, ElbowBranch.PLUS)
    minus = inverse_kinematics(ARM, pose, ElbowBranch.MINUS)
    assert math.sin(plus.theta2) >= 0 >= math.sin(minus.theta2)
    assert math.sin(plus.theta2) == pytest.approx(-math.sin(minus.theta2), abs=1e-12)


@given(st.floats(0.0, 1.2), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_reachability_soundness(rho, alpha, phi):
    """IK raises exactly when the radicand is negative beyond tolerance."""
    xn, yn = rho * math.cos(alpha), rho * math.sin(alpha)
    pose = Pose(xn + 0.3 * math.cos(phi), yn + 0.3 * math.sin(phi), phi)
    wc = wrist_center(ARM, pose)
    c2 = (wc.xn**2 + wc.yn**2 - 0.25) / 0.24
    unreachable = 1 - c2 * c2 < -REACH_TOL
    try:
        inverse_kinematics(ARM, pose)
    except UnreachableError:
        assert unreachable
    else:
        assert not unreachable


def test_robot_model_validation():
    with pytest.raises(ValidationError):
        RobotModel(0.0, 0.3, 0.3)
    with pytest.raises(ValidationError):
        RobotModel(0.4, 0.3, 0.3, ((0, 1), (1, 0), (0, 1)))
    assert ARM.within_limits(JointConfig(0.1, 0.2, 0.3))
    assert not ARM.within_limits(JointConfig(4.0, 0.0, 0.0))


def test_angle_diff_wraps():
    assert angle_diff(2 * math.pi + 0.1, 0.0) == pytest.approx(0.1)
    assert angle_diff(-0.1, 2 * math.pi) == pytest.approx(-0.1)


# cubic profile


def test_rest_to_rest_reference_boundary_data():
    p = fit_rest_to_rest(math.radians(30), math.radians(70), 5.0)
    assert math.degrees(p.c0) == pytest.approx(30.0, abs=1e-12)
    assert p.c1 == 0.0
    # three boundary conditions by hand: c2 = 3*40/25, c3 = -2*40/125
    assert math.degrees(p.c2) == pytest.approx(4.8, abs=1e-12)
    assert math.degrees(p.c3) == pytest.approx(-0.64, abs=1e-12)
    assert math.degrees(eval_profile(p, 0.0)) == pytest.approx(30.0, abs=1e-12)
    assert math.degrees(eval_profile(p, 5.0)) == pytest.approx(70.0, abs=1e-12)
    assert math.degrees(eval_profile(p, 2.5)) == pytest.approx(50.0, abs=1e-12)


def test_constant_profile():
    p = fit_rest_to_rest(0.3, 0.3, 2.0)
    assert (p.c1, p.c2, p.c3) == (0.0, 0.0, 0.0)
    assert p(1.3) == 0.3 and p.derivative(1.3) == 0.0


def test_profile_errors():
    with pytest.raises(ValidationError, match="NonpositiveDuration"):
        fit_rest_to_rest(0.0, 1.0, 0.0)
    p = fit_rest_to_rest(0.0, 1.0, 1.0)
    with pytest.raises(ValidationError, match="OutOfRange"):
        eval_profile(p, 1.5)
    with pytest.raises(ValidationError, match="OutOfRange"):
        eval_profile(p, -0.1)
    with pytest.raises(ValidationError):
        CubicProfile(0, 0, 0, 0, -1.0)


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.01, 100))
def test_profile_boundary_conditions(phi0, phiT, T):
    p = fit_rest_to_rest(phi0, phiT, T)
    scale = max(1.0, abs(phi0), abs(phiT))
    assert p(0.0) == phi0
    assert abs(p(T) - phiT) <= 1e-12 * scale
    assert p.derivative(0.0) == 0.0
    assert abs(p.derivative(T)) <= 1e-12 * scale / T
    assert p(T / 2) == pytest.approx((phi0 + phiT) / 2, abs=1e-12 * scale)
