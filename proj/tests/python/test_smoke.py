"""Smoke tests for the radshift python module.

Plain asserts, no test-framework dependency: the script exits nonzero on the
first failure, which is all ctest needs.  Coverage is breadth over depth --
every major operation is called once and checked against an invariant the
C++ suites already pin down tightly.
"""

import math
import sys

import radshift as rs


def close(a, b, rel=1e-9, abs_tol=0.0):
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol)


def main():
    params = rs.ParticleParams(m=1.0, alpha_c=1e-3)
    sspec = rs.StaticPotentialSpec(V0=0.3, Z1=2.0, Z2=1.0)
    tspec = rs.TimePotentialSpec(V0=0.3, t_a=-3.0, t_b=-1.0)

    # potentials: plateau values and smooth-ramp interior
    v = rs.eval_static(sspec, -5.0)
    assert v.V == 0.3 and v.d1 == 0.0, "static potential left plateau"
    assert rs.eval_static(sspec, 5.0).V == 0.0, "static potential right plateau"
    vt = rs.eval_time(tspec, -2.0)
    assert 0.0 < vt.V < 0.3, "time potential mid-ramp"

    # trajectory integration + conservation + asymptotics
    traj = rs.integrate_trajectory(params, sspec, 1.5)
    assert traj.kind == rs.PotentialKind.static_z
    assert traj.conservation_residual < 1e-10, "conservation residual"
    assert close(traj.p0, math.hypot(1.0, 1.5), rel=1e-14), "energy p0"
    # m*gamma + V = const fixes the incoming momentum
    p_in = math.sqrt((traj.p0 - 0.3) ** 2 - 1.0)
    assert close(
        traj.v_in, p_in / math.hypot(1.0, p_in), rel=1e-10
    ), "incoming velocity from conservation"
    s = traj.eval(traj.t_acc_end + 2.0)
    assert close(s.zdot, 1.5 / math.hypot(1.0, 1.5), rel=1e-10), "outgoing velocity"
    assert abs(s.zddot) < 1e-12, "no residual acceleration on the far plateau"

    # samples() exposes the underlying table
    n = len(traj.samples())
    assert n > 500, "sample table populated"
    assert traj.samples()[0].t == traj.t_min

    # Lorentz-Dirac force vanishes on plateaus, Larmor energy is positive
    assert rs.lorentz_dirac_force(traj, traj.t_min) == 0.0
    e_larmor = rs.emitted_energy_larmor(traj)
    assert e_larmor > 0.0, "Larmor energy positive"

    # Jacobi field: symplectic product of two independent fields is conserved
    f1 = rs.jacobi_field(traj, 0.0)
    f2 = rs.jacobi_field(traj, -1.0)
    t_probe = 0.5 * traj.t_min  # inside the integrated window [t_min, 0]
    w1 = rs.symplectic_product(f1, f2, -0.25)
    w2 = rs.symplectic_product(f1, f2, t_probe)
    assert close(w1, w2, rel=1e-8), "symplectic product conserved"
    assert close(
        rs.dz_dp_closed_form(traj, t_probe), f1.Dz(t_probe), rel=1e-8
    ), "closed-form dz/dp matches the Jacobi field seeded at t=0"

    # classical shift: direct and Green-function routes agree
    direct = rs.delta_z_LD_direct(traj)
    green = rs.delta_z_green(traj)
    assert close(direct, green, rel=1e-6), "classical shift route agreement"
    cls = rs.compute_classical_shift(traj, z0=0.25)
    assert close(cls.delta_z_LD, green, rel=1e-6)
    assert close(
        cls.delta_z_class, cls.delta_z_LD + cls.delta_z_extra, rel=1e-14
    ), "delta_z_class composition"
    assert close(cls.E_em, e_larmor, rel=1e-12), "shift reuses the Larmor energy"

    # quantum shift: closed-form route reproduces the classical LD shift,
    # and the q2 piece matches its static closed form
    q = rs.compute_quantum_shift(traj, z0=0.25)
    assert close(q.delta_z_q1, cls.delta_z_LD, rel=1e-12), "q1 closed form"
    assert traj.p_final == 1.5 and traj.particle.m == 1.0
    q2_expected = -0.25 * e_larmor / (traj.p0 * traj.p_final**2)
    assert close(q.delta_z_q2, q2_expected, rel=1e-12), "q2 closed form"
    assert close(q.delta_z_q, q.delta_z_q1 + q.delta_z_q2, rel=1e-14)
    assert close(
        rs.delta_z_q1_t(traj), q.delta_z_q1, rel=1e-5
    ), "t-integral route agrees with closed form"

    # dp_dP jacobian at hbar*k = 0 is exactly 1
    assert rs.dp_dP(params, 1.5, 0.0) == 1.0
    assert rs.dp_dP(params, 1.5, 0.1) < 1.0, "recoil reduces the jacobian"

    # time-dependent potential: delta_z_extra and q2 vanish identically
    ttraj = rs.integrate_trajectory(params, tspec, 1.5)
    assert ttraj.kind == rs.PotentialKind.time_t
    assert rs.delta_z_extra(ttraj, 0.8) == 0.0
    qt = rs.compute_quantum_shift(ttraj, z0=0.8)
    assert qt.delta_z_q2 == 0.0, "q2 vanishes for time-dependent potentials"
    tdep = rs.delta_z_class_tdep(ttraj)
    assert close(tdep, rs.delta_z_green(ttraj), rel=1e-6), "tdep route"

    # stalled trajectory raises TurningPointError (a RadshiftError subclass)
    try:
        rs.integrate_trajectory(params, sspec, 0.5)
    except rs.TurningPointError:
        pass
    else:
        raise AssertionError("expected TurningPointError for p_final=0.5")
    assert issubclass(rs.TurningPointError, rs.RadshiftError)

    # bad construction parameters are rejected at the binding boundary
    try:
        rs.StaticPotentialSpec(V0=0.3, Z1=1.0, Z2=2.0)
    except rs.DomainError:
        pass
    else:
        raise AssertionError("expected DomainError for Z2 > Z1")

    # emission: the two amplitude forms agree, and the angular identity
    # integral dOmega (dtau/dxi)^2 = 4 pi holds sample by sample
    chi = rs.make_cutoff(traj, 4.0)
    assert chi.xi_a < chi.xi_b and chi.c_profile > 0.0
    assert chi.chi(chi.xi_a) == 1.0 and chi.chi(chi.xi_b + 4.0) == 0.0
    k, theta = 3.0, math.pi / 3.0
    a_ibp = rs.emission_amplitude(traj, k, theta, chi)
    a_vel = rs.emission_amplitude(traj, k, theta, chi, form=rs.AmplitudeForm.velocity)
    assert close(abs(a_ibp.A_z), abs(a_vel.A_z), rel=1e-7), "amplitude forms agree"
    assert close(
        rs.solid_angle_dtau_sq(0.6), 4.0 * math.pi, rel=1e-12
    ), "solid-angle identity"

    # wkb: the local wavenumber of the mode labeled by the outgoing momentum
    # reduces to the classical momentum on both plateaus
    assert close(rs.kappa(sspec, params, 1.5, 5.0), 1.5, rel=1e-13)
    assert close(
        rs.kappa(sspec, params, 1.5, -5.0), p_in, rel=1e-12
    ), "kappa on the incoming plateau"
    assert rs.wkb_validity(sspec, params, 1.5) > 0.0
    assert rs.phase_integral(sspec, params, 1.5, 5.0) > 0.0
    conv = rs.hbar_convergence(traj, k, theta, chi, hbars=[1e-2, 1e-3, 1e-4])
    assert len(conv.amplitudes) == 3
    assert 0.5 < conv.order_t < 1.5, "first-order convergence in hbar"
    assert close(
        abs(conv.richardson.A_z), abs(a_ibp.A_z), rel=1e-3
    ), "Richardson limit approaches the classical amplitude"

    # spectral energy with light controls: the ramp artifact is removed
    # exactly and the total tracks the Larmor integral
    sctl = rs.SpectralControl()
    sctl.n_theta = 16
    sctl.nodes_per_panel = 24
    sctl.tail_rel_tol = 1e-5
    sctl.amplitude.support_nodes = 768
    sctl.amplitude.ramp_nodes = 256
    spec_res = rs.energy_spectral(traj, chi, ctl=sctl)
    assert close(spec_res.E_em, spec_res.E_raw - spec_res.artifact, rel=1e-12)
    assert close(spec_res.E_em, e_larmor, rel=1e-2), "spectral vs Larmor"
    assert spec_res.k_used > 0.0 and spec_res.slope > 0.0
    assert close(rs.energy_time_domain(traj), e_larmor, rel=1e-6)

    # xi-route quantum shift with a light angular grid agrees with the
    # closed form and reports its finite-difference diagnostics
    qctl = rs.Q1XiControl()
    qctl.n_theta = 16
    qctl.workers = 2
    xi = rs.delta_z_q1_xi(traj, chi, qctl)
    assert close(xi.value, q.delta_z_q1, rel=1e-3), "xi route vs closed form"
    assert xi.fd_truncation >= 0.0
    assert abs(xi.cross_term) < abs(xi.value), "cross term is a small piece"

    print("all python smoke tests passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
