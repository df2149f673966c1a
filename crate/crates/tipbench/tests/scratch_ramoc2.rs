// Temporary r_amoc volume/pulse scan (removed before finalizing).
// Re-implements the 2-box drift with free volumes; equilibria and the fold
// are volume-independent, so H* stays at 0.4236.
use tipbench::dynamics::amoc::*;

fn drift2(s_n: f64, s_t: f64, hosing: f64, v_n: f64, v_t: f64) -> (f64, f64) {
    let q = strength(s_n);
    let f_n = F_N0 + HOSING_SLOPE * hosing;
    let f_t = F_T0;
    let (dn, dt) = if q >= 0.0 {
        let dn = q * (s_t - s_n) + K_N * (s_t - s_n) - f_n * S_0;
        let mix = GAMMA * S_S + (1.0 - GAMMA) * S_IP;
        let dt = q * (mix - s_t) + K_S * (S_S - s_t) + K_N * (s_n - s_t) - f_t * S_0;
        (dn, dt)
    } else {
        let qa = q.abs();
        let dn = qa * (S_B - s_n) + K_N * (s_t - s_n) - f_n * S_0;
        let dt = qa * (s_n - s_t) + K_S * (S_S - s_t) + K_N * (s_n - s_t) - f_t * S_0;
        (dn, dt)
    };
    (dn / v_n, dt / v_t)
}

fn sech_pulse(h0: f64, dh: f64, rate: f64, t_crit: f64, t: f64) -> f64 {
    if t < t_crit { h0 + dh / (rate * (t - t_crit)).cosh() } else { h0 + dh }
}

fn run(h0: f64, dh: f64, rate: f64, v_n: f64, v_t: f64) -> (f64, bool) {
    let dt: f64 = 0.01;
    // Start exactly on the frozen equilibrium at the profile's initial value.
    let params = tipbench::dynamics::SystemId::BAmoc.default_params();
    let h_init = sech_pulse(h0, dh, rate, 500.0, 0.0);
    let eq = tipbench::continuation::find_equilibrium(
        tipbench::dynamics::SystemId::BAmoc,
        &params,
        h_init,
        &nalgebra::DVector::from_vec(ON_STATE.to_vec()),
    )
    .unwrap();
    let (mut sn, mut st) = (eq[0], eq[1]);
    let q0 = strength(sn);
    let mut min_q = q0;
    let mut tipped = false;
    for n in 0..200_000 {
        let t = n as f64 * dt;
        let h = sech_pulse(h0, dh, rate, 500.0, t);
        let (fn_, ft_) = drift2(sn, st, h, v_n, v_t);
        sn += fn_ * dt;
        st += ft_ * dt;
        let q = strength(sn);
        min_q = min_q.min(q);
        if q < 0.2 * q0 {
            tipped = true;
            break;
        }
    }
    (min_q, tipped)
}

#[test]
fn scan_volumes() {
    for v_t in [2200.0, 3000.0, 3800.0] {
        for (h0, dh) in [(0.20, 0.20), (0.25, 0.15), (0.30, 0.10), (0.30, 0.11)] {
            let mut line = format!("V_T={v_t} h0={h0} dh={dh}:");
            for rate in [0.005, 0.017] {
                let (min_q, tipped) = run(h0, dh, rate, 1168.0, v_t);
                line += &format!("  r={rate}: minQ={min_q:.2} tip={tipped}");
            }
            println!("{line}");
        }
    }
}
