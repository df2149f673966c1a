// Temporary calibration scratchpad (removed before finalizing).
use nalgebra::DVector;
use tipbench::continuation::{self, CatalogSystem};
use tipbench::dynamics::{self, SystemId};

#[test]
fn calibrate_amoc_fold() {
    let params = SystemId::BAmoc.default_params();
    let sys = CatalogSystem { id: SystemId::BAmoc, params: &params };
    let start = DVector::from_vec(dynamics::amoc::ON_STATE.to_vec());
    let b = continuation::continue_branch(SystemId::BAmoc, &params, (0.0, 0.6), 400, &start)
        .unwrap();
    println!("samples: {}", b.samples.len());
    for s in b.samples.iter().step_by(40) {
        println!(
            "H={:8.4}  S_N={:8.4} S_T={:8.4}  Q={:8.3}  eig=({:+.5}, {:+.5})",
            s.control,
            s.state[0],
            s.state[1],
            dynamics::amoc::strength(s.state[0]),
            s.leading_eig_re,
            s.leading_eig_im
        );
    }
    println!("truncated: {:?}", b.truncated);
    let bp = continuation::detect_bifurcation(&sys, &b).unwrap();
    println!("bifurcation: kind={:?} H*={:.6} bracket={:?}", bp.kind, bp.control_crit, bp.bracket);
}

#[test]
fn calibrate_r_tipping_rates() {
    // Deterministic integration; find which forcing rates tip.

    // Saddle node: x' = (x + lambda(t))^2 - 1, lambda tanh ramp centered at t=0.
    for eps in [0.625, 0.8, 1.0, 1.1, 1.25] {
        let p = SystemId::RSaddleNode.default_params();
        let mut x = DVector::from_vec(vec![-1.0 - dynamics::r_forcing_saddle(3.0, eps, -200.0)]);
        let dt: f64 = 0.01;
        let mut tipped = false;
        for n in 0..40_000 {
            let t = -200.0 + n as f64 * dt;
            let lam = dynamics::r_forcing_saddle(3.0, eps, t);
            let f = dynamics::drift(SystemId::RSaddleNode, &p, &x, lam, t).unwrap();
            x[0] = (x[0] + f[0] * dt).clamp(-50.0, 50.0);
            if x[0] >= 0.0 {
                tipped = true;
                break;
            }
        }
        println!("saddle eps={eps}: tipped={tipped}");
    }

    // Bautin: rate r in the tanh ramp of the translation Lambda(t).
    for r in [0.05, 0.08, 0.10, 0.12] {
        let p = SystemId::RBautin.default_params();
        let mut x = DVector::from_vec(vec![0.3357, 0.0]);
        let dt: f64 = 0.01;
        let mut max_rho: f64 = 0.0;
        for n in 0..60_000 {
            let t = -300.0 + n as f64 * dt;
            let lam = 4.0 * (((8.0 * r * t) / 2.0).tanh() + 1.0);
            let f = dynamics::drift(SystemId::RBautin, &p, &x, lam, t).unwrap();
            x[0] = (x[0] + f[0] * dt).clamp(-50.0, 50.0);
            x[1] = (x[1] + f[1] * dt).clamp(-50.0, 50.0);
            max_rho = max_rho.max((x[0] * x[0] + x[1] * x[1]).sqrt());
        }
        println!("bautin r={r}: max_rho={max_rho:.3}");
    }

    // Compost bomb: atmospheric warming rate v.
    for v in [0.05, 0.09, 0.12, 0.2, 0.5, 1.0] {
        let p = SystemId::RCompostBomb.default_params();
        let mut x = DVector::from_vec(vec![8.1492, 50.0]);
        let dt: f64 = 0.01;
        let mut max_ts: f64 = 0.0;
        for n in 0..50_000 {
            let t = n as f64 * dt;
            let f = dynamics::drift(SystemId::RCompostBomb, &p, &x, v, t).unwrap();
            x[0] = (x[0] + f[0] * dt).clamp(-300.0, 500.0);
            x[1] = (x[1] + f[1] * dt).clamp(0.0, 1e4);
            max_ts = max_ts.max(x[0]);
        }
        println!("compost v={v}: max_Ts={max_ts:.2}");
    }

    // r_amoc: sech pulse height dh, rates 0.017 vs 0.005.
    for dh in [0.38, 0.40, 0.41, 0.42] {
        for rate in [0.005, 0.017] {
            let mut x = DVector::from_vec(dynamics::amoc::ON_STATE.to_vec());
            let dt: f64 = 0.01;
            let q0 = dynamics::amoc::strength(x[0]);
            let mut min_q = q0;
            for n in 0..120_000 {
                let t = n as f64 * dt;
                let h = dynamics::r_forcing_sech(0.0, dh, rate, 500.0, t);
                let f = dynamics::amoc::drift(&x, h);
                x[0] += f[0] * dt;
                x[1] += f[1] * dt;
                min_q = min_q.min(dynamics::amoc::strength(x[0]));
            }
            println!("r_amoc dh={dh} rate={rate}: Q0={q0:.2} minQ={min_q:.2} tipped={}", min_q < 0.2 * q0);
        }
    }
}

#[test]
fn calibrate_noise_assisted_rates() {
    use rand::Rng;
    use tipbench::rng::SeedTree;

    // Saddle node with noise sqrt(2*0.008): tip fraction over 100 seeds.
    for eps in [0.625, 1.25] {
        let p = SystemId::RSaddleNode.default_params();
        let sigma = (2.0f64 * 0.008).sqrt();
        let mut tips = 0;
        for seed in 0..100u64 {
            let mut rng = SeedTree::new(seed).stream("sn");
            let mut x = -1.0 - dynamics::r_forcing_saddle(3.0, eps, -30.0);
            let dt: f64 = 0.01;
            let sq = dt.sqrt();
            let mut tipped = false;
            for n in 0..6_000 {
                let t = -30.0 + n as f64 * dt;
                let lam = dynamics::r_forcing_saddle(3.0, eps, t);
                let f = (x + lam) * (x + lam) - 1.0;
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                x = (x + f * dt + sigma * sq * z).clamp(-50.0, 50.0);
                if x >= 0.0 {
                    tipped = true;
                    break;
                }
            }
            tips += tipped as usize;
            let _ = p.get("sigma_x");
        }
        println!("saddle noise eps={eps}: tips={tips}/100");
    }

    // Bautin with noise 0.2 per component.
    for r in [0.05, 0.10] {
        let p = SystemId::RBautin.default_params();
        let mut tips = 0;
        for seed in 0..50u64 {
            let mut rng = SeedTree::new(seed).stream("bt");
            let mut x = DVector::from_vec(vec![0.3357, 0.0]);
            let dt: f64 = 0.01;
            let sq = dt.sqrt();
            let mut tipped = false;
            for n in 0..40_000 {
                let t = -200.0 + n as f64 * dt;
                let lam = 4.0 * (((8.0 * r * t) / 2.0).tanh() + 1.0);
                let f = dynamics::drift(SystemId::RBautin, &p, &x, lam, t).unwrap();
                let z1: f64 = rng.sample(rand_distr::StandardNormal);
                let z2: f64 = rng.sample(rand_distr::StandardNormal);
                x[0] = (x[0] + f[0] * dt + 0.2 * sq * z1).clamp(-50.0, 50.0);
                x[1] = (x[1] + f[1] * dt + 0.2 * sq * z2).clamp(-50.0, 50.0);
                if (x[0] * x[0] + x[1] * x[1]).sqrt() >= 10.0 {
                    tipped = true;
                    break;
                }
            }
            tips += tipped as usize;
        }
        println!("bautin noise r={r}: tips={tips}/50");
    }

    // Compost narrowing (deterministic + horizon 400).
    for v in [0.04, 0.06, 0.08, 0.10, 0.15] {
        let p = SystemId::RCompostBomb.default_params();
        let mut x = DVector::from_vec(vec![8.1492, 50.0]);
        let dt: f64 = 0.01;
        let mut first_cross = None;
        for n in 0..40_000 {
            let t = n as f64 * dt;
            let f = dynamics::drift(SystemId::RCompostBomb, &p, &x, v, t).unwrap();
            x[0] = (x[0] + f[0] * dt).clamp(-300.0, 500.0);
            x[1] = (x[1] + f[1] * dt).clamp(0.0, 1e4);
            if first_cross.is_none() && x[0] > 30.0 {
                first_cross = Some(t);
            }
        }
        println!("compost v={v}: max_Ts={:.2} first_cross={:?}", x[0], first_cross);
    }

    // r_amoc closer to the fold.
    for dh in [0.420, 0.422, 0.423, 0.4235] {
        for rate in [0.005, 0.017] {
            let mut x = DVector::from_vec(dynamics::amoc::ON_STATE.to_vec());
            let dt: f64 = 0.01;
            let q0 = dynamics::amoc::strength(x[0]);
            let mut min_q = q0;
            for n in 0..150_000 {
                let t = n as f64 * dt;
                let h = dynamics::r_forcing_sech(0.0, dh, rate, 500.0, t);
                let f = dynamics::amoc::drift(&x, h);
                x[0] += f[0] * dt;
                x[1] += f[1] * dt;
                min_q = min_q.min(dynamics::amoc::strength(x[0]));
            }
            println!(
                "r_amoc dh={dh} rate={rate}: minQ={min_q:.3} tipped={}",
                min_q < 0.2 * q0
            );
        }
    }
}

#[test]
fn check_rm_bifurcations() {
    let params = SystemId::BRmTc.default_params();
    let sys = CatalogSystem { id: SystemId::BRmTc, params: &params };
    // Consumer-free branch.
    let start = DVector::from_vec(vec![1.7, 0.0]);
    let b =
        continuation::continue_branch(SystemId::BRmTc, &params, (4.0, 7.0), 400, &start).unwrap();
    let bp = continuation::detect_bifurcation(&sys, &b).unwrap();
    println!("RM TC: kind={:?} a_c={:.6}", bp.kind, bp.control_crit);
    println!("closed form m/(k(e-mh)) = {:.6}", 2.0 / (1.7 * (0.5 - 2.0 * 0.15)));

    // Coexistence branch.
    let start = DVector::from_vec(vec![0.85, 0.42]);
    let b = continuation::continue_branch(SystemId::BRmHopf, &params, (12.0, 17.0), 400, &start)
        .unwrap();
    let bp = continuation::detect_bifurcation(&sys, &b).unwrap();
    println!("RM Hopf: kind={:?} a*={:.6} im={:.4}", bp.kind, bp.control_crit, bp.imag_at_crossing);

    // Harvesting fold.
    let hp = SystemId::BHarvesting.default_params();
    let hsys = CatalogSystem { id: SystemId::BHarvesting, params: &hp };
    let start = DVector::from_vec(vec![0.99]);
    let b = continuation::continue_branch(SystemId::BHarvesting, &hp, (0.0, 0.3), 400, &start)
        .unwrap();
    let bp = continuation::detect_bifurcation(&hsys, &b).unwrap();
    println!("Harvesting: kind={:?} h*={:.6}", bp.kind, bp.control_crit);
}
