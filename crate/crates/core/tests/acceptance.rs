//! Exit criteria. Each test prints one PASS/FAIL line with the measured
//! figure of merit, then asserts.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vibrad::oracle::{self, verify_selection_rule, QuadratureConfig};
use vibrad::rates::{cavity_rate, free_space_rate, mirror_rate, small_amplitude_rate};
use vibrad::specfun::{bessel_j, rational_period_integral};
use vibrad::sweep::{self, Axis};
use vibrad::units::{hz_to_rad_per_s, wavenumber, SPEED_OF_LIGHT};
use vibrad::{
    AtomParams, Branch, Cavity, GeneralPeriodic, Geometry, Mirror, MotionProfile, Orientation, Rotation, Sho,
};

fn report(id: u32, title: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{verdict}] {title}: {detail}");
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Emission-branch resonant cavity: πmc/L + ω₀ = nΩ.
fn resonant_cavity(n: u32, m: u32, omega0: f64, omega_mech: f64, z0_fraction: f64, photons: u32) -> Cavity {
    let length = PI * f64::from(m) * SPEED_OF_LIGHT / (f64::from(n) * omega_mech - omega0);
    Cavity::new(length, z0_fraction * length, photons).unwrap()
}

#[test]
fn c01_free_space_peak_rate() {
    let (g, omega_mech, omega0) = (0.3, 1.0, 0.4);
    let atom = AtomParams::new(omega0, g).unwrap();
    let sho = Sho::new(1.8412 * SPEED_OF_LIGHT / (omega_mech - omega0), omega_mech).unwrap();
    let start = Instant::now();
    let line = free_space_rate(&atom, &sho, 1).unwrap();
    let elapsed = start.elapsed();
    let normalized = line.rate / (g * g / omega_mech);
    let rel = (normalized - 2.13).abs() / 2.13;
    let pass = rel < 0.01 && elapsed < Duration::from_millis(1);
    report(
        1,
        "free-space peak rate",
        pass,
        format!("P1 = {normalized:.6} g^2/Omega (target 2.13, rel {rel:.2e}), {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn c02_selection_rule() {
    let start = Instant::now();
    let mut worst_series = 0.0f64;
    let mut worst_dense = 0.0f64;
    let mut cases = 0;
    for q in 2..=7u32 {
        for p in 1..=20u32 {
            if gcd(p, q) != 1 {
                continue;
            }
            for x in [0.3, 1.0, 2.5, 7.0] {
                worst_series = worst_series.max(rational_period_integral(x, p, q).unwrap().abs());
                worst_dense = worst_dense.max(verify_selection_rule(p, q, x).unwrap());
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_series < 1e-10 && worst_dense < 1e-10 && elapsed < Duration::from_secs(10);
    report(
        2,
        "selection rule",
        pass,
        format!("{cases} cases, max |J(x;p,q)| = {worst_series:.2e} (period integral), {worst_dense:.2e} (full-period oracle), {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn c03_oracle_equivalence() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20_191_113);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut counts = [0usize; 3];
    for _ in 0..200 {
        let a_tilde = rng.gen_range(0.05..25.0);
        let z0_tilde = rng.gen_range(0.0..TAU);
        let n = rng.gen_range(1..=20u32);
        let omega_mech = 1.0e9;
        let omega0 = rng.gen_range(0.05..0.95) * omega_mech;
        let atom = AtomParams::new(omega0, rng.gen_range(0.01..1.0) * omega0).unwrap();
        let kind = rng.gen_range(0..3usize);
        counts[kind] += 1;
        let (closed, checked) = match kind {
            0 => {
                let omega = f64::from(n) * omega_mech - omega0;
                let sho = Sho::new(a_tilde / wavenumber(omega), omega_mech).unwrap();
                let closed = free_space_rate(&atom, &sho, n).unwrap().rate;
                let out = oracle::one_period_amplitude(&sho.into(), &Geometry::FreeSpace, &atom, omega, &cfg)
                    .unwrap();
                (closed, out.rate)
            }
            1 => {
                let omega = f64::from(n) * omega_mech - omega0;
                let k = wavenumber(omega);
                let sho = Sho::new(a_tilde / k, omega_mech).unwrap();
                // whole wavelengths keep sin² unchanged and clear the atom
                let lift = TAU * (1.0 + (a_tilde / TAU).ceil());
                let mirror = Mirror::new((z0_tilde + lift) / k).unwrap();
                let motion: MotionProfile = sho.into();
                let closed = mirror_rate(&atom, &motion, &mirror, n).unwrap().rate;
                let out =
                    oracle::one_period_amplitude(&motion, &Geometry::Mirror(mirror), &atom, omega, &cfg)
                        .unwrap();
                (closed, out.rate)
            }
            _ => {
                // mode index large enough that the atom fits between the mirrors
                let m_min = ((2.0 * a_tilde + PI) / PI).ceil() as u32 + 1;
                let m = rng.gen_range(m_min..m_min + 6);
                let photons = rng.gen_range(0..5u32);
                let length = PI * f64::from(m) * SPEED_OF_LIGHT / (f64::from(n) * omega_mech - omega0);
                let k = PI * f64::from(m) / length;
                let mut theta = z0_tilde;
                while theta <= a_tilde {
                    theta += PI;
                }
                let cavity = Cavity::new(length, theta / k, photons).unwrap();
                let sho = Sho::new(a_tilde / k, omega_mech).unwrap();
                let closed = cavity_rate(&atom, &sho, &cavity, n, m, Branch::EmitExcite)
                    .unwrap()
                    .rate;
                let out =
                    oracle::cavity_amplitude(&sho.into(), &cavity, &atom, n, m, Branch::EmitExcite, &cfg)
                        .unwrap();
                (closed, out.rate)
            }
        };
        let rel = (closed - checked).abs() / closed.abs().max(checked.abs());
        worst = worst.max(rel);
    }
    let elapsed = start.elapsed();
    let pass = worst < 1e-8 && elapsed < Duration::from_secs(30);
    report(
        3,
        "oracle equivalence",
        pass,
        format!(
            "200 draws (free {}, mirror {}, cavity {}), max relative deviation {worst:.2e}, {elapsed:?}",
            counts[0], counts[1], counts[2]
        ),
    );
    assert!(pass);
}

#[test]
fn c04_static_atom_null_result() {
    let cfg = QuadratureConfig::default();
    let (omega_mech, omega0) = (1.0e9, 0.4e9);
    let atom = AtomParams::new(omega0, 0.1 * omega0).unwrap();
    let prefactor = 8.0 * PI * atom.g() * atom.g() / omega_mech;
    let still = Sho::new(0.0, omega_mech).unwrap();
    let motion: MotionProfile = still.into();
    let mut max_closed = 0.0f64;
    let mut max_oracle = 0.0f64;
    for n in 1..=20u32 {
        let omega = f64::from(n) * omega_mech - omega0;
        let k = wavenumber(omega);

        max_closed = max_closed.max(free_space_rate(&atom, &still, n).unwrap().rate);
        let out = oracle::one_period_amplitude(&motion, &Geometry::FreeSpace, &atom, omega, &cfg).unwrap();
        max_oracle = max_oracle.max(out.rate / prefactor);

        let mirror = Mirror::new(1.3 / k).unwrap();
        max_closed = max_closed.max(mirror_rate(&atom, &motion, &mirror, n).unwrap().rate);
        let out =
            oracle::one_period_amplitude(&motion, &Geometry::Mirror(mirror), &atom, omega, &cfg).unwrap();
        max_oracle = max_oracle.max(out.rate / prefactor);

        let cavity = resonant_cavity(n, 1, omega0, omega_mech, 0.31, 2);
        max_closed = max_closed.max(
            cavity_rate(&atom, &still, &cavity, n, 1, Branch::EmitExcite)
                .unwrap()
                .rate,
        );
        let out = oracle::cavity_amplitude(&motion, &cavity, &atom, n, 1, Branch::EmitExcite, &cfg).unwrap();
        max_oracle = max_oracle.max(out.rate / prefactor);
    }
    let pass = max_closed == 0.0 && max_oracle < 1e-24;
    report(
        4,
        "static-atom null result",
        pass,
        format!("max closed-form rate {max_closed:e} Hz, max oracle rate {max_oracle:.2e} (units of 8πg²/Ω)"),
    );
    assert!(pass);
}

#[test]
fn c05_mirror_node_zeros() {
    let (omega_mech, omega0) = (1.0, 0.3);
    let atom = AtomParams::new(omega0, 1.0).unwrap();
    let prefactor = 8.0 * PI / omega_mech;
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=10u32 {
        let omega = f64::from(n) * omega_mech - omega0;
        let k = wavenumber(omega);
        let motion: MotionProfile = Sho::new(1.0 / k, omega_mech).unwrap().into();
        for j in 0..6u32 {
            // kz₀ − πn/2 = jπ, with z₀ beyond the amplitude
            let theta = PI * f64::from(n) / 2.0 + PI * f64::from(j);
            if theta <= 1.0 {
                continue;
            }
            let mirror = Mirror::new(theta / k).unwrap();
            let rate = mirror_rate(&atom, &motion, &mirror, n).unwrap().rate;
            worst = worst.max(rate / prefactor);
            cases += 1;
        }
    }
    let pass = worst < 1e-14;
    report(
        5,
        "mirror node zeros",
        pass,
        format!("{cases} nodes, max normalized rate {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn c06_cavity_photon_scaling() {
    let (omega_mech, omega0) = (2.0e9, 0.7e9);
    let atom = AtomParams::new(omega0, 0.05 * omega0).unwrap();
    let empty = resonant_cavity(2, 3, omega0, omega_mech, 0.41, 0);
    let three = Cavity::new(empty.length(), empty.z0(), 3).unwrap();
    let sho = Sho::new(0.02 * empty.length(), omega_mech).unwrap();
    let r0 = cavity_rate(&atom, &sho, &empty, 2, 3, Branch::EmitExcite)
        .unwrap()
        .rate;
    let r3 = cavity_rate(&atom, &sho, &three, 2, 3, Branch::EmitExcite)
        .unwrap()
        .rate;
    let ratio = r3 / r0;

    // absorption branch: ω₀ − ω_m = nΩ
    let omega_m = 0.5e9;
    let absorber = AtomParams::new(2.0 * omega_mech + omega_m, 1.0e8).unwrap();
    let length = PI * SPEED_OF_LIGHT / omega_m;
    let cav = Cavity::new(length, 0.37 * length, 0).unwrap();
    let small = Sho::new(0.01 * length, omega_mech).unwrap();
    let absorbed = cavity_rate(&absorber, &small, &cav, 2, 1, Branch::AbsorbDeexcite)
        .unwrap()
        .rate;

    let pass = ratio == 4.0 && absorbed == 0.0 && r0 > 0.0;
    report(
        6,
        "cavity photon-number scaling",
        pass,
        format!("emit ratio N=3/N=0 = {ratio}, absorb at N=0 = {absorbed}"),
    );
    assert!(pass);
}

#[test]
fn c07_fig2_structure() {
    let start = Instant::now();
    let a = Axis::linspace("a_tilde", 0.0, 30.0, 3001).unwrap();
    let n: Vec<u32> = (1..=30).collect();
    let surface = sweep::fig2_surface(&a.values, &n).unwrap();
    let (row, col, max) = surface.argmax();
    let peak_a = surface.grid.axis1.values[row];
    let peak_ok = col == 0 && (1.83..=1.85).contains(&peak_a) && (max - 0.3386).abs() / 0.3386 < 0.01;

    let mut offenders = Vec::new();
    for (j, &order) in n.iter().enumerate() {
        let worst = (0..surface.rows())
            .filter(|&i| surface.grid.axis1.values[i] < f64::from(order) / 2.0)
            .map(|i| surface.at(i, j))
            .fold(0.0f64, f64::max);
        if worst >= 1e-3 * max {
            offenders.push(format!("n={order}: {:.2e}", worst / max));
        }
    }
    let elapsed = start.elapsed();
    let pass = peak_ok && offenders.is_empty() && elapsed < Duration::from_secs(5);
    report(
        7,
        "sideband surface structure",
        pass,
        format!(
            "argmax n={} A~={peak_a:.2} value {max:.5}; below-threshold violations [{}]; {elapsed:?}",
            col + 1,
            offenders.join(", ")
        ),
    );
    assert!(peak_ok, "peak location");
    assert!(
        offenders.is_empty(),
        "rate not negligible below A~ = n/2 for {offenders:?}"
    );
}

#[test]
fn c08_cqed_order_of_magnitude() {
    let surface = sweep::fig3_default().unwrap();
    let omega_mech = hz_to_rad_per_s(1.0e10);
    let mut in_decade = 0;
    for (idx, v) in surface.values.iter().enumerate() {
        let a = surface.grid.axis1.values[idx / surface.cols()];
        let alpha = surface.grid.axis2.values[idx % surface.cols()];
        if a <= 10e-9 * (1.0 + 1e-12) && alpha <= 1.0 + 1e-12 && (1e-4..1e-3).contains(v) {
            in_decade += 1;
        }
    }

    // approximation vs exact wherever Ã < 0.05
    let mut worst = 0.0f64;
    let mut checked = 0;
    let omega0 = 0.5 * omega_mech;
    let a_limit = 0.05 * SPEED_OF_LIGHT / (omega_mech - omega0);
    for i in 1..=50 {
        let a = a_limit * f64::from(i) / 50.0 * 0.999;
        for alpha in [0.1, 0.2, 0.5, 1.0] {
            let atom = AtomParams::with_alpha(omega0, alpha).unwrap();
            let sho = Sho::new(a, omega_mech).unwrap();
            let exact = free_space_rate(&atom, &sho, 1).unwrap().rate;
            let approx = small_amplitude_rate(&atom, &sho).unwrap();
            worst = worst.max((approx - exact).abs() / exact);
            checked += 1;
        }
    }
    // the fig3 grid itself (all cells have Ã ≪ 0.05)
    let exact = surface.exact.as_ref().unwrap();
    for (v, e) in surface.values.iter().zip(exact) {
        if *e > 0.0 {
            worst = worst.max((v - e).abs() / e);
        }
    }
    let pass = in_decade > 0 && worst < 1e-2;
    report(
        8,
        "cQED order of magnitude",
        pass,
        format!("{in_decade} fig3 cells in [1e-4, 1e-3) Hz; max |approx − exact|/exact = {worst:.2e} over {checked} + {} points", exact.len()),
    );
    assert!(pass);
}

#[test]
fn c09_rotation_and_parallel_reductions() {
    let (omega_mech, omega0, g) = (1.0, 0.35, 0.2);
    let atom = AtomParams::new(omega0, g).unwrap();
    let formula = |theta: f64, a_tilde: f64, n: u32| {
        let s = (theta - PI * f64::from(n) / 2.0).sin();
        let j = bessel_j(n, a_tilde).unwrap();
        8.0 * PI * g * g / omega_mech * s * s * j * j
    };
    let mut worst = 0.0f64;
    let mut points = 0;
    for i in 0..10 {
        for j in 0..10 {
            let n = 1 + ((i + j) % 6) as u32;
            let omega = f64::from(n) * omega_mech - omega0;
            let k = wavenumber(omega);
            let delta = 0.05 + 0.15 * f64::from(i);
            let reach = (0.1 + 0.4 * f64::from(j)) / k;
            let mirror = Mirror::new(reach + 2.3 / k).unwrap();

            // rotation: A → R, kz₀ → k cos δ z₀
            let rot: MotionProfile = Rotation::new(reach, omega_mech, delta).unwrap().into();
            let got = mirror_rate(&atom, &rot, &mirror, n).unwrap().rate;
            let want = formula(k * delta.cos() * mirror.z0(), k * reach, n);
            worst = worst.max((got - want).abs() / want.abs().max(1e-300));

            // parallel: kA → k_y A, kz₀ → k_z z₀
            let par: MotionProfile = Sho::oriented(reach, omega_mech, Orientation::Parallel { delta })
                .unwrap()
                .into();
            let got = mirror_rate(&atom, &par, &mirror, n).unwrap().rate;
            let want = formula(k * delta.cos() * mirror.z0(), k * delta.sin() * reach, n);
            worst = worst.max((got - want).abs() / want.abs().max(1e-300));

            // δ = 0 rotation equals perpendicular SHO with A = R
            let flat: MotionProfile = Rotation::new(reach, omega_mech, 0.0).unwrap().into();
            let sho: MotionProfile = Sho::new(reach, omega_mech).unwrap().into();
            let a = mirror_rate(&atom, &flat, &mirror, n).unwrap().rate;
            let b = mirror_rate(&atom, &sho, &mirror, n).unwrap().rate;
            worst = worst.max((a - b).abs() / a.abs().max(1e-300));
            points += 1;
        }
    }
    let pass = worst < 1e-12;
    report(
        9,
        "rotation/parallel reductions",
        pass,
        format!("{points}-point grid, max relative deviation {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn c10_general_trajectory_regression() {
    let cfg = QuadratureConfig::default();
    let (omega_mech, omega0) = (1.0e9, 0.3e9);
    let atom = AtomParams::new(omega0, 0.1 * omega0).unwrap();
    let amplitude = 2.5 * SPEED_OF_LIGHT / omega_mech;
    let path = GeneralPeriodic::from_fn(omega_mech, 64, |t| amplitude * t.sin()).unwrap();
    let sho = Sho::new(amplitude, omega_mech).unwrap();
    let mut worst = 0.0f64;
    let mut lines = 0;

    let spectrum = oracle::general_trajectory_spectrum(&path, &Geometry::FreeSpace, &atom, 10, &cfg).unwrap();
    for line in &spectrum {
        let closed = free_space_rate(&atom, &sho, line.n).unwrap().rate;
        worst = worst.max((line.rate - closed).abs() / closed);
        lines += 1;
    }

    let mirror = Mirror::new(3.0 * amplitude).unwrap();
    let geom = Geometry::Mirror(mirror);
    let spectrum = oracle::general_trajectory_spectrum(&path, &geom, &atom, 10, &cfg).unwrap();
    for line in &spectrum {
        let closed = mirror_rate(&atom, &sho.into(), &mirror, line.n).unwrap().rate;
        worst = worst.max((line.rate - closed).abs() / closed);
        lines += 1;
    }
    let pass = worst < 1e-6 && lines == 20;
    report(
        10,
        "general-trajectory regression",
        pass,
        format!("{lines} lines, max relative deviation {worst:.2e}"),
    );
    assert!(pass);
}
