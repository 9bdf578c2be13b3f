use std::path::Path;
use std::process::{Command, Output};

use vibrad::rates::free_space_rate;
use vibrad::units::SPEED_OF_LIGHT;
use vibrad::{AtomParams, Sho};

fn vibrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vibrad"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

const FREE: &str = r#"
[atom]
transition_hz = 4.1e9
coupling_hz = 3.3e8

[motion]
kind = "sho"
frequency_hz = 1.3e10
amplitude = "2.7 mm"

[geometry]
kind = "free_space"

[run]
n = 2
"#;

#[test]
fn hz_config_matches_angular_api() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "free.toml", FREE);
    let out = vibrad(&["rate", "--config", &cfg, "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cli_rate = json["sideband"]["rate"].as_f64().unwrap();

    let tau = std::f64::consts::TAU;
    let atom = AtomParams::new(tau * 4.1e9, tau * 3.3e8).unwrap();
    let sho = Sho::new(2.7e-3, tau * 1.3e10).unwrap();
    let api = free_space_rate(&atom, &sho, 2).unwrap();
    assert!(
        (cli_rate - api.rate).abs() <= 1e-12 * api.rate.abs(),
        "{cli_rate} vs {}",
        api.rate
    );
    let omega = json["sideband"]["omega"].as_f64().unwrap();
    assert!((omega - api.omega).abs() <= 1e-12 * api.omega);
}

#[test]
fn verify_adds_oracle_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "free.toml", FREE);
    let text = stdout(&vibrad(&["rate", "--config", &cfg, "--verify"]));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,mode,branch,omega_rad_s,rate_hz,oracle_rate_hz,deviation"
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    let deviation: f64 = fields[6].parse().unwrap();
    assert!(deviation < 1e-6);
}

#[test]
fn mirror_collision_exits_with_domain_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "mirror.toml",
        r#"
[atom]
transition_hz = 1e9
alpha = 0.1
[motion]
kind = "sho"
frequency_hz = 3e9
amplitude = "20 nm"
[geometry]
kind = "mirror"
z0 = "10 nm"
"#,
    );
    let out = vibrad(&["rate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mirror"));
}

#[test]
fn config_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "[atom]\ntransition_hz = 1e9\n\n[motion]\nkind = \"wobble\"\n",
    );
    let out = vibrad(&["rate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("wobble"), "{err}");

    let out = vibrad(&[
        "rate",
        "--config",
        &dir.path().join("missing.toml").to_string_lossy(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fig2_csv_shape() {
    let text = stdout(&vibrad(&["sweep", "--preset", "fig2"]));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "a_tilde,n,value");
    assert_eq!(data.len() - 1, 512 * 30);
    assert!(text.contains("# normalization=prefactor-omitted"));
    let last: Vec<&str> = data.last().unwrap().split(',').collect();
    assert_eq!(last[0].parse::<f64>().unwrap(), 30.0);
    assert_eq!(last[1], "30");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["sweep", "--preset", "fig3"],
        vec!["sweep", "--preset", "fig2", "--format", "json"],
        vec!["oracle", "--seed", "7", "--draws", "40"],
    ] {
        let a = dir.path().join("a.out");
        let b = dir.path().join("b.out");
        let mut first = args.clone();
        first.extend(["--output", a.to_str().unwrap()]);
        let mut second = args.clone();
        second.extend(["--output", b.to_str().unwrap()]);
        stdout(&vibrad(&first));
        stdout(&vibrad(&second));
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
    let seven = stdout(&vibrad(&["oracle", "--seed", "7", "--draws", "40"]));
    let eight = stdout(&vibrad(&["oracle", "--seed", "8", "--draws", "40"]));
    assert_ne!(seven, eight);
}

#[test]
fn cavity_spectrum_has_the_constructed_line_only() {
    // 2 x 1 GHz - 0.4 GHz = 1.6 GHz sits on mode m = 3; the next resonant
    // sideband is n = 10, beyond n_max.
    let length = 3.0 * SPEED_OF_LIGHT / (2.0 * 1.6e9);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cavity.toml",
        &format!(
            r#"
[atom]
transition_hz = 0.4e9
alpha = 0.05
[motion]
kind = "sho"
frequency_hz = 1e9
amplitude = "5 mm"
[geometry]
kind = "cavity"
length = {length:e}
z0 = {:e}
[run]
n_max = 6
"#,
            0.3 * length
        ),
    );
    let text = stdout(&vibrad(&["spectrum", "--config", &cfg, "--verify"]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1, "{text}");
    assert!(rows[0].starts_with("2,3,emit-excite,"), "{text}");
}

#[test]
fn custom_sweep_over_named_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "custom.toml",
        &format!(
            "{FREE}\n[sweep]\npreset = \"custom\"\naxis1 = {{ name = \"amplitude\", start = \"0 mm\", stop = \"5 mm\", count = 6 }}\n\
             axis2 = {{ name = \"n\", start = 1, stop = 3, count = 3 }}\n"
        ),
    );
    let text = stdout(&vibrad(&["sweep", "--config", &cfg]));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "amplitude,n,value");
    assert_eq!(data.len(), 1 + 18);
    // zero amplitude radiates nothing on any sideband
    for row in &data[1..4] {
        assert!(row.ends_with(",0e0"), "{row}");
    }

    let bad = write(
        dir.path(),
        "bad_axis.toml",
        &format!("{FREE}\n[sweep]\npreset = \"custom\"\naxis1 = {{ name = \"mass\", start = 0, stop = 1, count = 2 }}\n"),
    );
    assert_eq!(vibrad(&["sweep", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn oracle_report_passes() {
    let text = stdout(&vibrad(&["oracle", "--seed", "20191113"]));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with(",PASS")), "{text}");
}
