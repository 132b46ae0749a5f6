use shearlab::cli::{main_with_args, run_command, Command};
use shearlab::config::RunConfig;
use std::fs;
use std::path::Path;
use std::process::Command as Process;

const TOY: &str = "[toy]\nvariant = \"A1\"\nnu = 0.01\ninit = [1.0, 0.0]\nt_end = 200.0\ncount = 50\n";

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> i32 {
    let mut v = vec!["shearlab"];
    v.extend_from_slice(args);
    main_with_args(v)
}

#[test]
fn outputs_are_byte_deterministic() {
    let cfg: RunConfig = RunConfig::parse(TOY, None).unwrap();
    let a = run_command(Command::Toy, &cfg, true).unwrap();
    let b = run_command(Command::Toy, &cfg, true).unwrap();
    assert_eq!(a.names(), b.names());
    for n in a.names() {
        assert_eq!(a.get(n), b.get(n), "{n}");
    }
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "toy.toml", TOY);
    let (o1, o2) = (dir.path().join("o1"), dir.path().join("o2"));
    assert_eq!(run(&["toy", "--config", &c, "--out", o1.to_str().unwrap()]), 0);
    assert_eq!(run(&["toy", "--config", &c, "--out", o2.to_str().unwrap()]), 0);
    for f in ["toy.csv", "toy.json"] {
        assert_eq!(fs::read(o1.join(f)).unwrap(), fs::read(o2.join(f)).unwrap());
    }
}

#[test]
fn headers_carry_hash_tolerances_and_anchor() {
    let cfg: RunConfig = RunConfig::parse(TOY, None).unwrap();
    let out = run_command(Command::Toy, &cfg, false).unwrap();
    let csv = out.get("toy.csv").unwrap();
    let hash = shearlab::io::config_hash(&cfg).unwrap();
    let head: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(head.iter().any(|l| l.contains(&hash)));
    assert!(head.iter().any(|l| l.contains("tol_eigen")));
    assert!(head.iter().any(|l| l.contains("two-mode toy model")));
    // Every data value carries 17 significant digits.
    let row = csv.lines().filter(|l| !l.starts_with('#')).nth(2).unwrap();
    for v in row.split(',') {
        let mant = v.trim().trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mant.replace('.', "").len(), 17, "{v}");
    }
    assert!(out.names().iter().all(|n| !n.ends_with(".svg")));
    let plotted = run_command(Command::Toy, &cfg, true).unwrap();
    assert!(plotted.names().iter().any(|n| n.ends_with(".svg")));
}

#[test]
fn different_configs_hash_differently() {
    let a: RunConfig = RunConfig::parse(TOY, None).unwrap();
    let b: RunConfig = RunConfig::parse(&TOY.replace("nu = 0.01", "nu = 0.02"), None).unwrap();
    assert_ne!(shearlab::io::config_hash(&a).unwrap(), shearlab::io::config_hash(&b).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();

    let bad = write(dir.path(), "bad.toml", "[toy]\nvariant = \"A1\"\nnu = \n");
    assert_eq!(run(&["toy", "--config", &bad, "--out", o]), 4);
    let unknown = write(dir.path(), "unknown.toml", "[toy]\nspeed = 3\n");
    assert_eq!(run(&["toy", "--config", &unknown, "--out", o]), 4);
    assert_eq!(run(&["toy", "--config", "/nonexistent/x.toml", "--out", o]), 4);
    assert_eq!(run(&["frobnicate"]), 4);
    assert_eq!(run(&["evolve", "--grid-n", "10", "--out", o]), 4);
    assert!(!out.exists(), "failed runs must not write output");

    let couette = write(dir.path(), "couette.toml", "[flow]\nkind = \"couette\"\n[grid]\nL = 8.0\nh = 0.02\n");
    assert_eq!(run(&["witness", "--config", &couette, "--out", o]), 2);
    let unreachable = write(dir.path(), "nb.toml", "[flow]\nkind = \"neutral_build\"\ngamma0 = 0.5\ngamma1 = 0.3\ntarget = -100.0\n");
    assert_eq!(run(&["flow-build", "--config", &unreachable, "--out", o]), 3);
    assert!(!out.exists());

    assert_eq!(run(&["analyze", "--config", &couette, "--out", o, "--tol-eigen", "1e-8"]), 0);
    assert!(out.join("indicators.csv").exists());
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_shearlab");
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "toy.toml", TOY);
    let ok = Process::new(bin).args(["toy", "--config", &c, "--out"]).arg(dir.path().join("o")).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Process::new(bin).args(["toy", "--tol-eigen", "abc"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(4));
}
