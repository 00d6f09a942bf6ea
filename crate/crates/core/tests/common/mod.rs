#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use bsn::geom::{classify, TriangleClass};
use bsn::{Point, TerminalTriangle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TWO_PI_3: f64 = 2.0 * PI / 3.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn well_shaped(t: &TerminalTriangle) -> bool {
    let (shortest, _) = t.shortest_side();
    shortest > 0.05 && t.angles().iter().all(|&a| a > 0.05)
}

/// Uniform points in the unit square, rejecting slivers.
pub fn any_triangle(rng: &mut impl Rng) -> TerminalTriangle {
    loop {
        let p: [[f64; 2]; 3] = std::array::from_fn(|_| [rng.gen(), rng.gen()]);
        if let Ok(t) = TerminalTriangle::from_coords(p) {
            if well_shaped(&t) {
                return t;
            }
        }
    }
}

/// All angles clearly below 2π/3.
pub fn interior_triangle(rng: &mut impl Rng) -> TerminalTriangle {
    loop {
        let t = any_triangle(rng);
        if t.angles().iter().all(|&a| a < TWO_PI_3 - 0.02) {
            return t;
        }
    }
}

/// Interior case with the three angles at least 0.02 apart.
pub fn generic_triangle(rng: &mut impl Rng) -> TerminalTriangle {
    loop {
        let t = interior_triangle(rng);
        let a = t.angles();
        if (a[0] - a[1]).abs() > 0.02 && (a[1] - a[2]).abs() > 0.02 && (a[0] - a[2]).abs() > 0.02 {
            return t;
        }
    }
}

/// One angle in `[2π/3 + 0.02, π − 0.15]`, randomly placed and oriented.
pub fn wide_triangle(rng: &mut impl Rng) -> TerminalTriangle {
    loop {
        let angle = rng.gen_range(TWO_PI_3 + 0.02..PI - 0.15);
        let (r1, r2) = (rng.gen_range(0.3..1.0), rng.gen_range(0.3..1.0));
        let turn = rng.gen_range(0.0..2.0 * PI);
        let apex = Point::new(rng.gen(), rng.gen());
        let u = Point::new(turn.cos(), turn.sin());
        let p = apex + u * r1;
        let q = apex + u.rotate(angle) * r2;
        let mut pts = [apex, p, q];
        let k = rng.gen_range(0..3);
        pts.rotate_left(k);
        let t = TerminalTriangle::new(pts[0], pts[1], pts[2]).unwrap();
        if well_shaped(&t) && matches!(classify(&t), TriangleClass::WideAngle(_)) {
            return t;
        }
    }
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bsn")
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub struct Invocation {
    pub status: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn run_cli(args: &[&str]) -> Invocation {
    let out = Command::new(bin()).args(args).output().expect("binary runs");
    Invocation { status: out.status.code().unwrap_or(-1), stdout: out.stdout, stderr: out.stderr }
}

/// A CLI invocation whose outputs are compared against checked-in files.
pub struct GoldenCase {
    pub name: String,
    /// Arguments with `{out}` / `{img}` placeholders for output paths.
    pub args: Vec<String>,
    /// Output file extensions; `stdout` captures the standard output.
    pub outputs: Vec<&'static str>,
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let mut cases = Vec::new();
    // (name, solve budgets, sweep from/to/samples, verify budgets)
    type Example = (&'static str, &'static [&'static str], (&'static str, &'static str, &'static str), &'static str);
    let examples: [Example; 3] = [
        ("equilateral", &["2", "3"], ("1.7320508075688772", "3", "101"), "1.8,2.2,2.8"),
        ("generic", &["8", "10.4", "11"], ("6.540994549059533", "11.404918347287664", "60"), "5,8,10.4,11,12"),
        ("wide", &["1.5", "3", "4.02"], ("0.5", "4.5", "41"), "1.5,2.02,3,4.02,4.5"),
    ];
    for (name, budgets, (from, to, n), verify) in examples {
        let spec = data_dir().join(format!("{name}.json")).display().to_string();
        for b in budgets {
            cases.push(GoldenCase {
                name: format!("{name}_solve_{b}"),
                args: ["solve", "--spec", &spec, "--budget", b, "--out", "{out}", "--image", "{img}"]
                    .map(String::from)
                    .to_vec(),
                outputs: vec!["json", "svg"],
            });
        }
        cases.push(GoldenCase {
            name: format!("{name}_sweep"),
            args: [
                "sweep",
                "--spec",
                &spec,
                "--from",
                from,
                "--to",
                to,
                "--samples",
                n,
                "--out",
                "{out}",
                "--curve-image",
                "{img}",
            ]
            .map(String::from)
            .to_vec(),
            outputs: vec!["csv", "svg"],
        });
        cases.push(GoldenCase {
            name: format!("{name}_verify"),
            args: ["verify", "--spec", &spec, "--budgets", verify, "--seed", "0"].map(String::from).to_vec(),
            outputs: vec!["stdout"],
        });
    }
    cases
}

/// Runs a case with outputs under `dir`; returns the exit status and the
/// produced `(file name, bytes)` pairs.
pub fn run_golden(case: &GoldenCase, dir: &Path) -> (i32, Vec<(String, Vec<u8>)>) {
    let file = |ext: &str| dir.join(format!("{}.{ext}", case.name));
    let primary = file(case.outputs[0]);
    let secondary = file(case.outputs.get(1).copied().unwrap_or("unused"));
    let args: Vec<String> = case
        .args
        .iter()
        .map(|a| a.replace("{out}", &primary.display().to_string()).replace("{img}", &secondary.display().to_string()))
        .collect();
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let inv = run_cli(&argv);
    let mut produced = Vec::new();
    for ext in &case.outputs {
        let name = format!("{}.{ext}", case.name);
        let bytes = if *ext == "stdout" { inv.stdout.clone() } else { std::fs::read(file(ext)).unwrap_or_default() };
        produced.push((name, bytes));
    }
    (inv.status, produced)
}

pub fn golden_dir() -> PathBuf {
    data_dir().join("golden")
}
