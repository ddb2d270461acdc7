//! Acceptance run: one line per criterion, non-zero exit if any fails.

use momix::cli::suites::{classification_stalks, kl_from_degrees, run_suite};
use momix::cli::{verify, Env, RunConfig};
use momix::coxeter::CoxeterGroup;
use std::collections::HashMap;
use std::time::Instant;

fn env(t: &str) -> Env {
    let mut c = RunConfig::for_type(t);
    c.jobs = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    Env::new(c).expect("configured group")
}

fn env_len(t: &str, max_length: usize) -> Env {
    let mut e = env(t);
    e.config.max_length = Some(max_length);
    e
}

/// Runs the named suites and collects failures as text.
fn suites(e: &Env, names: &[&str]) -> Result<String, String> {
    let mut cases = 0;
    for s in names {
        let r = run_suite(e, s).map_err(|err| format!("{s}: {err}"))?;
        if let Some(c) = r.cases.iter().find(|c| !c.passed) {
            return Err(format!(
                "{} {s}/{}: {}",
                e.config.type_spec, c.name, c.detail
            ));
        }
        cases += r.cases.len();
    }
    Ok(format!("{cases} cases"))
}

fn all(parts: Vec<Result<String, String>>) -> Result<String, String> {
    let mut out = Vec::new();
    for p in parts {
        out.push(p?);
    }
    Ok(out.join(", "))
}

// Kazhdan–Lusztig polynomials from R-polynomials, using only multiplication and length.
struct Oracle<'a> {
    g: &'a CoxeterGroup,
    r: HashMap<(usize, usize), Vec<i64>>,
    p: HashMap<(usize, usize), Vec<i64>>,
}

fn add(a: &mut Vec<i64>, b: &[i64], shift: usize, c: i64) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, x) in b.iter().enumerate() {
        a[i + shift] += c * x;
    }
}

fn trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl<'a> Oracle<'a> {
    fn new(g: &'a CoxeterGroup) -> Self {
        Oracle {
            g,
            r: HashMap::new(),
            p: HashMap::new(),
        }
    }

    fn descent(&self, w: usize) -> usize {
        (0..self.g.rank())
            .find(|&s| self.g.length(self.g.mul_right(w, s)) < self.g.length(w))
            .unwrap()
    }

    fn r(&mut self, x: usize, w: usize) -> Vec<i64> {
        if let Some(v) = self.r.get(&(x, w)) {
            return v.clone();
        }
        let g = self.g;
        let v = if g.length(w) == 0 {
            if g.length(x) == 0 {
                vec![1]
            } else {
                vec![]
            }
        } else {
            let s = self.descent(w);
            let (xs, ws) = (g.mul_right(x, s), g.mul_right(w, s));
            if g.length(xs) < g.length(x) {
                self.r(xs, ws)
            } else {
                // (q − 1) R_{x, ws} + q R_{xs, ws}
                let a = self.r(x, ws);
                let b = self.r(xs, ws);
                let mut out = Vec::new();
                add(&mut out, &a, 1, 1);
                add(&mut out, &a, 0, -1);
                add(&mut out, &b, 1, 1);
                trim(out)
            }
        };
        self.r.insert((x, w), v.clone());
        v
    }

    fn below(&mut self, x: usize, w: usize) -> bool {
        !self.r(x, w).is_empty()
    }

    fn p(&mut self, x: usize, w: usize) -> Vec<i64> {
        if let Some(v) = self.p.get(&(x, w)) {
            return v.clone();
        }
        let v = if x == w {
            vec![1]
        } else if !self.below(x, w) {
            vec![]
        } else {
            // q^ℓ P̄ − P = Σ_{x<y≤w} R_{x,y} P_{y,w}; P holds the part of degree ≤ (ℓ−1)/2
            let l = self.g.length(w) - self.g.length(x);
            let mut rhs = Vec::new();
            for y in 0..self.g.len() {
                if y != x && self.below(x, y) && self.below(y, w) {
                    let (ry, py) = (self.r(x, y), self.p(y, w));
                    for (i, c) in py.iter().enumerate() {
                        add(&mut rhs, &ry, i, *c);
                    }
                }
            }
            trim(
                (0..=(l - 1) / 2)
                    .map(|k| -rhs.get(k).copied().unwrap_or(0))
                    .collect(),
            )
        };
        self.p.insert((x, w), v.clone());
        v
    }
}

fn kl_against_oracle(e: &Env, tops: &[usize]) -> Result<String, String> {
    let g = e.cat.group();
    let mut oracle = Oracle::new(g);
    let mut pairs = 0;
    for &w in tops {
        let stalks = classification_stalks(e, w).map_err(|err| err.to_string())?;
        for x in 0..g.len() {
            let got = kl_from_degrees(&stalks[x]).map_err(|err| err.to_string())?;
            let want = oracle.p(x, w);
            if got != want {
                return Err(format!(
                    "P({}, {}) = {want:?}, stalks give {got:?}",
                    g.name(x),
                    g.name(w)
                ));
            }
            pairs += usize::from(!want.is_empty());
        }
    }
    Ok(format!("{} {pairs} pairs", e.config.type_spec))
}

fn c2() -> Result<String, String> {
    let (a2, b2, a3) = (env("A2"), env("B2"), env_len("A3", 4));
    let full = |e: &Env| (0..e.cat.len()).collect::<Vec<_>>();
    let short: Vec<usize> = (0..a3.cat.len())
        .filter(|&w| a3.cat.group().length(w) <= 4)
        .collect();
    let g = a3.cat.group();
    let (x, w) = (
        g.parse_element("s2").unwrap(),
        g.parse_element("s2s1s3s2").unwrap(),
    );
    let stalks = classification_stalks(&a3, w).map_err(|e| e.to_string())?;
    let singular = kl_from_degrees(&stalks[x]).map_err(|e| e.to_string())?;
    if singular != vec![1, 1] {
        return Err(format!("P(s2, s2s1s3s2) from stalks is {singular:?}"));
    }
    all(vec![
        kl_against_oracle(&a2, &full(&a2)),
        kl_against_oracle(&b2, &full(&b2)),
        kl_against_oracle(&a3, &short),
        suites(&a3, &["kl"]),
    ])
}

fn c14() -> Result<String, String> {
    let mut e = env("A2");
    e.config.seed = 7;
    let dir = std::env::temp_dir().join(format!("momix-acceptance-{}", std::process::id()));
    e.config.out = Some(dir.clone());
    let snapshot = |e: &Env| -> Result<Vec<(String, Vec<u8>)>, String> {
        verify(e, "all", Some(&dir)).map_err(|err| err.to_string())?;
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .map_err(|err| err.to_string())?
            .filter_map(|f| f.ok())
            .map(|f| f.file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".json") && !n.ends_with(".timing.json"))
            .map(|n| {
                let bytes = std::fs::read(dir.join(&n)).unwrap_or_default();
                (n, bytes)
            })
            .collect();
        files.sort();
        Ok(files)
    };
    let first = snapshot(&e)?;
    let second = snapshot(&Env::new(e.config.clone()).map_err(|err| err.to_string())?)?;
    let _ = std::fs::remove_dir_all(&dir);
    if first.len() < momix::cli::suites::SUITES.len() {
        return Err(format!("only {} artifacts written", first.len()));
    }
    match first.iter().zip(&second).find(|(a, b)| a != b) {
        Some((a, _)) => Err(format!("{} differs between runs", a.0)),
        None if first.len() == second.len() => {
            Ok(format!("{} artifacts byte-identical", first.len()))
        }
        None => Err("artifact sets differ".into()),
    }
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Result<String, String>>)> = vec![
        (
            "BMP axioms on A1, A2, B2 and A3 up to length 4",
            Box::new(|| {
                all(vec![
                    suites(&env("A1"), &["axioms"]),
                    suites(&env("A2"), &["axioms"]),
                    suites(&env("B2"), &["axioms"]),
                    suites(&env_len("A3", 4), &["axioms"]),
                ])
            }),
        ),
        ("KL characters from stalks", Box::new(c2)),
        (
            "closed/open Hom dimension identities on A2",
            Box::new(|| suites(&env("A2"), &["ses"])),
        ),
        (
            "condition (V) on A2, B2 and a failing graph",
            Box::new(|| {
                all(vec![
                    suites(&env("A2"), &["vcond"]),
                    suites(&env("B2"), &["vcond"]),
                ])
            }),
        ),
        (
            "Hom vanishing between standard and costandard objects",
            Box::new(|| suites(&env("A2"), &["vanishing", "rouquier-formula"])),
        ),
        (
            "braid relations with witnesses on A2, B2",
            Box::new(|| {
                all(vec![
                    suites(&env("A2"), &["braid"]),
                    suites(&env("B2"), &["braid"]),
                ])
            }),
        ),
        (
            "letters agree with recollement on S3",
            Box::new(|| suites(&env("A2"), &["std-rouquier"])),
        ),
        (
            "convolution of standard objects and inverse pairs",
            Box::new(|| suites(&env("A2"), &["convolution"])),
        ),
        (
            "perversity of standard and costandard objects",
            Box::new(|| {
                all(vec![
                    suites(&env("A2"), &["perverse"]),
                    suites(&env("B2"), &["perverse"]),
                ])
            }),
        ),
        (
            "distinguished triangle for the F-letter",
            Box::new(|| suites(&env("A2"), &["triangle"])),
        ),
        (
            "Ringel duality on S3",
            Box::new(|| suites(&env("A2"), &["ringel"])),
        ),
        (
            "Soergel degree conditions on A2, B2",
            Box::new(|| {
                all(vec![
                    suites(&env("A2"), &["soergel"]),
                    suites(&env("B2"), &["soergel"]),
                ])
            }),
        ),
        (
            "localization round trip and T_sT_sE_1",
            Box::new(|| suites(&env("A2"), &["roundtrip"])),
        ),
        ("byte-identical artifacts for a fixed seed", Box::new(c14)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
