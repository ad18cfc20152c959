use clap::{Args, Parser, Subcommand};
use fillcurves::catalog_io::{catalog_text, parse_csf, serialize_csf};
use fillcurves::curve_system::CurveSystem;
use fillcurves::free_group::{
    check_pingpong_inclusion, format_abstract, pingpong_generator, relation_search_abstract, stallings_rank, Gen,
    ReducedWord,
};
use fillcurves::twist_engine::{
    dehn_twist, family_names, relation_probe, twist_copy, verify_family, verify_twist_formula, verify_twist_inequality,
};
use fillcurves::Error;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "fillcurves", version, about = "Filling curve systems, Dehn twists and free-group certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the d-curve family from a filling pair and verify it.
    VerifyFamily {
        /// CSF file or catalog id holding exactly two curves.
        #[arg(long, value_name = "FILE")]
        pair: String,
        #[arg(long)]
        d: i64,
        /// Largest twist power in the twist sweeps.
        #[arg(long = "k", default_value_t = 3)]
        k_max: i64,
        /// Word length bound for the relation probe.
        #[arg(long = "L", default_value_t = 6)]
        max_len: usize,
        /// Write the family as CSF here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Geometric intersection number of two curves.
    Intersect {
        file: String,
        x: String,
        y: String,
        #[command(flatten)]
        output: Output,
    },
    /// Twist `target` along `along` k times and write the result as CSF.
    Twist {
        file: String,
        along: String,
        target: String,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Replace the target instead of adding its image as a new curve.
        #[arg(long)]
        replace: bool,
        /// Name of the new curve (default `<target>_<along><k>`).
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Certify that the ping-pong generators g_0..g_{d-1} form a free basis.
    CertifyFree {
        #[arg(long)]
        d: i64,
        #[arg(long = "L", default_value_t = 6)]
        max_len: usize,
        #[arg(long = "k", default_value_t = 3)]
        k_max: i64,
        /// Use {f, f^2} as generators instead (expected to fail).
        #[arg(long)]
        debug_generators: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Face degrees and genus of the map.
    Faces {
        file: String,
        #[command(flatten)]
        output: Output,
    },
    /// Parse and check a system; print its intersection table.
    Validate {
        file: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    inputs: Value,
    payload: Value,
    passed: bool,
    failures: Vec<String>,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    seconds: f64,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFillingPair | Error::NotCellular { .. } | Error::Catalog { .. } | Error::Internal(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Outcome {
    inputs: Value,
    payload: Value,
    failures: Vec<String>,
}

fn load(arg: &str) -> Result<CurveSystem, Failure> {
    let text = match std::fs::read_to_string(arg) {
        Ok(t) => t,
        Err(e) => match catalog_text(arg) {
            Some(t) => t.to_string(),
            None => return Err(Failure::Usage(format!("cannot read {arg}: {e}"))),
        },
    };
    parse_csf(&text).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn verify_family_cmd(
    pair: &str,
    d: i64,
    k_max: i64,
    max_len: usize,
    out: Option<&PathBuf>,
) -> Result<Outcome, Failure> {
    if d < 2 {
        return Err(Failure::Usage(format!("d must be >= 2, got {d}")));
    }
    if k_max < 1 || max_len < 1 {
        return Err(Failure::Usage("--k and --L must be at least 1".into()));
    }
    let s = load(pair)?;
    let curves = s.curves();
    if curves.len() != 2 {
        return Err(Failure::Usage(format!("{pair} has {} curves, expected a pair", curves.len())));
    }
    let (a, b) = (&curves[0], &curves[1]);
    let (fam, report) = verify_family(&s, a, b, d)?;
    let mut failures: Vec<String> =
        report.checks.iter().filter(|c| !c.pass).map(|c| format!("family {}: {}", c.name, c.detail)).collect();
    println!("family d={d} on genus {} (i(a,b) = {})", report.genus, report.base_intersection);
    print!("{}", report.pairwise);
    for c in &report.checks {
        println!("  {:<10} {}  {}", c.name, if c.pass { "ok  " } else { "FAIL" }, c.detail);
    }
    println!("  ell = {} (formula {})", report.ell, report.formula_ell);

    let twist_formula = verify_twist_formula(&s, a, b, k_max)?;
    let bad: Vec<_> = twist_formula.iter().filter(|c| !c.pass).collect();
    println!("  twist sweep k=-{k_max}..{k_max}: {} cells, {} failed", twist_formula.len(), bad.len());
    for c in bad {
        failures.push(format!("twist sweep k={}: {} != {}", c.k, c.computed, c.expected));
    }

    let names = family_names(d as usize);
    let fc: Vec<_> = names.iter().map(|n| fam.curve(n)).collect::<Result<_, _>>()?;
    let mut twist_inequality = Vec::new();
    for x in &fc {
        for y in &fc {
            if x == y {
                continue;
            }
            for z in &fc {
                for k in [-1, 1, 2] {
                    twist_inequality.push(verify_twist_inequality(&fam, x, y, z, k)?);
                }
            }
        }
    }
    let bad: Vec<_> = twist_inequality.iter().filter(|c| !c.pass).collect();
    println!("  twist inequality: {} cells, {} failed", twist_inequality.len(), bad.len());
    for c in bad {
        failures.push(format!(
            "twist inequality a={} b={} c={} k={}: |{} - {}| > {}",
            c.a, c.b, c.c, c.k, c.lhs, c.main_term, c.tolerance
        ));
    }

    let probe = relation_probe(&fam, &fc, max_len)?;
    println!("  relation probe L={max_len}: {} words, {} suspicious", probe.words_checked, probe.suspicious.len());
    for w in &probe.suspicious {
        failures.push(format!("relation probe: {w} fixes every curve"));
    }

    let gens: Vec<ReducedWord> = (0..d).map(pingpong_generator).collect::<Result<_, _>>()?;
    let rank = stallings_rank(&gens)?;
    println!("  free basis: rank {} of {} generators", rank.rank, rank.generators);
    if !rank.is_basis {
        failures.push(format!("rank {} < {}", rank.rank, rank.generators));
    }
    if let Some(path) = out {
        write_file(path, &serialize_csf(&fam))?;
    }
    Ok(Outcome {
        inputs: json!({ "pair": pair, "d": d, "k_max": k_max, "L": max_len }),
        payload: json!({
            "family": to_value(&report),
            "twist_sweep": to_value(&twist_formula),
            "twist_inequality": { "cells": twist_inequality.len(), "failed": twist_inequality.iter().filter(|c| !c.pass).map(to_value).collect::<Vec<_>>() },
            "relation_probe": to_value(&probe),
            "rank": to_value(&rank),
        }),
        failures,
    })
}

fn intersect_cmd(file: &str, x: &str, y: &str) -> Result<Outcome, Failure> {
    let s = load(file)?;
    let (cx, cy) = (s.curve(x)?, s.curve(y)?);
    let n = if cx == cy {
        eprintln!("note: {x} and {y} are the same curve");
        0
    } else {
        s.intersection_number(&cx, &cy)?
    };
    println!("{n}");
    Ok(Outcome {
        inputs: json!({ "file": file, "x": x, "y": y }),
        payload: json!({ "intersection": n }),
        failures: vec![],
    })
}

fn twist_cmd(
    file: &str,
    along: &str,
    target: &str,
    k: i64,
    replace: bool,
    name: Option<&str>,
    out: Option<&PathBuf>,
) -> Result<(), Failure> {
    let s = load(file)?;
    let (c, t) = (s.curve(along)?, s.curve(target)?);
    if c == t {
        return Err(Failure::Usage(format!("cannot twist {target} along itself")));
    }
    let result = if k == 0 {
        s
    } else if replace {
        dehn_twist(&s, &c, &t, k)?
    } else {
        let name = name.map(str::to_string).unwrap_or_else(|| format!("{target}_{along}{k}"));
        twist_copy(&s, &c, &t, k, &name)?
    };
    let text = serialize_csf(&result);
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn certify_free_cmd(d: i64, max_len: usize, k_max: i64, debug: bool) -> Result<Outcome, Failure> {
    if d < 2 {
        return Err(Failure::Usage(format!("d must be >= 2, got {d}")));
    }
    if k_max < 1 || max_len < 1 {
        return Err(Failure::Usage("--k and --L must be at least 1".into()));
    }
    let mut failures = Vec::new();
    let gens: Vec<ReducedWord> = if debug {
        let f = ReducedWord::gen_power(Gen::F, 1);
        vec![f.clone(), f.pow(2)]
    } else {
        (0..d).map(pingpong_generator).collect::<Result<_, _>>()?
    };
    for (i, g) in gens.iter().enumerate() {
        println!("  g{i} = {g}");
    }
    let rank = stallings_rank(&gens)?;
    println!(
        "rank {} of {} generators: {}",
        rank.rank,
        rank.generators,
        if rank.is_basis { "basis" } else { "NOT a basis" }
    );
    if !rank.is_basis {
        failures.push(format!("rank {} < {}", rank.rank, rank.generators));
    }
    let mut payload =
        json!({ "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(), "rank": to_value(&rank) });
    if !debug {
        let pp = check_pingpong_inclusion(d as usize, k_max, max_len)?;
        println!("ping-pong inclusions: {} checked, {}", pp.checked, if pp.passed() { "all hold" } else { "FAILED" });
        if let Some(w) = &pp.counterexample {
            failures.push(format!("g{}^{} maps {} to {} outside X{}", w.i, w.k, w.word, w.image, w.i));
        }
        let rel = relation_search_abstract(d as usize, max_len)?;
        println!("relations up to length {max_len}: {}", rel.len());
        for r in &rel {
            failures.push(format!("relation {}", format_abstract(r)));
        }
        payload["pingpong"] = to_value(&pp);
        payload["relations"] = json!(rel.iter().map(|r| format_abstract(r)).collect::<Vec<_>>());
    }
    Ok(Outcome {
        inputs: json!({ "d": d, "L": max_len, "k_max": k_max, "debug_generators": debug }),
        payload,
        failures,
    })
}

fn faces_cmd(file: &str) -> Result<Outcome, Failure> {
    let s = load(file)?;
    let r = s.faces();
    let degrees = r.degree_multiset();
    println!(
        "faces {}  vertices {}  edges {}  euler {}  genus {}",
        r.face_count(),
        r.vertices,
        r.edges,
        r.euler,
        r.genus
    );
    println!("degrees {degrees:?}");
    Ok(Outcome {
        inputs: json!({ "file": file }),
        payload: json!({
            "faces": r.face_count(), "degrees": degrees, "vertices": r.vertices, "edges": r.edges,
            "euler": r.euler, "components": r.components, "genus": r.genus,
        }),
        failures: vec![],
    })
}

fn validate_cmd(file: &str) -> Result<Outcome, Failure> {
    let s = load(file)?;
    println!("genus {}  vertices {}  curves {}", s.ambient_genus(), s.vertex_count(), s.curve_count());
    let fill = s.is_filling()?;
    println!("filling {}  faces {}  traced genus {}", fill.filling, fill.face_count, fill.genus);
    let table = if fill.filling { Some(s.intersection_table()?) } else { None };
    match &table {
        Some(t) => print!("{t}"),
        None => print!("{}", s.raw_crossing_counts()),
    }
    Ok(Outcome {
        inputs: json!({ "file": file }),
        payload: json!({ "filling": to_value(&fill), "intersection": table.as_ref().map(to_value) }),
        failures: vec![],
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (result, json_path) = match &cli.command {
        Command::VerifyFamily { pair, d, k_max, max_len, out, output } => {
            (verify_family_cmd(pair, *d, *k_max, *max_len, out.as_ref()), output.json.clone())
        }
        Command::Intersect { file, x, y, output } => (intersect_cmd(file, x, y), output.json.clone()),
        Command::Twist { file, along, target, k, replace, name, out } => {
            return match twist_cmd(file, along, target, *k, *replace, name.as_deref(), out.as_ref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(f) => fail(f),
            };
        }
        Command::CertifyFree { d, max_len, k_max, debug_generators, output } => {
            (certify_free_cmd(*d, *max_len, *k_max, *debug_generators), output.json.clone())
        }
        Command::Faces { file, output } => (faces_cmd(file), output.json.clone()),
        Command::Validate { file, output } => (validate_cmd(file), output.json.clone()),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(f) => return fail(f),
    };
    let passed = outcome.failures.is_empty();
    if let Some(first) = outcome.failures.first() {
        eprintln!("FAIL: {first}");
    }
    if let Some(path) = json_path {
        let report = RunReport {
            command: std::env::args().skip(1).collect(),
            inputs: outcome.inputs,
            payload: outcome.payload,
            passed,
            failures: outcome.failures,
            timing: Timing { seconds: start.elapsed().as_secs_f64() },
        };
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(f) = write_file(&path, &text) {
            return fail(f);
        }
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Check(msg) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
    }
}
