//! Command-line front end: input parsing, run orchestration, JSON/OFF output.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use latpack::catalog::{make_solid, SOLID_NAMES};
use latpack::io::{parse_hrep, parse_off, write_off_translates};
use latpack::polytope::{Classification, Polytope};
use latpack::search::{
    densest_packing_full, lattice_shell, PackingResult, SearchCase, SearchOptions,
};
use latpack::verify::verify_exact;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "latpack",
    version,
    about = "Densest lattice packings of bounded 3-polytopes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the density of a densest lattice packing and an optimal basis
    Solve(SolveArgs),
    /// List the built-in solids
    Solids,
}

#[derive(Args)]
struct SolveArgs {
    /// Name of a built-in solid (see `latpack solids`)
    #[arg(long, conflicts_with = "input")]
    solid: Option<String>,

    /// Input polytope: OFF mesh (.off) or halfspace text (.hrep),
    /// one "a1 a2 a3 b" line per halfspace meaning a.x <= b
    #[arg(long)]
    input: Option<PathBuf>,

    /// Restrict the search to a case (repeatable: I, II, III, IV).
    /// The result is only guaranteed optimal when all cases run.
    #[arg(long = "case", value_name = "CASE")]
    cases: Vec<String>,

    /// Worker threads; 0 uses all available, 1 is the deterministic
    /// reference configuration
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Write the JSON report to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,

    /// Write an OFF file containing the polytope translated by all lattice
    /// vectors W m with integer coordinates in [-shells, shells]^3
    #[arg(long, value_name = "PATH")]
    emit_packing: Option<PathBuf>,

    /// Shell radius for --emit-packing
    #[arg(long, default_value_t = 1)]
    shells: i64,

    /// Scan the per-facet exclusion systems instead of deferring
    /// exclusion-violating case I/II configurations to case III
    #[arg(long)]
    exhaustive_exclusions: bool,

    /// Re-derive the winning hyperplane system in exact rational arithmetic
    /// and report a closed form for the density when one reconstructs
    #[arg(long)]
    verify_exact: bool,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Solids => {
            for name in SOLID_NAMES {
                println!("{name}");
            }
            0
        }
        Cmd::Solve(args) => match run_solve(&args) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e:#}");
                2
            }
        },
    };
    std::process::exit(code);
}

fn load_input(args: &SolveArgs) -> Result<(String, Polytope)> {
    match (&args.solid, &args.input) {
        (Some(name), None) => {
            let p = make_solid(name).with_context(|| format!("building solid '{name}'"))?;
            Ok((name.clone(), p))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let ext = path
                .extension()
                .and_then(|e| e.to_str())
                .unwrap_or("")
                .to_lowercase();
            let p = if ext == "off" || text.trim_start().starts_with("OFF") {
                parse_off(&text).context("parsing OFF input")?
            } else {
                parse_hrep(&text).context("parsing halfspace input")?
            };
            Ok((path.display().to_string(), p))
        }
        _ => bail!("exactly one of --solid or --input is required"),
    }
}

fn parse_cases(raw: &[String]) -> Result<Vec<SearchCase>> {
    if raw.is_empty() {
        return Ok(SearchCase::ALL.to_vec());
    }
    let mut out = Vec::new();
    for s in raw {
        let c = SearchCase::parse(s).with_context(|| format!("unknown case '{s}'"))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

fn run_solve(args: &SolveArgs) -> Result<()> {
    if args.shells < 0 {
        bail!("--shells must be nonnegative");
    }
    let started = Instant::now();
    let (input_name, p) = load_input(args)?;
    let cases = parse_cases(&args.cases)?;
    let opts = SearchOptions {
        cases: cases.clone(),
        exhaustive_exclusions: args.exhaustive_exclusions,
        threads: args.threads,
    };
    let (result, centered, p0) = densest_packing_full(&p, &opts)
        .map_err(|e| anyhow::anyhow!("search failed: {e}"))?;

    let mut warnings: Vec<&str> = Vec::new();
    if cases.len() < SearchCase::ALL.len() {
        warnings.push("partial-cases");
    }
    if result.marginal {
        warnings.push("marginal");
    }

    let exact = if args.verify_exact {
        Some(verify_exact(&p0, &result))
    } else {
        None
    };

    if let Some(path) = &args.emit_packing {
        let shifts = lattice_shell(&result.basis, args.shells);
        warn_on_overlaps(&p0, &result, args.shells);
        let mut f = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        write_off_translates(&centered, &shifts, &mut f)?;
    }

    let runtime_ms = started.elapsed().as_millis();
    let json = render_report(&input_name, &result, &warnings, exact.as_ref(), runtime_ms);
    match &args.output {
        Some(path) => std::fs::write(path, json.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(json.as_bytes())?;
        }
    }
    Ok(())
}

/// Spot check before emitting a packing: no two translates in the shell may
/// overlap, i.e. no nonzero lattice difference lies interior to P - P.
fn warn_on_overlaps(p0: &Polytope, result: &PackingResult, shells: i64) {
    let w = &result.basis;
    let r = 2 * shells;
    let tol = p0.geo_tol();
    for mx in -r..=r {
        for my in -r..=r {
            for mz in -r..=r {
                if (mx, my, mz) == (0, 0, 0) {
                    continue;
                }
                let z = w.col[0] * mx as f64 + w.col[1] * my as f64 + w.col[2] * mz as f64;
                if p0.classify_point(z, tol) == Classification::Interior {
                    eprintln!(
                        "warning: lattice difference ({mx},{my},{mz}) lies interior to the difference body"
                    );
                }
            }
        }
    }
}

fn fmt_density(x: f64) -> String {
    format!("{x:.15}")
}

fn fmt_f(x: f64) -> String {
    // fixed format keeps reports byte-identical across runs
    format!("{x:.17}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn render_report(
    input: &str,
    r: &PackingResult,
    warnings: &[&str],
    exact: Option<&latpack::verify::ExactCheck>,
    runtime_ms: u128,
) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    s.push_str(&format!("  \"input\": {},\n", json_string(input)));
    s.push_str(&format!("  \"density\": {},\n", fmt_density(r.density)));
    match exact {
        Some(chk) => {
            s.push_str(&format!(
                "  \"exact_solve_verified\": {},\n",
                chk.solve_verified
            ));
            match &chk.exact_form {
                Some(form) => {
                    s.push_str(&format!("  \"density_exact\": {},\n", json_string(form)))
                }
                None => s.push_str("  \"density_exact\": null,\n"),
            }
        }
        None => {
            s.push_str("  \"exact_solve_verified\": null,\n");
            s.push_str("  \"density_exact\": null,\n");
        }
    }
    s.push_str(&format!(
        "  \"critical_determinant\": {},\n",
        fmt_f(r.critical_determinant)
    ));
    // basis in row-major order
    let b = &r.basis;
    let rows = [
        [b.col[0].x, b.col[1].x, b.col[2].x],
        [b.col[0].y, b.col[1].y, b.col[2].y],
        [b.col[0].z, b.col[1].z, b.col[2].z],
    ];
    s.push_str("  \"basis\": [\n");
    for (i, row) in rows.iter().enumerate() {
        s.push_str(&format!(
            "    [{}, {}, {}]{}\n",
            fmt_f(row[0]),
            fmt_f(row[1]),
            fmt_f(row[2]),
            if i < 2 { "," } else { "" }
        ));
    }
    s.push_str("  ],\n");
    s.push_str(&format!("  \"case\": {},\n", json_string(r.case.label())));
    let sel: Vec<String> = r.selection.iter().map(|i| i.to_string()).collect();
    s.push_str(&format!("  \"facet_selection\": [{}],\n", sel.join(", ")));
    s.push_str("  \"contact_points\": [\n");
    for (i, c) in r.contact_points.iter().enumerate() {
        s.push_str(&format!(
            "    [{}, {}, {}]{}\n",
            fmt_f(c.x),
            fmt_f(c.y),
            fmt_f(c.z),
            if i + 1 < r.contact_points.len() { "," } else { "" }
        ));
    }
    s.push_str("  ],\n");
    s.push_str(&format!("  \"marginal\": {},\n", r.marginal));
    let w: Vec<String> = warnings.iter().map(|x| json_string(x)).collect();
    s.push_str(&format!("  \"warnings\": [{}],\n", w.join(", ")));
    s.push_str("  \"counts\": {\n");
    s.push_str(&format!(
        "    \"selections_enumerated\": {},\n",
        r.counts.selections_enumerated
    ));
    s.push_str(&format!("    \"pruned_by_G\": {},\n", r.counts.pruned_by_g));
    s.push_str(&format!(
        "    \"pruned_by_S0\": {},\n",
        r.counts.pruned_by_s0
    ));
    s.push_str(&format!(
        "    \"rank_skipped\": {},\n",
        r.counts.rank_skipped
    ));
    s.push_str(&format!(
        "    \"subspaces_checked\": {}\n",
        r.counts.subspaces_checked
    ));
    s.push_str("  },\n");
    s.push_str(&format!("  \"runtime_ms\": {runtime_ms}\n"));
    s.push_str("}\n");
    s
}
