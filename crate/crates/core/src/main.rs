//! Command-line front-end: single-file checks and the batch catalog driver.
//!
//! Exit codes: 0 = all checks passed, 1 = a check failed, 2 = usage or
//! parse error.

use algtool::algebra::AlgebraDef;
use algtool::catalog::{self, Catalog, VerifyOptions};
use algtool::cohomology;
use algtool::degeneration;
use algtool::identities::{check_identity_alg, IdentityName};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "algtool")]
#[command(about = "Exact verification toolkit for low-dimensional nonassociative algebras")]
#[command(version)]
struct Cli {
    /// Output format: text or records (key=value lines)
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a polynomial identity on an algebra file
    Check {
        /// Identity name (flexible, jordan, nc_jordan, associative,
        /// commutative, anticommutative, standard1, standard2, standard,
        /// kokoris, generic_poisson_compat, generic_poisson_jordan,
        /// fourth_power_assoc)
        #[arg(long)]
        identity: String,
        file: PathBuf,
    },
    /// Compute the derivation algebra of an algebra file
    Derivations { file: PathBuf },
    /// Compute a basis of the skew cocycle space Z2 of a commutative algebra
    Cocycles { file: PathBuf },
    /// Build the extension of a commutative algebra by a cocycle file
    Extend { algebra: PathBuf, cocycle: PathBuf },
    /// Degeneration witness commands
    #[command(subcommand)]
    Degeneration(DegenCmd),
    /// Closed-set membership and sampling
    #[command(subcommand)]
    Closedset(ClosedsetCmd),
    /// Print the basis-invariant fingerprint of an algebra file
    Invariants { file: PathBuf },
    /// Isomorphism witness commands
    #[command(subcommand)]
    Iso(IsoCmd),
    /// Catalog commands
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum DegenCmd {
    /// Verify a parametrized-basis witness file against the catalog
    Verify {
        file: PathBuf,
        #[command(flatten)]
        cat: CatalogArg,
    },
}

#[derive(Subcommand)]
enum ClosedsetCmd {
    /// Exact membership of an algebra in a closed-set file
    Member { algebra: PathBuf, set: PathBuf },
    /// Randomized orbit sampling of an algebra against a closed-set file
    Sample {
        algebra: PathBuf,
        set: PathBuf,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum IsoCmd {
    /// Verify an isomorphism witness file against the catalog
    Verify {
        file: PathBuf,
        #[command(flatten)]
        cat: CatalogArg,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Run every claim in a catalog directory and print a report
    Verify {
        dir: Option<PathBuf>,
        /// Restrict to one or more report sections
        #[arg(long)]
        section: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling trials per closed-set target
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// Worker threads (0 = number of processors)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Args)]
struct CatalogArg {
    /// Catalog directory (default: $ALGTOOL_CATALOG or ./catalog)
    #[arg(long)]
    catalog: Option<PathBuf>,
}

fn default_catalog_dir(arg: &CatalogArg) -> PathBuf {
    if let Some(p) = &arg.catalog {
        return p.clone();
    }
    if let Ok(p) = std::env::var("ALGTOOL_CATALOG") {
        return PathBuf::from(p);
    }
    PathBuf::from("catalog")
}

struct Out {
    records: bool,
    buf: String,
}

impl Out {
    fn line(&mut self, status: &str, check: &str, detail: &str) {
        if self.records {
            self.buf
                .push_str(&format!("status={status} check={check} detail={detail:?}\n"));
        } else {
            self.buf.push_str(&format!("{status} {check}: {detail}\n"));
        }
    }

    fn raw(&mut self, s: &str) {
        if !self.records {
            self.buf.push_str(s);
            if !s.ends_with('\n') {
                self.buf.push('\n');
            }
        }
    }
}

fn load_algebra(path: &Path) -> Result<AlgebraDef, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let entry = algtool::catalog::parse_single_algebra(&path.display().to_string(), &text)
        .map_err(|e| e.to_string())?;
    Ok(entry)
}

fn run(cli: Cli) -> Result<(String, bool), String> {
    let mut out = Out {
        records: cli.format == "records",
        buf: String::new(),
    };
    if cli.format != "text" && cli.format != "records" {
        return Err(format!("unknown format `{}`", cli.format));
    }
    let mut ok = true;
    match &cli.command {
        Cmd::Check { identity, file } => {
            let id: IdentityName = identity.parse().map_err(|e| format!("{e}"))?;
            let alg = load_algebra(file)?;
            let v = check_identity_alg(&alg, id);
            let pass = v.holds();
            ok = pass;
            out.line(
                if pass { "PASS" } else { "FAIL" },
                &format!("check/{}:{identity}", alg.name),
                &v.to_string(),
            );
        }
        Cmd::Derivations { file } => {
            let alg = load_algebra(file)?;
            let der = degeneration::derivations(&alg);
            out.raw(&format!("dim {}", der.generic_dimension));
            if !der.exceptional_locus.is_empty() {
                let conds: Vec<String> = der
                    .exceptional_locus
                    .iter()
                    .map(|s| format!("{s} != 0"))
                    .collect();
                out.raw(&format!("generic assuming {}", conds.join(", ")));
            }
            for (i, b) in der.basis.iter().enumerate() {
                let n = alg.dim;
                let rows: Vec<String> = (0..n)
                    .map(|l| {
                        let r: Vec<String> =
                            (0..n).map(|k| b[l * n + k].to_string()).collect();
                        format!("[{}]", r.join(", "))
                    })
                    .collect();
                out.raw(&format!("D{} = {}", i + 1, rows.join(" ")));
            }
            out.line(
                "PASS",
                &format!("derivations/{}", alg.name),
                &format!("dim {}", der.generic_dimension),
            );
        }
        Cmd::Cocycles { file } => {
            let alg = load_algebra(file)?;
            let space = cohomology::z2_basis(&alg).map_err(|e| e.to_string())?;
            out.raw(&format!("dim {}", space.generic_dimension));
            for (i, theta) in space.basis.iter().enumerate() {
                out.raw(&format!("theta{} = {}", i + 1, render_cocycle(theta)));
            }
            out.line(
                "PASS",
                &format!("cocycles/{}", alg.name),
                &format!("dim {}", space.generic_dimension),
            );
        }
        Cmd::Extend { algebra, cocycle } => {
            let alg = load_algebra(algebra)?;
            let text = std::fs::read_to_string(cocycle)
                .map_err(|e| format!("{}: {e}", cocycle.display()))?;
            let theta =
                catalog::parse_cocycle_file(&cocycle.display().to_string(), &text, alg.dim)
                    .map_err(|e| e.to_string())?;
            let ext = cohomology::extend(&alg, &theta).map_err(|e| e.to_string())?;
            out.raw(&render_table(&ext));
            out.line("PASS", &format!("extend/{}", alg.name), "extension built");
        }
        Cmd::Degeneration(DegenCmd::Verify { file, cat }) => {
            let catalog = Catalog::load(&default_catalog_dir(cat)).map_err(|e| e.to_string())?;
            let text =
                std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
            let w = catalog
                .parse_witness(&file.display().to_string(), &text)
                .map_err(|e| e.to_string())?;
            let src = catalog.entry(&w.source).map_err(|e| e.to_string())?;
            let tgt = catalog.entry(&w.target).map_err(|e| e.to_string())?;
            let rep = degeneration::verify_degeneration(
                &src.algebra,
                &w.index,
                &w.basis,
                &tgt.algebra,
            )
            .map_err(|e| e.to_string())?;
            ok = rep.pass;
            let detail = if rep.pass {
                "all limits match the target".to_string()
            } else {
                rep.failures.join("; ")
            };
            out.line(
                if rep.pass { "PASS" } else { "FAIL" },
                &format!("degeneration/{} -> {}", rep.source, rep.target),
                &detail,
            );
        }
        Cmd::Closedset(ClosedsetCmd::Member { algebra, set }) => {
            let alg = load_algebra(algebra)?;
            let cs = catalog::load_closed_set_file(set).map_err(|e| e.to_string())?;
            let v = degeneration::in_closed_set(&alg, &cs.set).map_err(|e| e.to_string())?;
            ok = v.holds();
            out.line(
                if ok { "PASS" } else { "FAIL" },
                &format!("closedset/{}/member/{}", cs.set.name, alg.name),
                &v.to_string(),
            );
        }
        Cmd::Closedset(ClosedsetCmd::Sample {
            algebra,
            set,
            trials,
            seed,
        }) => {
            let alg = load_algebra(algebra)?;
            let cs = catalog::load_closed_set_file(set).map_err(|e| e.to_string())?;
            let rep = degeneration::borel_sample_against_set(&alg, &cs.set, *trials, *seed)
                .map_err(|e| e.to_string())?;
            ok = rep.found_at.is_none();
            let detail = match rep.found_at {
                None => format!(
                    "no representative found in {} trials (seed {})",
                    rep.trials, rep.seed
                ),
                Some(t) => format!("representative found at trial {t} (seed {})", rep.seed),
            };
            out.line(
                if ok { "PASS" } else { "FAIL" },
                &format!("closedset/{}/sample/{}", cs.set.name, alg.name),
                &detail,
            );
        }
        Cmd::Invariants { file } => {
            let alg = load_algebra(file)?;
            let fp = catalog::invariant_fingerprint(&alg);
            out.raw(&fp.to_string());
            out.line("PASS", &format!("invariants/{}", alg.name), &fp.to_string());
        }
        Cmd::Iso(IsoCmd::Verify { file, cat }) => {
            let catalog = Catalog::load(&default_catalog_dir(cat)).map_err(|e| e.to_string())?;
            let text =
                std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
            let w = catalog
                .parse_iso(&file.display().to_string(), &text)
                .map_err(|e| e.to_string())?;
            let src = catalog.resolve(&w.source).map_err(|e| e.to_string())?;
            let tgt = catalog
                .entry(&w.target.name)
                .and_then(|e| e.algebra.substitute(&w.target.bindings))
                .map_err(|e| e.to_string())?;
            let v = catalog::verify_isomorphism(&src, &tgt, &w.matrix).map_err(|e| e.to_string())?;
            ok = v.holds();
            out.line(
                if ok { "PASS" } else { "FAIL" },
                &format!("iso/{} ~ {}", w.source, w.target),
                &v.to_string(),
            );
        }
        Cmd::Catalog(CatalogCmd::Verify {
            dir,
            section,
            seed,
            trials,
            jobs,
        }) => {
            let dir = dir.clone().unwrap_or_else(|| {
                std::env::var("ALGTOOL_CATALOG")
                    .map(PathBuf::from)
                    .unwrap_or_else(|_| PathBuf::from("catalog"))
            });
            for s in section {
                if !catalog::SECTIONS.contains(&s.as_str()) {
                    return Err(format!(
                        "unknown section `{s}` (expected one of {})",
                        catalog::SECTIONS.join(", ")
                    ));
                }
            }
            let catalog = Catalog::load(&dir).map_err(|e| e.to_string())?;
            let opts = VerifyOptions {
                sections: section.clone(),
                seed: *seed,
                trials: *trials,
                jobs: *jobs,
            };
            let report = catalog::verify_catalog(&catalog, &opts);
            ok = report.failed() == 0;
            if cli.format == "records" {
                out.buf.push_str(&report.render_records());
            } else {
                out.buf.push_str(&report.render_text());
            }
        }
    }
    Ok((out.buf, ok))
}

fn render_cocycle(theta: &cohomology::Cocycle) -> String {
    let n = theta.dim;
    let mut comps = Vec::new();
    for i in 0..n {
        let b = theta.component(i);
        let mut terms = Vec::new();
        for p in 0..n {
            for q in (p + 1)..n {
                let v = b.get(p, q);
                if !v.is_zero() {
                    if v.is_one() {
                        terms.push(format!("d{}_{}", p + 1, q + 1));
                    } else {
                        terms.push(format!("({}) d{}_{}", v, p + 1, q + 1));
                    }
                }
            }
        }
        comps.push(if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        });
    }
    format!("[{}]", comps.join(", "))
}

fn render_table(a: &AlgebraDef) -> String {
    let mut lines = Vec::new();
    for i in 0..a.dim {
        for j in 0..a.dim {
            let mut terms = Vec::new();
            for k in 0..a.dim {
                let c = a.c(i, j, k);
                if !c.is_zero() {
                    if c.is_one() {
                        terms.push(format!("e{}", k + 1));
                    } else {
                        terms.push(format!("({}) e{}", c, k + 1));
                    }
                }
            }
            if !terms.is_empty() {
                lines.push(format!("e{}*e{} = {}", i + 1, j + 1, terms.join(" + ")));
            }
        }
    }
    lines.join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    let output = cli.output.clone();
    match run(cli) {
        Ok((buf, ok)) => {
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &buf) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{buf}"),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
