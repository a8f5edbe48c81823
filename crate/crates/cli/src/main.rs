//! `crk` — characteristic ranks, cup-lengths and cup-length bounds over
//! finite graded F2-cohomology rings, plus a verification suite replaying
//! the catalog's expected values.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crk_core::algebra::ConstraintFlag;
use crk_core::catalog::{self, Family};
use crk_core::dsl::{self, Realized};
use crk_core::engine::{self, SWProfile, DEFAULT_ENUMERATION_LIMIT};
use crk_core::Algebra;

use report::{Report, Status};

#[derive(Parser)]
#[command(
    name = "crk",
    version,
    about = "characteristic ranks of Stiefel-Whitney profiles over finite F2-cohomology rings"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a presentation file and echo its canonical form.
    Parse { file: PathBuf },
    /// Characteristic rank of a bundle, with the per-degree coverage table.
    Charrank {
        file: PathBuf,
        #[arg(long)]
        space: String,
        #[arg(long)]
        bundle: String,
    },
    /// Cup-length of a space, with a witness product.
    Cup {
        file: PathBuf,
        #[arg(long)]
        space: String,
    },
    /// Cup-length bounds: `--bundle B --k K` for the bundle form,
    /// `--z Z` for the null-cobordant form.
    Bound {
        file: PathBuf,
        #[arg(long)]
        space: String,
        #[arg(long)]
        bundle: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        z: Option<usize>,
    },
    /// Formal upper characteristic rank by constrained enumeration.
    Ucharrank {
        file: PathBuf,
        #[arg(long)]
        space: String,
        /// Comma-separated: power2, spherical, trivial-only, wu-sq1, none.
        /// Defaults to the constraints declared by the space.
        #[arg(long)]
        constraints: Option<String>,
        /// Cap on the enumeration universe (also CRK_LIMIT).
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Catalog spaces: list families or emit one as a document.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Replay every catalog expected value; exit 0 iff all match.
    Verify {
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the families and the default verification set.
    List,
    /// Emit a catalog space (presentation plus bundles) as a document.
    Emit {
        family: String,
        params: Vec<usize>,
    },
}

/// Errors on the usage/parse path; everything here exits 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command, json) {
        Ok(code) => ExitCode::from(code as u8),
        Err(UsageError(message)) => {
            eprintln!("crk: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, json: bool) -> Result<i32, UsageError> {
    let report = match command {
        Command::Parse { file } => cmd_parse(&file)?,
        Command::Charrank {
            file,
            space,
            bundle,
        } => cmd_charrank(&file, &space, &bundle)?,
        Command::Cup { file, space } => cmd_cup(&file, &space)?,
        Command::Bound {
            file,
            space,
            bundle,
            k,
            z,
        } => cmd_bound(&file, &space, bundle.as_deref(), k, z)?,
        Command::Ucharrank {
            file,
            space,
            constraints,
            limit,
        } => cmd_ucharrank(&file, &space, constraints.as_deref(), limit)?,
        Command::Catalog { command } => match command {
            CatalogCommand::List => cmd_catalog_list(),
            CatalogCommand::Emit { family, params } => cmd_catalog_emit(&family, &params)?,
        },
        Command::Verify { family } => cmd_verify(family.as_deref())?,
    };
    Ok(report.emit(json))
}

// ---------------------------------------------------------------------------
// Shared loading
// ---------------------------------------------------------------------------

struct Loaded {
    doc: dsl::Document,
    realized: Realized,
}

fn load(file: &Path) -> Result<Loaded, UsageError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
    let doc = dsl::parse(&text).map_err(|e| UsageError(format!("{}:{e}", file.display())))?;
    let realized =
        dsl::realize_document(&doc).map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
    Ok(Loaded { doc, realized })
}

fn find_space<'a>(loaded: &'a Loaded, name: &str) -> Result<&'a Algebra, UsageError> {
    loaded
        .realized
        .algebras
        .get(name)
        .ok_or_else(|| UsageError(format!("no space {name:?} in the file")))
}

fn find_profile<'a>(
    loaded: &'a Loaded,
    space: &str,
    bundle: &str,
) -> Result<&'a SWProfile, UsageError> {
    loaded
        .realized
        .profiles
        .get(&(space.to_string(), bundle.to_string()))
        .ok_or_else(|| UsageError(format!("no bundle {bundle:?} on space {space:?}")))
}

fn enumeration_limit(flag: Option<u64>) -> Result<u64, UsageError> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var("CRK_LIMIT") {
        Ok(value) => value
            .parse()
            .map_err(|_| UsageError(format!("CRK_LIMIT is not a number: {value:?}"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_LIMIT),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_parse(file: &Path) -> Result<Report, UsageError> {
    let loaded = load(file)?;
    let canonical = dsl::render_document(&loaded.doc);
    let mut report = Report::new("parse");
    report.input("file", file.display().to_string());
    report.result("spaces", loaded.doc.spaces.len());
    report.result("bundles", loaded.doc.bundles.len());
    report.result("maps", loaded.doc.maps.len());
    report.result("canonical", canonical.clone());

    let mut sq1_violations = Vec::new();
    for (name, alg) in &loaded.realized.algebras {
        if alg.sq1().is_some() {
            for violation in engine::sq1_validate(alg).expect("sq1 present") {
                sq1_violations.push(format!("{name}: {violation}"));
            }
        }
    }
    report.result("sq1_violations", sq1_violations.clone());

    report.line(canonical.trim_end());
    report.line(format!(
        "parsed {} space(s), {} bundle(s), {} map(s); all realized and validated",
        loaded.doc.spaces.len(),
        loaded.doc.bundles.len(),
        loaded.doc.maps.len()
    ));
    for v in &sq1_violations {
        report.line(format!("sq1 violation: {v}"));
    }
    Ok(report)
}

fn cmd_charrank(file: &Path, space: &str, bundle: &str) -> Result<Report, UsageError> {
    let loaded = load(file)?;
    let alg = find_space(&loaded, space)?;
    let profile = find_profile(&loaded, space, bundle)?;

    let spans = engine::sw_spans(profile);
    let value = engine::charrank(profile);
    let lints = engine::spherical_lints(profile);

    let mut report = Report::new("charrank");
    report.input("file", file.display().to_string());
    report.input("space", space);
    report.input("bundle", bundle);
    report.result("charrank", value);
    report.result("profile", profile.render());
    let coverage: Vec<serde_json::Value> = (0..=alg.dim())
        .map(|j| {
            json!({
                "degree": j,
                "dim": alg.betti(j),
                "span": spans.rank(j),
                "covered": spans.covered(j),
            })
        })
        .collect();
    report.result("coverage", coverage);
    report.result("lints", lints.clone());
    report.cite("user input");

    report.line(format!("space: {space} (dim {})", alg.dim()));
    report.line(format!("bundle: {bundle} ({})", profile.render()));
    report.line(format!("charrank = {value}"));
    report.line("degree  dim H^j  span  covered");
    for j in 0..=alg.dim() {
        report.line(format!(
            "{:>6}  {:>7}  {:>4}  {}",
            j,
            alg.betti(j),
            spans.rank(j),
            if spans.covered(j) { "yes" } else { "no" }
        ));
    }
    if alg.betti(alg.dim()) == 0 {
        report.line(format!(
            "note: no cohomology in top degree {}; empty degrees count as covered",
            alg.dim()
        ));
    }
    for lint in &lints {
        report.line(format!("note: {lint}"));
    }
    Ok(report)
}

fn cmd_cup(file: &Path, space: &str) -> Result<Report, UsageError> {
    let loaded = load(file)?;
    let alg = find_space(&loaded, space)?;
    let value = engine::cup_length(alg);
    let witness = engine::cup_witness(alg);

    let mut report = Report::new("cup");
    report.input("file", file.display().to_string());
    report.input("space", space);
    report.result("cup_length", value);
    report.result(
        "witness",
        witness
            .iter()
            .map(|(deg, name)| json!({"degree": deg, "class": name}))
            .collect::<Vec<_>>(),
    );
    report.cite("user input");

    report.line(format!("space: {space} (dim {})", alg.dim()));
    report.line(format!("cup length = {value}"));
    if !witness.is_empty() {
        let classes: Vec<&str> = witness.iter().map(|(_, n)| n.as_str()).collect();
        let degrees: Vec<String> = witness.iter().map(|(d, _)| d.to_string()).collect();
        report.line(format!(
            "witness: {} (degrees {})",
            classes.join(" * "),
            degrees.join("+")
        ));
    }
    Ok(report)
}

fn cmd_bound(
    file: &Path,
    space: &str,
    bundle: Option<&str>,
    k: Option<usize>,
    z: Option<usize>,
) -> Result<Report, UsageError> {
    let loaded = load(file)?;
    let alg = find_space(&loaded, space)?;

    let mut report = Report::new("bound");
    report.input("file", file.display().to_string());
    report.input("space", space);
    report.cite("user input");

    let outcome = match (bundle, k, z) {
        (Some(bundle), Some(k), None) => {
            report.input("bundle", bundle);
            report.input("k", k);
            report.result("form", "bundle");
            let profile = find_profile(&loaded, space, bundle)?;
            engine::cup_bound_from_profile(profile, k)
        }
        (None, None, Some(z)) => {
            report.input("z", z);
            report.result("form", "null-cobordant");
            engine::cup_bound_null_cobordant(alg, z)
        }
        _ => {
            return Err(UsageError(
                "bound needs either --bundle B --k K or --z Z".into(),
            ))
        }
    };

    match outcome {
        Ok(bound) => {
            report.result("floor", bound.floor);
            report.result(
                "exact",
                format!("{}/{}", bound.exact.numer(), bound.exact.denom()),
            );
            report.line(format!(
                "bound = {} (exact {}/{})",
                bound.floor,
                bound.exact.numer(),
                bound.exact.denom()
            ));
        }
        Err(e) => {
            report.status = Status::Violation;
            report.result("violated_precondition", e.to_string());
            report.line(format!("precondition violated: {e}"));
        }
    }
    Ok(report)
}

fn parse_constraint_list(
    alg: &Algebra,
    list: Option<&str>,
) -> Result<(Vec<ConstraintFlag>, bool), UsageError> {
    let Some(list) = list else {
        return Ok((alg.meta().constraint_flags.clone(), true));
    };
    let mut flags = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if token == "none" {
            if list.split(',').count() > 1 {
                return Err(UsageError("`none` cannot be combined with other flags".into()));
            }
            return Ok((Vec::new(), false));
        }
        let flag = ConstraintFlag::parse(token)
            .ok_or_else(|| UsageError(format!("unknown constraint flag `{token}`")))?;
        flags.push(flag);
    }
    Ok((flags, false))
}

fn cmd_ucharrank(
    file: &Path,
    space: &str,
    constraints: Option<&str>,
    limit: Option<u64>,
) -> Result<Report, UsageError> {
    let loaded = load(file)?;
    let alg = find_space(&loaded, space)?;
    let limit = enumeration_limit(limit)?;
    let (flags, defaulted) = parse_constraint_list(alg, constraints)?;

    let mut report = Report::new("ucharrank");
    report.input("file", file.display().to_string());
    report.input("space", space);
    report.input("limit", limit);
    report.input(
        "constraints",
        flags.iter().map(|f| f.as_str()).collect::<Vec<_>>(),
    );
    report.cite("user input");
    if defaulted {
        report.line(format!(
            "constraints: {} (declared by the space)",
            if flags.is_empty() {
                "none".to_string()
            } else {
                flags
                    .iter()
                    .map(|f| f.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        ));
    }

    let resolved = match engine::resolve_constraints(alg, &flags) {
        Ok(resolved) => resolved,
        Err(e) => {
            report.status = Status::Violation;
            report.result("violated_precondition", e.to_string());
            report.line(format!("precondition violated: {e}"));
            return Ok(report);
        }
    };
    match engine::ucharrank_formal(alg, &resolved, limit) {
        Ok(result) => {
            report.result("ucharrank", result.value);
            report.result("witness", result.witness.render());
            report.result("universe", result.universe);
            report.result("surviving", result.surviving);
            report.line(format!("ucharrank (formal) = {}", result.value));
            report.line(format!("witness: {}", result.witness.render()));
            report.line(format!(
                "universe: {} profiles, {} surviving the constraints",
                result.universe, result.surviving
            ));
        }
        Err(e) => {
            report.status = Status::Violation;
            report.result("violated_precondition", e.to_string());
            report.line(format!("precondition violated: {e}"));
        }
    }
    Ok(report)
}

fn cmd_catalog_list() -> Report {
    let mut report = Report::new("catalog-list");
    report.line("families:");
    let mut families = Vec::new();
    for (name, params, about) in catalog::FAMILY_HELP {
        report.line(format!("  {name} {params:<6} {about}"));
        families.push(json!({"family": name, "params": params, "about": about}));
    }
    report.result("families", families);
    let defaults: Vec<String> = catalog::default_records()
        .iter()
        .map(|r| r.name().to_string())
        .collect();
    report.line(format!("default verification set ({}):", defaults.len()));
    report.line(format!("  {}", defaults.join(", ")));
    report.result("defaults", defaults);
    report
}

fn cmd_catalog_emit(family: &str, params: &[usize]) -> Result<Report, UsageError> {
    let family = Family::from_cli(family, params)?;
    let record = catalog::build(family)?;
    let text = catalog::emit(&record);
    let mut report = Report::new("catalog-emit");
    report.input("family", family.cli_name());
    report.input("params", family.params());
    report.result("space", record.name());
    report.result("text", text.clone());
    report.human = text;
    Ok(report)
}

fn cmd_verify(family: Option<&str>) -> Result<Report, UsageError> {
    if let Some(name) = family {
        if !catalog::FAMILY_HELP.iter().any(|(f, _, _)| *f == name) {
            return Err(UsageError(format!("unknown family `{name}`")));
        }
    }
    let limit = enumeration_limit(None)?;
    let mut report = Report::new("verify");
    if let Some(name) = family {
        report.input("family", name);
    }

    let mut claims = Vec::new();
    let mut total = 0usize;
    let mut failed = 0usize;
    for record in catalog::default_records() {
        if let Some(name) = family {
            if record.family.cli_name() != name {
                continue;
            }
        }
        for outcome in catalog::verify_record(&record, limit) {
            total += 1;
            if !outcome.pass {
                failed += 1;
            }
            report.line(format!(
                "[{}] {}: {}: expected {}, computed {} — {}",
                if outcome.pass { "PASS" } else { "FAIL" },
                outcome.space,
                outcome.label,
                outcome.expected,
                outcome.computed,
                outcome.citation
            ));
            claims.push(json!({
                "space": outcome.space,
                "claim": outcome.label,
                "expected": outcome.expected,
                "computed": outcome.computed,
                "citation": outcome.citation,
                "pass": outcome.pass,
            }));
        }
    }
    report.result("claims", claims);
    report.result("total", total);
    report.result("failed", failed);
    report.line(format!(
        "verify: {total} claims, {} passed, {failed} failed",
        total - failed
    ));
    if failed > 0 {
        report.status = Status::Mismatch;
    }
    Ok(report)
}
