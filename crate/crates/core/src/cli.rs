//! Command-line front end. [`run`] returns the exit status and the report
//! instead of printing, so the binary and the golden tests share one path.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::category::{
    check_amorphism, check_counit_naturality, check_unit_naturality, functor_g_hat_mor, functor_u, functor_u_mor, hat_f_mor,
    tilde_f_mor, unit_iso, verify_adjunction_instance, verify_round_trip, AObject,
};
use crate::enumerate::{
    enumerate_premorphisms, enumerate_proper_extensions, enumerate_restriction_semigroups, enumerate_semilattices,
    search_question1, EnumConfig,
};
use crate::error::{Error, Result};
use crate::extension::{classify_extension, decompose, ProperExt};
use crate::format::{
    load_category, load_morphism, load_premorph, load_rsemigroup, write_rsemigroup, write_semilattice, PremorphFile,
};
use crate::premorphism::{check_action_conditions, classify, join, Requirement};
use crate::product::partial_action_product;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rsg", about = "Finite restriction semigroups, partial actions and proper extensions")]
struct Cli {
    /// Maximum number of structures any enumeration may produce.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an algebra file and print its basic invariants.
    Validate { file: PathBuf },
    /// Classify a premorphism file; triples also get the action conditions.
    Classify { file: PathBuf },
    /// Build the partial action product of an action triple file.
    Product { file: PathBuf },
    /// Decompose a proper extension given as a morphism file.
    Decompose { file: PathBuf },
    /// List small structures.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Order of the generated algebra or semilattice.
        #[arg(long)]
        order: Option<usize>,
        /// Algebra file acting or being extended (premorph, extension).
        #[arg(long)]
        source: Option<PathBuf>,
        /// Number of points acted on (premorph).
        #[arg(long)]
        carrier: Option<usize>,
        #[arg(long)]
        up_to_iso: bool,
        /// Comma-separated condition names the premorphisms must satisfy.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
    },
    /// Check the category statements on a diagram file.
    CategoryCheck { file: PathBuf },
    /// Search small premorphisms separating the two forms of local strongness.
    SearchQ1 {
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 3)]
        max_carrier: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Semilattice,
    Rsemigroup,
    Premorph,
    Extension,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    match execute(&cli) {
        Ok((code, text)) => (code, text),
        Err(Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
        Err(Failed(e)) => (EXIT_FAILURE, format!("error: {e}\n")),
    }
}

enum Outcome {
    Usage(String),
    Failed(Error),
}
use Outcome::{Failed, Usage};

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Failed(e)
    }
}

fn execute(cli: &Cli) -> std::result::Result<(i32, String), Outcome> {
    let cfg = EnumConfig { count_limit: cli.limit, ..EnumConfig::default() };
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Classify { file } => Ok((EXIT_OK, classify_file(file)?)),
        Command::Product { file } => Ok((EXIT_OK, product(file)?)),
        Command::Decompose { file } => decompose_file(file),
        Command::Enumerate { kind, order, source, carrier, up_to_iso, filter } => {
            let cfg = EnumConfig { up_to_iso: *up_to_iso, ..cfg };
            let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Usage(format!("--kind needs --{name}")));
            let load_source = || {
                source
                    .as_deref()
                    .ok_or_else(|| Usage("--kind needs --source".into()))
                    .and_then(|p| load_rsemigroup(p).map_err(Failed))
            };
            let filters = filter
                .iter()
                .map(|f| Requirement::parse(f).ok_or_else(|| Usage(format!("unknown filter `{f}`"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let text = match kind {
                Kind::Semilattice => enumerate_semilattices(need(*order, "order")?, &cfg)?.iter().map(write_semilattice).collect(),
                Kind::Rsemigroup => {
                    enumerate_restriction_semigroups(need(*order, "order")?, &cfg)?.iter().map(write_rsemigroup).collect()
                }
                Kind::Premorph => {
                    let s = load_source()?;
                    let k = need(*carrier, "carrier")?;
                    let file = source.as_deref().and_then(Path::file_name).map_or("-".into(), |f| f.to_string_lossy().into_owned());
                    enumerate_premorphisms(&s, k, &filters, &cfg)?
                        .iter()
                        .map(|p| {
                            let body: String = p.maps.iter().map(|f| format!("{f}\n")).collect();
                            format!("premorph {file} {k}\n{body}")
                        })
                        .collect()
                }
                Kind::Extension => {
                    let s = load_source()?;
                    enumerate_proper_extensions(need(*order, "order")?, &s, &cfg)?
                        .iter()
                        .map(|e| format!("{}map: {}\n", write_rsemigroup(e.top()), join(&e.psi().map)))
                        .collect()
                }
            };
            Ok((EXIT_OK, separate(text)))
        }
        Command::CategoryCheck { file } => category_check(file),
        Command::SearchQ1 { max_order, max_carrier } => Ok((EXIT_OK, search_question1(*max_order, *max_carrier, &cfg)?.to_text())),
    }
}

/// Blank-line separated blocks with a final count.
fn separate(blocks: Vec<String>) -> String {
    let count = blocks.len();
    let mut out = blocks.join("\n");
    if count > 0 {
        out.push('\n');
    }
    out.push_str(&format!("# count: {count}\n"));
    out
}

fn validate(file: &Path) -> std::result::Result<(i32, String), Outcome> {
    let s = match load_rsemigroup(file) {
        Ok(s) => s,
        Err(e @ (Error::Io { .. } | Error::Parse { .. })) => return Err(Failed(e)),
        Err(e) => return Ok((EXIT_FAILURE, format!("invalid restriction semigroup: {e}\n"))),
    };
    let p = s.projections();
    let sigma = s.sigma()?;
    let blocks: Vec<String> = sigma.blocks().iter().map(|b| format!("{{{}}}", join(b))).collect();
    let mut out = format!("valid restriction semigroup, |P|={}\n", p.len());
    out.push_str(&format!("order: {}\n", s.order()));
    out.push_str(&format!("projections: {}\n", join(&p)));
    out.push_str(&format!("reduced: {}\n", s.is_reduced()));
    out.push_str(&format!("proper: {}\n", s.is_proper()?));
    out.push_str(&format!("sigma-blocks: {}\n", blocks.join(" ")));
    out.push_str(&format!("natural-order-pairs: {}\n", s.natural_order()?.count()));
    Ok((EXIT_OK, out))
}

fn classify_file(file: &Path) -> Result<String> {
    let loaded = load_premorph(file)?;
    let mut out = classify(loaded.premorph())?.to_text();
    if let PremorphFile::Triple(t) = &loaded {
        out.push_str(&check_action_conditions(t)?.to_text());
    }
    Ok(out)
}

fn product(file: &Path) -> Result<String> {
    let PremorphFile::Triple(triple) = load_premorph(file)? else {
        return Err(Error::PreconditionFailed { condition: "file has q: and lattice: lines".into(), witness: vec![] });
    };
    let p = partial_action_product(&triple)?;
    let mut out = write_rsemigroup(&p.algebra);
    out.push_str("# pairs:\n");
    for (i, (y, s)) in p.pairs.iter().enumerate() {
        out.push_str(&format!("# {i} = ({y},{s})\n"));
    }
    Ok(out)
}

fn decompose_file(file: &Path) -> std::result::Result<(i32, String), Outcome> {
    let psi = load_morphism(file)?;
    let ext = match ProperExt::new(psi) {
        Ok(e) => e,
        Err(e @ Error::NotProper(_)) => return Ok((EXIT_FAILURE, format!("{e}\n"))),
        Err(e) => return Err(Failed(e)),
    };
    let d = decompose(&ext)?;
    let report = classify_extension(&ext)?;
    let mut out = write_rsemigroup(&d.product.algebra);
    out.push_str(&format!("eta: {}\n", join(&d.eta)));
    out.push_str("isomorphism: pass\n");
    out.push_str(&report.to_text());
    Ok((EXIT_OK, out))
}

fn category_check(file: &Path) -> std::result::Result<(i32, String), Outcome> {
    let spec = load_category(file)?;
    let mut lines: Vec<(String, Result<()>)> = Vec::new();
    let objects = spec.objects.iter().map(|(_, t)| AObject::new(t.clone())).collect::<Result<Vec<_>>>()?;
    for ((name, _), a) in spec.objects.iter().zip(&objects) {
        lines.push((format!("object {name} round-trip"), verify_round_trip(a)));
        lines.push((format!("object {name} universal properties"), verify_adjunction_instance(a, &objects).map(|_| ())));
        if a.in_hat {
            lines.push((format!("object {name} unit isomorphism"), unit_iso(a).map(|_| ())));
        }
    }
    for (from, to, f) in &spec.morphisms {
        let label = format!("morphism {} -> {}", spec.objects[*from].0, spec.objects[*to].0);
        let m = check_amorphism(&objects[*from], &objects[*to], f)?;
        if !m.is_morphism() {
            let failure = Error::PreconditionFailed { condition: "M1 and M2".into(), witness: f.clone() };
            lines.push((format!("{label} conditions"), Err(failure)));
            continue;
        }
        lines.push((format!("{label} conditions"), Ok(())));
        lines.push((format!("{label} functoriality"), hat_f_mor(&m).and_then(|_| tilde_f_mor(&m)).map(|_| ())));
        lines.push((format!("{label} product image"), functor_u_mor(&m).map(|_| ())));
        if m.from.in_hat && m.to.in_hat {
            lines.push((format!("{label} unit naturality"), check_unit_naturality(&m)));
            let counit = (|| {
                let gamma = functor_u_mor(&m)?;
                let (_, e1) = functor_u(&m.from)?;
                let (_, e2) = functor_u(&m.to)?;
                functor_g_hat_mor(&e1, &e2, &gamma)?;
                check_counit_naturality(&e1, &e2, &gamma)
            })();
            lines.push((format!("{label} counit naturality"), counit));
        }
    }
    let mut out = String::new();
    let mut ok = true;
    for (label, result) in &lines {
        match result {
            Ok(()) => out.push_str(&format!("{label}: pass\n")),
            Err(e) => {
                ok = false;
                out.push_str(&format!("{label}: fail ({e})\n"));
            }
        }
    }
    for (from, to, f) in &spec.morphisms {
        let m = check_amorphism(&objects[*from], &objects[*to], f)?;
        out.push_str(&format!(
            "morphism {} -> {} flags: M1={} M2={} M2r={} M3={} M3r={}\n",
            spec.objects[*from].0, spec.objects[*to].0, m.m1, m.m2, m.m2r, m.m3, m.m3r
        ));
    }
    Ok((if ok { EXIT_OK } else { EXIT_FAILURE }, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_verb_is_a_usage_error() {
        let (code, _) = run(["rsg", "frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let (code, _) = run(["rsg", "validate", "--bogus", "x"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_a_failure() {
        let (code, text) = run(["rsg", "validate", "/nonexistent/file.rsg"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(text.contains("/nonexistent/file.rsg"));
    }

    #[test]
    fn enumerate_needs_order() {
        let (code, _) = run(["rsg", "enumerate", "--kind", "semilattice"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn enumerate_semilattices_of_order_three() {
        let (code, text) = run(["rsg", "enumerate", "--kind", "semilattice", "--order", "3", "--up-to-iso"]);
        assert_eq!(code, EXIT_OK);
        assert!(text.ends_with("# count: 2\n"));
    }
}
